#pragma once

#include "prefteam/teams.hpp"
#include "prefteam/util.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prefteam {

// ============================================================================
// Formula AST
// ============================================================================
//
// Formulas follow the grammar
//     α ::= p | ~p | bot | top | α & α | α | α | =(a... ; b) | inc(a... ; b...)
// with negation on variables only. Nodes are interned: structurally equal
// formulas are the same pointer, so caches can key on identity and corpus
// deduplication is pointer comparison.

enum class NodeKind : std::uint8_t {
    PosLiteral,
    NegLiteral,
    Bottom,
    Top,
    And,
    Or,
    Dep,  // dependence atom =(args ; target); empty args = constancy atom
    Inc,  // inclusion atom inc(lhs ; rhs), |lhs| = |rhs| >= 1
};

enum class Fragment : std::uint8_t { PL, PDL, PIncl, Mixed };

const char* fragment_name(Fragment f);

class FormulaNode;
/// Interned formula handle. Never null; equality is structural equality.
using Formula = const FormulaNode*;

class FormulaNode {
public:
    NodeKind kind() const { return kind_; }

    Formula left() const { return left_; }    // And/Or
    Formula right() const { return right_; }  // And/Or

    /// Literal variable name (Pos/NegLiteral).
    const std::string& var() const { return vars_[0]; }

    /// Dep: argument list (may be empty) and target.
    std::span<const std::string> dep_args() const {
        return {vars_.data(), vars_.size() - 1};
    }
    const std::string& dep_target() const { return vars_.back(); }

    /// Inc: left-hand and right-hand variable sequences (equal arity).
    std::span<const std::string> inc_lhs() const {
        return {vars_.data(), vars_.size() / 2};
    }
    std::span<const std::string> inc_rhs() const {
        return {vars_.data() + vars_.size() / 2, vars_.size() / 2};
    }

    /// Syntactic fragment: PL (no atoms), PDL (dep only), PIncl (inc only),
    /// Mixed (both).
    Fragment fragment() const { return fragment_; }

    /// AST depth; atoms have depth 0.
    int depth() const { return depth_; }

    /// Stable intern id (creation order); usable as a dense table index.
    std::uint32_t id() const { return id_; }

private:
    FormulaNode() = default;

    NodeKind kind_ = NodeKind::Top;
    Formula left_ = nullptr;
    Formula right_ = nullptr;
    std::vector<std::string> vars_;
    Fragment fragment_ = Fragment::PL;
    int depth_ = 0;
    std::uint32_t id_ = 0;

    friend class Interner;
};

// ---------------------------------------------------------------------------
// Constructors (interned)
// ---------------------------------------------------------------------------

Formula pos(std::string_view var);
Formula neg(std::string_view var);
Formula top();
Formula bottom();
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
/// Dependence atom; empty args gives the constancy atom =(; target).
Formula dep(std::vector<std::string> args, std::string target);
/// Inclusion atom; throws std::invalid_argument unless |lhs| = |rhs| >= 1.
Formula inc(std::vector<std::string> lhs, std::vector<std::string> rhs);

/// Left-associative folds; empty conjunction = top, empty disjunction = bot.
Formula conj_all(std::span<const Formula> parts);
Formula disj_all(std::span<const Formula> parts);

inline Fragment classify(Formula f) { return f->fragment(); }

/// Distinct variable names occurring in f, sorted.
std::vector<std::string> variables_of(Formula f);

/// Total number of interned formulas (monotone; used for table sizing).
std::uint32_t interned_count();

// ---------------------------------------------------------------------------
// Parser / printer
// ---------------------------------------------------------------------------
//
// Concrete grammar (ASCII, whitespace insignificant):
//   formula := disj
//   disj    := conj ( "|" conj )*
//   conj    := unit ( "&" unit )*
//   unit    := "(" formula ")" | "top" | "bot" | ident | "~" ident
//            | "=(" ident* ";" ident ")" | "inc(" ident+ ";" ident+ ")"
//   ident   := [a-z][a-z0-9_]*
// "&" binds tighter than "|"; both are left-associative.

/// Throws ParseError (syntax, inc arity) or DomainError (variable not in
/// the domain).
Formula parse(std::string_view text, const TeamDomain& domain);

/// Canonical rendering; parse(print(f), dom) reproduces f exactly.
std::string print(Formula f);

// ---------------------------------------------------------------------------
// Transformations and constructions
// ---------------------------------------------------------------------------

/// Flattening: replaces every dependence atom with top. Defined for PDL
/// formulas only; throws std::invalid_argument on inclusion atoms.
Formula flatten(Formula f);

/// Θ_X: the disjunction over v ∈ X of the full literal descriptions of v.
/// Its team models are exactly the subteams of X; Θ_∅ = bot.
Formula theta_formula(const Team& x, const TeamDomain& dom);

/// Θ_X ∧ (θ ∨ ... ∨ θ) with l disjuncts of θ = ⋀_i =(; p_i): satisfied by
/// exactly the subteams of X of cardinality at most l. Requires l >= 1.
Formula cardinality_formula(const Team& x, const TeamDomain& dom, int max_cardinality);

// ---------------------------------------------------------------------------
// Corpus generation
// ---------------------------------------------------------------------------

struct CorpusOptions {
    /// Probability of recursing into a binary connective (vs an atom) at
    /// each step while depth remains.
    double binary_weight = 0.4;
    /// Generation stops after count * max_attempts_factor draws even when
    /// fewer than count distinct formulas exist.
    int max_attempts_factor = 64;
};

/// Deterministic seeded list of distinct well-formed formulas of AST depth
/// <= max_depth over the domain, using only atoms the fragment permits.
std::vector<Formula> generate_corpus(const TeamDomain& dom, int max_depth, Fragment atoms,
                                     std::uint64_t seed, int count,
                                     const CorpusOptions& options = {});

}  // namespace prefteam
