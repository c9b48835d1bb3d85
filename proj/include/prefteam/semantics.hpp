#pragma once

#include "prefteam/syntax.hpp"
#include "prefteam/teams.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

namespace prefteam {

// ============================================================================
// Team satisfaction X ⊨ φ
// ============================================================================
//
// Disjunction is the expensive clause: X ⊨ α∨β iff some cover X = Y∪Z has
// Y ⊨ α and Z ⊨ β. Three search strategies are implemented:
//
//   CoverSearch      all 3^|X| covers; always sound (the defining clause).
//   PartitionSearch  2^|X| partitions (Y, X∖Y); sound when both disjuncts
//                    are downward closed (PL/PDL fragments): shrinking the
//                    second part of a cover preserves satisfaction.
//   UnionShortcut    computes the maximal satisfying subteam of each
//                    disjunct (the union of all satisfying subteams, which
//                    itself satisfies by union closure) and tests whether
//                    the two maxima cover X; sound when both disjuncts are
//                    union closed (PL/PIncl fragments).
//
// Auto picks per Or node: UnionShortcut when applicable, else
// PartitionSearch when applicable, else CoverSearch. Forced strategies fall
// back to CoverSearch at nodes where they do not apply.

enum class DisjunctionStrategy : std::uint8_t {
    Auto,
    CoverSearch,
    PartitionSearch,
    UnionShortcut,
};

struct EvalOptions {
    DisjunctionStrategy strategy = DisjunctionStrategy::Auto;
};

/// Recursive team-semantics evaluator with per-(subformula, subteam)
/// memoization that persists across satisfies() calls, so sweeping one
/// formula over many teams shares work. Not thread-safe; create one per
/// worker (formulas themselves are shareable).
class Evaluator {
public:
    explicit Evaluator(const TeamDomain& dom, EvalOptions options = {});
    ~Evaluator();
    Evaluator(Evaluator&&) noexcept;
    Evaluator& operator=(Evaluator&&) noexcept;

    bool satisfies(const Team& x, Formula f);

private:
    struct NodeInfo;

    bool eval(Formula f, TeamBits x);
    bool eval_cover(Formula f, TeamBits x);
    bool eval_partition(Formula f, TeamBits x);
    TeamBits max_satisfying_subteam(Formula f, TeamBits x);
    NodeInfo& info_for(Formula f);

    TeamDomain dom_;
    EvalOptions options_;
    TeamBits universe_;
    std::vector<TeamBits> var_true_mask_;  // valuations where var i is true
    std::unordered_map<Formula, std::unique_ptr<NodeInfo>> infos_;
};

/// One-shot convenience wrapper around Evaluator.
bool satisfies(const TeamDomain& dom, const Team& x, Formula f, EvalOptions options = {});

/// Classical (valuation-level) truth for PL formulas; throws
/// std::invalid_argument on dependence/inclusion atoms.
bool classical_satisfies(const TeamDomain& dom, Valuation v, Formula f);

// ============================================================================
// Model sets and entailment
// ============================================================================

/// Session-wide memo of Mod(φ) = {X : X ⊨ φ}, keyed on formula identity and
/// domain. Get-or-compute is atomic: concurrent callers may duplicate a
/// computation but always observe identical results. Entries live until
/// clear(); returned references are stable meanwhile.
class ModCache {
public:
    static ModCache& global();

    const TeamFamily& get(Formula f, const TeamDomain& dom);
    void clear();
    std::size_t size() const;

private:
    TeamFamily compute(Formula f, const TeamDomain& dom);

    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::unique_ptr<TeamFamily>> entries_;
};

/// Mod(φ) over the full team lattice; requires |domain| <= kMaxFamilyVars.
/// Memoized in ModCache::global().
const TeamFamily& mod_set(Formula f, const TeamDomain& dom);

/// Monotone team entailment: Mod(φ) ⊆ Mod(ψ).
bool entails(Formula phi, Formula psi, const TeamDomain& dom);

/// Smallest-encoding team satisfying φ but not ψ, when entailment fails.
std::optional<Team> entails_witness(Formula phi, Formula psi, const TeamDomain& dom);

/// Classical entailment for PL formulas: every valuation satisfying alpha
/// satisfies beta. Throws std::invalid_argument on non-PL input.
bool classical_entails(Formula alpha, Formula beta, const TeamDomain& dom);

// ============================================================================
// Closure property report
// ============================================================================

struct ClosureReport {
    bool flat = false;             // X ⊨ φ iff every singleton subteam does
    bool downward_closed = false;  // X ⊨ φ and Y ⊆ X imply Y ⊨ φ
    bool union_closed = false;     // X, Y ⊨ φ imply X ∪ Y ⊨ φ
    bool empty_team = false;       // ∅ ⊨ φ
};

/// Exhaustive quantification over the full team lattice (n <= kMaxFamilyVars).
ClosureReport check_closure_properties(Formula f, const TeamDomain& dom);

}  // namespace prefteam
