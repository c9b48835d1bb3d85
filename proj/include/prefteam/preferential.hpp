#pragma once

#include "prefteam/semantics.hpp"
#include "prefteam/syntax.hpp"
#include "prefteam/teams.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace prefteam {

// ============================================================================
// Preferential models W = <S, ℓ, ≺>
// ============================================================================
//
// States carry team labels; ≺ is a strict partial order. Built-in sub/sup
// orders are stored as computable subset/superset rules (materializing
// edges over 2^(2^n) states would be wasteful); peng/pq and loaded custom
// models store explicit predecessor bitsets, transitively closed at
// construction with an irreflexivity check afterward.
//
// Finite strict partial orders are well-founded, so every model here is
// smooth; check_smoothness exists as an explicit oracle.

using StateId = std::uint32_t;

enum class OrderKind : std::uint8_t { Explicit, SubsetRule, SupersetRule, Discrete };

class PreferentialModel {
public:
    // -- factories ----------------------------------------------------------

    /// name ∈ {sub, sup, peng, pq, discrete}. peng requires domain "b p f",
    /// pq requires "p q". One state per non-empty team, labelled bijectively.
    static PreferentialModel builtin(std::string_view name, const TeamDomain& dom);

    /// Explicit model from labels and a generating relation; the order is
    /// transitively closed here, then checked for irreflexivity. Labels may
    /// repeat and may be empty (standardness is checked, not enforced).
    static PreferentialModel custom(const TeamDomain& dom, std::vector<TeamBits> labels,
                                    const std::vector<std::pair<StateId, StateId>>& edges,
                                    std::string name = "custom");

    /// Standard model (one state per non-empty team) with a seeded random
    /// order: the transitive closure of a DAG edge sample. Sampling follows
    /// a random linear extension, so closure can never create a cycle.
    /// With edge_probability given, edges are sampled over a random state
    /// permutation at that rate (0 yields the discrete model). Without it,
    /// the seed picks between that scheme and a subset-order-seeded scheme
    /// (which always satisfies the subteam-preference property), so both
    /// kinds occur in falsification sweeps.
    static PreferentialModel random_standard(const TeamDomain& dom, std::uint64_t seed,
                                             std::optional<double> edge_probability = std::nullopt);

    /// Model file format:
    ///   domain: p q
    ///   builtin: pq            — or, instead:
    ///   states:
    ///   0 = 9                  — state id = team encoding
    ///   order:
    ///   0 < 1                  — generating relation; closed transitively
    /// Blank lines and '#' comments are ignored.
    static PreferentialModel load(std::istream& in, std::string name = "model");
    static PreferentialModel load_file(const std::string& path);

    // -- observers ----------------------------------------------------------

    const TeamDomain& domain() const { return dom_; }
    std::size_t num_states() const { return labels_.size(); }
    TeamBits label_bits(StateId s) const { return labels_[s]; }
    Team label(StateId s) const { return Team(labels_[s], dom_.size()); }
    OrderKind order_kind() const { return kind_; }
    const std::string& name() const { return name_; }

    /// a ≺ b.
    bool less(StateId a, StateId b) const;

    /// States labelled exactly by the given team (empty span if none).
    std::span<const StateId> states_with_label(TeamBits team) const;

    /// Minimal elements of an arbitrary state subset w.r.t. ≺, ascending.
    std::vector<StateId> minimal_states(const Bitset& members) const;

    std::size_t num_order_edges() const;

private:
    PreferentialModel(TeamDomain dom, std::vector<TeamBits> labels, OrderKind kind,
                      std::string name);

    void close_and_check_explicit();
    void build_label_index();

    TeamDomain dom_;
    std::vector<TeamBits> labels_;
    OrderKind kind_;
    std::string name_;
    std::vector<Bitset> preds_;  // Explicit only: preds_[s] = {t : t ≺ s}
    std::vector<std::vector<StateId>> label_index_;  // team encoding -> states
};

// ============================================================================
// Non-monotonic entailment
// ============================================================================

/// S(φ) = {s : ℓ(s) ⊨ φ} as a bitset over states.
Bitset states_of(const PreferentialModel& w, Formula f);

/// ≺-minimal states of S(φ), ascending. Non-empty whenever S(φ) is.
std::vector<StateId> min_states(const PreferentialModel& w, Formula f);

struct NmResult {
    bool holds = false;
    std::vector<StateId> minimal;    // all ≺-minimal states of S(premise)
    std::vector<StateId> violating;  // minimal states whose label refutes the conclusion
};

/// φ |~_W ψ: every ≺-minimal state of S(φ) has ℓ(s) ⊨ ψ.
NmResult entails_nm(const PreferentialModel& w, Formula premise, Formula conclusion);

/// Verifies the smoothness condition for each corpus formula by direct
/// scan: every s ∈ S(φ) is minimal or above a minimal state of S(φ).
/// Always true for finite models; kept as a sanity oracle.
bool check_smoothness(const PreferentialModel& w, std::span<const Formula> corpus);

struct StandardnessReport {
    bool s1_ok = false;                  // no state labelled by the empty team
    bool s2_ok = false;                  // every non-empty team labels some state
    std::vector<StateId> s1_witnesses;   // states labelled ∅
    std::vector<TeamBits> s2_missing;    // non-empty teams with no state
    bool ok() const { return s1_ok && s2_ok; }
};

StandardnessReport check_standard(const PreferentialModel& w);

/// Test helper: confirms ≺ is irreflexive and transitive by full scan.
bool order_is_strict_partial(const PreferentialModel& w);

}  // namespace prefteam
