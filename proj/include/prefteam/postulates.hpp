#pragma once

#include "prefteam/preferential.hpp"
#include "prefteam/semantics.hpp"
#include "prefteam/syntax.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace prefteam {

// ============================================================================
// System C / System P rule audit
// ============================================================================
//
//   (Ref)  α |~ α
//   (LLE)  α ≡ β,     α |~ γ   =>   β |~ γ
//   (RW)   α ⊨ β,     γ |~ α   =>   γ |~ β
//   (Cut)  α∧β |~ γ,  α |~ β   =>   α |~ γ
//   (CM)   α |~ β,    α |~ γ   =>   α∧β |~ γ
//   (Or)   α |~ γ,    β |~ γ   =>   α∨β |~ γ
//
// System C = {Ref, LLE, RW, Cut, CM}; System P adds (Or). The premises use
// semantic equivalence (mod-set equality) for LLE and monotone team
// entailment for RW. Rules are quantified over ordered tuples from the
// corpus; every reported violation is re-verified through the public
// entailment operations before it is recorded.

enum class RuleId : std::uint8_t { Ref, LLE, RW, Cut, CM, Or };
enum class RuleSystem : std::uint8_t { C, P };

const char* rule_name(RuleId rule);
std::span<const RuleId> rules_of(RuleSystem system);

struct RuleViolation {
    RuleId rule = RuleId::Ref;
    Formula alpha = nullptr;
    Formula beta = nullptr;   // null for Ref
    Formula gamma = nullptr;  // null for Ref
    std::vector<StateId> witness_states;  // minimal states refuting the conclusion
};

struct RuleVerdict {
    RuleId rule = RuleId::Ref;
    std::uint64_t premise_instances = 0;  // tuples whose premises held
    std::vector<RuleViolation> violations;  // first K in scan order
    bool holds() const { return violations.empty(); }
};

struct AuditReport {
    std::vector<RuleVerdict> verdicts;
    bool all_hold() const;
    const RuleVerdict* verdict_for(RuleId rule) const;
};

struct AuditOptions {
    int max_violations_per_rule = 5;
};

AuditReport audit(const PreferentialModel& w, std::span<const Formula> corpus, RuleSystem system,
                  const AuditOptions& options = {});

// ============================================================================
// Structural properties (△ and ⋆)
// ============================================================================

struct TriangleResult {
    bool holds = false;
    /// A state with a non-singleton label and no ≺-smaller proper-subteam
    /// state, when the property fails.
    std::optional<StateId> witness;
};

/// (△): every state with |ℓ(s)| > 1 has some s' ≺ s with ℓ(s') ⊊ ℓ(s).
TriangleResult check_triangle(const PreferentialModel& w);

struct StarResult {
    bool holds = false;
    /// A team labelling a minimal state of S(A∨B) that labels no minimal
    /// state of S(A) or S(B), when the property fails.
    std::optional<TeamBits> witness_team;
};

/// (⋆): min Mod(A∨B) ⊆ min Mod(A) ∪ min Mod(B), read at the team level
/// (min Mod(φ) = labels of ≺-minimal states of S(φ)).
StarResult check_star(const PreferentialModel& w, Formula a, Formula b);

/// All pairs (Θ_Y, Θ_Z) over the domain's teams (including ∅) — exactly the
/// formula family the △⇔⋆ argument manipulates. Quadratic in the team
/// count, so callers should keep n <= 2.
std::vector<std::pair<Formula, Formula>> theta_pair_samples(const TeamDomain& dom);

// ============================================================================
// Constructive (Or) counterexample from a △ failure
// ============================================================================

struct OrCounterexample {
    Formula alpha = nullptr;  // subteams of X of cardinality <= l
    Formula beta = nullptr;   // subteams of X of cardinality <= k
    Formula gamma = nullptr;  // = beta
    TeamBits witness_team = 0;  // X, a minimal model of α∨β refuting β
    StateId witness_state = 0;
};

/// When △ fails at a state labelled X with |X| = j = l + k (l = ⌊j/2⌋):
/// α, β bound subteam cardinality by l and k, so α |~ β and β |~ β hold
/// while α∨β |~ β fails with X as the refuting minimal model. Returns
/// nullopt when △ holds. The three entailment claims are re-verified via
/// entails_nm before returning.
std::optional<OrCounterexample> or_counterexample(const PreferentialModel& w);

// ============================================================================
// Theorem verification harnesses
// ============================================================================

struct TheoremMainReport {
    bool triangle = false;
    std::optional<StateId> triangle_witness;
    bool star_all = false;
    std::optional<std::pair<Formula, Formula>> star_failed_pair;
    std::optional<TeamBits> star_witness;
    bool audit_pass = false;
    AuditReport audit_report;
    std::optional<OrCounterexample> counterexample;
    bool counterexample_verified = false;
    /// Desk-scale implication failures; any entry falsifies the
    /// implementation or the characterization itself.
    std::vector<std::string> inconsistencies;
    bool consistent() const { return inconsistencies.empty(); }
};

/// Checks the equivalence skeleton on one model: △ must agree with the
/// sampled ⋆ verdict, △ implies a clean System P audit, and ¬△ must yield
/// a re-verified constructive (Or) violation.
TheoremMainReport verify_theorem_main(const PreferentialModel& w, std::span<const Formula> corpus,
                                      std::span<const std::pair<Formula, Formula>> star_samples,
                                      const AuditOptions& options = {});

struct FlatteningReport {
    std::uint64_t pairs_checked = 0;
    struct Disagreement {
        Formula a = nullptr;
        Formula b = nullptr;
        bool team_side = false;       // A |~_W B
        bool classical_side = false;  // A^f |~_{W'} B^f
    };
    std::vector<Disagreement> disagreements;
    bool agree() const { return disagreements.empty(); }
};

/// For a standard model satisfying △, compares A |~_W B against
/// A^f |~_{W'} B^f, where W' is the classical preferential model on W's
/// singleton-labelled states (labels read as valuations, order inherited).
/// Throws Error when the model is not standard or △ fails.
FlatteningReport verify_flattening_theorem(const PreferentialModel& w,
                                           std::span<const std::pair<Formula, Formula>> pairs);

/// All ordered pairs over a corpus (convenience for the verifiers).
std::vector<std::pair<Formula, Formula>> all_ordered_pairs(std::span<const Formula> corpus);

}  // namespace prefteam
