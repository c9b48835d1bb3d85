#pragma once

#include "prefteam/util.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prefteam {

// ============================================================================
// Valuations, teams, and team families over a fixed finite variable domain
// ============================================================================
//
// Encodings are fixed so reports and file formats stay stable:
//   - A valuation over (p1..pn) is an index in [0, 2^n); bit i of the index
//     is the value of p_{i+1}.
//   - A team is the 64-bit integer whose bit k is membership of valuation k.
//   - A team family is a bitset indexed by team encoding.

/// Team encoding: bit k set <=> valuation k is a member.
using TeamBits = std::uint64_t;
using Valuation = std::uint32_t;

/// Full team-lattice enumeration (TeamFamily, model state spaces) is capped
/// at 4 variables (2^16 teams). Single satisfaction queries go up to 6
/// variables (64-bit team bitsets).
inline constexpr int kMaxFamilyVars = 4;
inline constexpr int kMaxQueryVars = 6;

// ============================================================================
// TeamDomain
// ============================================================================

class TeamDomain {
public:
    /// Ordered, unique variable names; 1..kMaxQueryVars of them.
    /// Names follow the formula grammar's ident rule ([a-z][a-z0-9_]*);
    /// "top", "bot" and "inc" are reserved words of the grammar.
    explicit TeamDomain(std::vector<std::string> vars);

    /// Parses a whitespace-separated variable list, e.g. "p q r".
    static TeamDomain parse(std::string_view text);

    int size() const { return static_cast<int>(vars_.size()); }
    int num_valuations() const { return 1 << size(); }

    /// 2^(2^n); requires size() <= kMaxFamilyVars.
    std::uint64_t num_teams() const;

    const std::vector<std::string>& vars() const { return vars_; }
    const std::string& var(int i) const { return vars_[static_cast<std::size_t>(i)]; }
    std::optional<int> index_of(std::string_view name) const;

    /// All valuation indices representable over this domain, as a team mask.
    TeamBits universe() const {
        return size() == kMaxQueryVars ? ~TeamBits{0}
                                       : (TeamBits{1} << num_valuations()) - 1;
    }

    bool operator==(const TeamDomain& o) const { return vars_ == o.vars_; }
    bool operator!=(const TeamDomain& o) const { return !(*this == o); }

    std::string to_string() const;  // "p q r"

private:
    std::vector<std::string> vars_;
};

inline bool valuation_bit(Valuation v, int var_index) {
    return (v >> var_index) & 1u;
}

/// Renders a valuation as an n-character 0/1 string in domain order,
/// e.g. "100" for v(p)=1, v(q)=0, v(r)=0 over domain p q r.
std::string valuation_text(const TeamDomain& dom, Valuation v);

// ============================================================================
// Team
// ============================================================================

class Team {
public:
    Team(const TeamDomain& dom, TeamBits bits);

    /// Raw constructor from encoding + variable count; encoding range checked.
    Team(TeamBits bits, int num_vars);

    static Team empty(const TeamDomain& dom) { return Team(dom, 0); }
    static Team of(const TeamDomain& dom, const std::vector<Valuation>& members);

    /// Parses the team text format: one valuation per line as an n-character
    /// 0/1 string in domain variable order. Blank text = empty team.
    /// Duplicated lines collapse (teams are sets).
    static Team from_text(const TeamDomain& dom, std::string_view text);

    /// Team text format, one line per valuation in ascending index order.
    std::string to_text(const TeamDomain& dom) const;

    /// Compact single-line rendering: "{100, 010}".
    std::string to_string(const TeamDomain& dom) const;

    TeamBits bits() const { return bits_; }
    int num_vars() const { return n_; }

    bool is_empty() const { return bits_ == 0; }
    int cardinality() const { return __builtin_popcountll(bits_); }
    bool contains(Valuation v) const { return (bits_ >> v) & 1u; }
    std::vector<Valuation> valuations() const;

    bool operator==(const Team& o) const { return n_ == o.n_ && bits_ == o.bits_; }
    bool operator!=(const Team& o) const { return !(*this == o); }

private:
    TeamBits bits_;
    int n_;  // number of domain variables
};

void check_same_domain(const Team& a, const Team& b);

bool is_subteam(const Team& sub, const Team& sup);
Team team_union(const Team& a, const Team& b);
Team team_intersection(const Team& a, const Team& b);

/// All 2^|X| subteams of X, ascending by encoding.
std::vector<Team> subteams(const Team& x);
/// Subteams except X itself.
std::vector<Team> proper_subteams(const Team& x);

enum class SplitMode : std::uint8_t {
    Covers,      // all (Y, Z) with Y ∪ Z = X     (3^|X| pairs)
    Partitions,  // additionally Y ∩ Z = ∅         (2^|X| pairs)
};

/// Pairs (Y, Z) splitting X per the mode. X = ∅ yields exactly (∅, ∅).
std::vector<std::pair<Team, Team>> splits(const Team& x, SplitMode mode);

/// All 2^(2^n) - 1 non-empty teams in ascending encoding order.
/// Throws DomainError when the domain exceeds kMaxFamilyVars.
std::vector<Team> enumerate_nonempty_teams(const TeamDomain& dom);

// ============================================================================
// TeamFamily — a set of teams (e.g. Mod(φ)), bitset indexed by team encoding
// ============================================================================

class TeamFamily {
public:
    explicit TeamFamily(const TeamDomain& dom);

    static TeamFamily all(const TeamDomain& dom);
    /// {Y : Y ⊆ X} — the powerset of a team.
    static TeamFamily powerset(const TeamDomain& dom, TeamBits x);

    int num_vars() const { return n_; }
    std::uint64_t universe_size() const { return members_.size(); }

    bool contains(TeamBits team) const { return members_.test(team); }
    void insert(TeamBits team) { members_.set(team); }
    void erase(TeamBits team) { members_.reset(team); }

    std::uint64_t count() const { return members_.count(); }
    bool operator==(const TeamFamily& o) const { return n_ == o.n_ && members_ == o.members_; }
    bool operator!=(const TeamFamily& o) const { return !(*this == o); }
    bool is_subset_of(const TeamFamily& o) const { return members_.is_subset_of(o.members_); }

    TeamFamily& operator&=(const TeamFamily& o);
    TeamFamily& operator|=(const TeamFamily& o);

    /// Member encodings in ascending order.
    std::vector<TeamBits> members() const;

    template <class Fn>
    void for_each_member(Fn&& fn) const {
        members_.for_each_set([&](std::size_t i) { fn(static_cast<TeamBits>(i)); });
    }

    const Bitset& raw() const { return members_; }

private:
    TeamFamily(int n, Bitset members) : n_(n), members_(std::move(members)) {}

    int n_;
    Bitset members_;

    friend TeamFamily or_convolve(const TeamFamily& a, const TeamFamily& b);
};

/// {Y ∪ Z : Y ∈ a, Z ∈ b} — the team-semantic disjunction on model sets.
/// Computed with a subset-sum zeta/Möbius transform, O(2^m · m) for m = 2^n.
TeamFamily or_convolve(const TeamFamily& a, const TeamFamily& b);

}  // namespace prefteam
