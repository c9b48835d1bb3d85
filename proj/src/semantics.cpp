#include "prefteam/semantics.hpp"

#include <algorithm>
#include <unordered_set>

namespace prefteam {

// ============================================================================
// Shared atom checkers (valuation-index arithmetic on team bitsets)
// ============================================================================

namespace {

struct AtomIndexes {
    std::vector<int> first;   // dep args / inc lhs
    std::vector<int> second;  // inc rhs
    int target = -1;          // dep target
};

int resolve_var(const TeamDomain& dom, const std::string& name) {
    auto idx = dom.index_of(name);
    if (!idx)
        throw DomainError("variable '" + name + "' of the formula is outside the domain '" +
                          dom.to_string() + "'");
    return *idx;
}

// Atom argument lists may repeat variables, so projections can be wider
// than the domain; they are capped at 64 bits by the syntax layer. The
// flat-array fast path covers projections below 6 bits.
std::uint64_t project(Valuation v, const std::vector<int>& indexes) {
    std::uint64_t proj = 0;
    for (std::size_t k = 0; k < indexes.size(); ++k)
        proj |= static_cast<std::uint64_t>((v >> indexes[k]) & 1u) << k;
    return proj;
}

/// X ⊨ =(args ; target): members agreeing on args agree on target.
bool dep_holds(TeamBits x, const std::vector<int>& args, int target) {
    auto scan = [&](auto& seen, auto lookup, auto store) {
        TeamBits w = x;
        while (w) {
            Valuation v = static_cast<Valuation>(__builtin_ctzll(w));
            w &= w - 1;
            std::uint64_t proj = project(v, args);
            std::int8_t bit = static_cast<std::int8_t>((v >> target) & 1u);
            std::int8_t prev = lookup(seen, proj);
            if (prev == -1)
                store(seen, proj, bit);
            else if (prev != bit)
                return false;
        }
        return true;
    };
    if (args.size() <= 6) {
        std::int8_t seen[64];
        std::fill(std::begin(seen), std::end(seen), std::int8_t{-1});
        return scan(
            seen, [](std::int8_t* s, std::uint64_t p) { return s[p]; },
            [](std::int8_t* s, std::uint64_t p, std::int8_t b) { s[p] = b; });
    }
    std::unordered_map<std::uint64_t, std::int8_t> seen;
    return scan(
        seen,
        [](const std::unordered_map<std::uint64_t, std::int8_t>& s, std::uint64_t p) {
            auto it = s.find(p);
            return it == s.end() ? std::int8_t{-1} : it->second;
        },
        [](std::unordered_map<std::uint64_t, std::int8_t>& s, std::uint64_t p, std::int8_t b) {
            s.emplace(p, b);
        });
}

/// X ⊨ inc(lhs ; rhs): every member's lhs-values appear as some member's
/// rhs-values.
bool inc_holds(TeamBits x, const std::vector<int>& lhs, const std::vector<int>& rhs) {
    if (lhs.size() <= 6) {
        std::uint64_t present = 0;
        TeamBits w = x;
        while (w) {
            Valuation v = static_cast<Valuation>(__builtin_ctzll(w));
            w &= w - 1;
            present |= std::uint64_t{1} << project(v, rhs);
        }
        w = x;
        while (w) {
            Valuation v = static_cast<Valuation>(__builtin_ctzll(w));
            w &= w - 1;
            if (!((present >> project(v, lhs)) & 1u)) return false;
        }
        return true;
    }
    std::unordered_set<std::uint64_t> present;
    TeamBits w = x;
    while (w) {
        Valuation v = static_cast<Valuation>(__builtin_ctzll(w));
        w &= w - 1;
        present.insert(project(v, rhs));
    }
    w = x;
    while (w) {
        Valuation v = static_cast<Valuation>(__builtin_ctzll(w));
        w &= w - 1;
        if (!present.count(project(v, lhs))) return false;
    }
    return true;
}

bool downward_closed_fragment(Fragment f) {
    return f == Fragment::PL || f == Fragment::PDL;
}
bool union_closed_fragment(Fragment f) {
    return f == Fragment::PL || f == Fragment::PIncl;
}

}  // namespace

// ============================================================================
// Evaluator
// ============================================================================

struct Evaluator::NodeInfo {
    enum class OrMode : std::uint8_t { Cover, Partition, Union };

    AtomIndexes atoms;
    TeamBits literal_mask = 0;  // literals: valuations satisfying the literal
    OrMode or_mode = OrMode::Cover;

    // Memo: flat table for small lattices, hash map for n = 5, 6.
    std::vector<std::int8_t> table;  // 0 unknown, 1 false, 2 true
    std::unordered_map<TeamBits, bool> map;
    bool use_table = false;

    std::optional<bool> lookup(TeamBits x) const {
        if (use_table) {
            std::int8_t v = table[x];
            if (v == 0) return std::nullopt;
            return v == 2;
        }
        auto it = map.find(x);
        if (it == map.end()) return std::nullopt;
        return it->second;
    }
    void store(TeamBits x, bool value) {
        if (use_table)
            table[x] = value ? 2 : 1;
        else
            map.emplace(x, value);
    }
};

Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

Evaluator::Evaluator(const TeamDomain& dom, EvalOptions options)
    : dom_(dom), options_(options), universe_(dom.universe()) {
    var_true_mask_.assign(static_cast<std::size_t>(dom.size()), 0);
    for (int i = 0; i < dom.size(); ++i)
        for (Valuation v = 0; v < static_cast<Valuation>(dom.num_valuations()); ++v)
            if (valuation_bit(v, i)) var_true_mask_[static_cast<std::size_t>(i)] |= TeamBits{1} << v;
}

Evaluator::NodeInfo& Evaluator::info_for(Formula f) {
    auto it = infos_.find(f);
    if (it != infos_.end()) return *it->second;

    auto info = std::make_unique<NodeInfo>();
    switch (f->kind()) {
        case NodeKind::PosLiteral:
            info->literal_mask = var_true_mask_[static_cast<std::size_t>(resolve_var(dom_, f->var()))];
            break;
        case NodeKind::NegLiteral:
            info->literal_mask =
                universe_ & ~var_true_mask_[static_cast<std::size_t>(resolve_var(dom_, f->var()))];
            break;
        case NodeKind::Dep:
            for (const auto& a : f->dep_args()) info->atoms.first.push_back(resolve_var(dom_, a));
            info->atoms.target = resolve_var(dom_, f->dep_target());
            break;
        case NodeKind::Inc:
            for (const auto& a : f->inc_lhs()) info->atoms.first.push_back(resolve_var(dom_, a));
            for (const auto& b : f->inc_rhs()) info->atoms.second.push_back(resolve_var(dom_, b));
            break;
        case NodeKind::Or: {
            const bool partition_ok = downward_closed_fragment(f->left()->fragment()) &&
                                      downward_closed_fragment(f->right()->fragment());
            const bool union_ok = union_closed_fragment(f->left()->fragment()) &&
                                  union_closed_fragment(f->right()->fragment());
            switch (options_.strategy) {
                case DisjunctionStrategy::CoverSearch:
                    info->or_mode = NodeInfo::OrMode::Cover;
                    break;
                case DisjunctionStrategy::PartitionSearch:
                    info->or_mode =
                        partition_ok ? NodeInfo::OrMode::Partition : NodeInfo::OrMode::Cover;
                    break;
                case DisjunctionStrategy::UnionShortcut:
                    info->or_mode = union_ok ? NodeInfo::OrMode::Union : NodeInfo::OrMode::Cover;
                    break;
                case DisjunctionStrategy::Auto:
                    info->or_mode = union_ok       ? NodeInfo::OrMode::Union
                                    : partition_ok ? NodeInfo::OrMode::Partition
                                                   : NodeInfo::OrMode::Cover;
                    break;
            }
            break;
        }
        default:
            break;
    }

    // Memoize the recursion-heavy kinds.
    if (f->kind() == NodeKind::And || f->kind() == NodeKind::Or || f->kind() == NodeKind::Dep ||
        f->kind() == NodeKind::Inc) {
        if (dom_.size() <= kMaxFamilyVars) {
            info->use_table = true;
            info->table.assign(std::size_t{1} << dom_.num_valuations(), 0);
        }
    }

    return *infos_.emplace(f, std::move(info)).first->second;
}

bool Evaluator::satisfies(const Team& x, Formula f) {
    if (x.num_vars() != dom_.size())
        throw DomainError("team is over a different domain than the evaluator");
    return eval(f, x.bits());
}

bool Evaluator::eval(Formula f, TeamBits x) {
    NodeInfo& info = info_for(f);
    switch (f->kind()) {
        case NodeKind::Top:
            return true;
        case NodeKind::Bottom:
            return x == 0;
        case NodeKind::PosLiteral:
        case NodeKind::NegLiteral:
            return (x & ~info.literal_mask) == 0;
        default:
            break;
    }

    if (auto hit = info.lookup(x)) return *hit;

    bool result = false;
    switch (f->kind()) {
        case NodeKind::Dep:
            result = dep_holds(x, info.atoms.first, info.atoms.target);
            break;
        case NodeKind::Inc:
            result = inc_holds(x, info.atoms.first, info.atoms.second);
            break;
        case NodeKind::And:
            result = eval(f->left(), x) && eval(f->right(), x);
            break;
        case NodeKind::Or:
            switch (info.or_mode) {
                case NodeInfo::OrMode::Cover:
                    result = eval_cover(f, x);
                    break;
                case NodeInfo::OrMode::Partition:
                    result = eval_partition(f, x);
                    break;
                case NodeInfo::OrMode::Union:
                    result = (max_satisfying_subteam(f->left(), x) |
                              max_satisfying_subteam(f->right(), x)) == x;
                    break;
            }
            break;
        default:
            break;
    }

    info.store(x, result);
    return result;
}

bool Evaluator::eval_cover(Formula f, TeamBits x) {
    Formula left = f->left();
    Formula right = f->right();
    TeamBits y = x;
    for (;;) {
        if (eval(left, y)) {
            const TeamBits rest = x & ~y;
            TeamBits t = y;
            for (;;) {
                if (eval(right, rest | t)) return true;
                if (t == 0) break;
                t = (t - 1) & y;
            }
        }
        if (y == 0) break;
        y = (y - 1) & x;
    }
    return false;
}

bool Evaluator::eval_partition(Formula f, TeamBits x) {
    TeamBits y = x;
    for (;;) {
        if (eval(f->left(), y) && eval(f->right(), x & ~y)) return true;
        if (y == 0) break;
        y = (y - 1) & x;
    }
    return false;
}

TeamBits Evaluator::max_satisfying_subteam(Formula f, TeamBits x) {
    switch (f->kind()) {
        case NodeKind::Top:
            return x;
        case NodeKind::Bottom:
            return 0;
        case NodeKind::PosLiteral:
        case NodeKind::NegLiteral:
            return x & info_for(f).literal_mask;
        case NodeKind::Or:
            return max_satisfying_subteam(f->left(), x) | max_satisfying_subteam(f->right(), x);
        case NodeKind::And: {
            // Greatest simultaneous fixpoint of both conjuncts' maxima.
            TeamBits y = x;
            for (;;) {
                TeamBits y2 = max_satisfying_subteam(f->right(), max_satisfying_subteam(f->left(), y));
                if (y2 == y) return y;
                y = y2;
            }
        }
        case NodeKind::Inc: {
            // Remove members whose lhs-values lack an rhs witness until stable.
            const NodeInfo& info = info_for(f);
            TeamBits y = x;
            for (;;) {
                std::unordered_set<std::uint64_t> present;
                TeamBits w = y;
                while (w) {
                    Valuation v = static_cast<Valuation>(__builtin_ctzll(w));
                    w &= w - 1;
                    present.insert(project(v, info.atoms.second));
                }
                TeamBits y2 = 0;
                w = y;
                while (w) {
                    Valuation v = static_cast<Valuation>(__builtin_ctzll(w));
                    w &= w - 1;
                    if (present.count(project(v, info.atoms.first))) y2 |= TeamBits{1} << v;
                }
                if (y2 == y) return y;
                y = y2;
            }
        }
        case NodeKind::Dep:
            throw std::logic_error("max_satisfying_subteam on a non-union-closed formula");
    }
    throw std::logic_error("unreachable");
}

bool satisfies(const TeamDomain& dom, const Team& x, Formula f, EvalOptions options) {
    Evaluator ev(dom, options);
    return ev.satisfies(x, f);
}

// ============================================================================
// Classical (valuation-level) semantics
// ============================================================================

bool classical_satisfies(const TeamDomain& dom, Valuation v, Formula f) {
    switch (f->kind()) {
        case NodeKind::PosLiteral:
            return valuation_bit(v, resolve_var(dom, f->var()));
        case NodeKind::NegLiteral:
            return !valuation_bit(v, resolve_var(dom, f->var()));
        case NodeKind::Top:
            return true;
        case NodeKind::Bottom:
            return false;
        case NodeKind::And:
            return classical_satisfies(dom, v, f->left()) && classical_satisfies(dom, v, f->right());
        case NodeKind::Or:
            return classical_satisfies(dom, v, f->left()) || classical_satisfies(dom, v, f->right());
        case NodeKind::Dep:
        case NodeKind::Inc:
            throw std::invalid_argument("classical semantics is defined for PL formulas only");
    }
    throw std::logic_error("unreachable");
}

// ============================================================================
// ModCache
// ============================================================================

ModCache& ModCache::global() {
    static ModCache cache;
    return cache;
}

const TeamFamily& ModCache::get(Formula f, const TeamDomain& dom) {
    const std::string key = std::to_string(f->id()) + "|" + dom.to_string();
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) return *it->second;
    }
    auto computed = std::make_unique<TeamFamily>(compute(f, dom));
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, std::move(computed));
    return *it->second;  // a racing thread's identical result may win
}

void ModCache::clear() {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_.clear();
}

std::size_t ModCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

TeamFamily ModCache::compute(Formula f, const TeamDomain& dom) {
    const std::uint64_t total = dom.num_teams();  // enforces n <= kMaxFamilyVars
    switch (f->kind()) {
        case NodeKind::Top:
            return TeamFamily::all(dom);
        case NodeKind::Bottom: {
            TeamFamily fam(dom);
            fam.insert(0);
            return fam;
        }
        case NodeKind::PosLiteral:
        case NodeKind::NegLiteral: {
            TeamBits mask = 0;
            const int idx = resolve_var(dom, f->var());
            const bool want = f->kind() == NodeKind::PosLiteral;
            for (Valuation v = 0; v < static_cast<Valuation>(dom.num_valuations()); ++v)
                if (valuation_bit(v, idx) == want) mask |= TeamBits{1} << v;
            return TeamFamily::powerset(dom, mask);
        }
        case NodeKind::Dep: {
            AtomIndexes atoms;
            for (const auto& a : f->dep_args()) atoms.first.push_back(resolve_var(dom, a));
            atoms.target = resolve_var(dom, f->dep_target());
            TeamFamily fam(dom);
            for (std::uint64_t x = 0; x < total; ++x)
                if (dep_holds(x, atoms.first, atoms.target)) fam.insert(x);
            return fam;
        }
        case NodeKind::Inc: {
            AtomIndexes atoms;
            for (const auto& a : f->inc_lhs()) atoms.first.push_back(resolve_var(dom, a));
            for (const auto& b : f->inc_rhs()) atoms.second.push_back(resolve_var(dom, b));
            TeamFamily fam(dom);
            for (std::uint64_t x = 0; x < total; ++x)
                if (inc_holds(x, atoms.first, atoms.second)) fam.insert(x);
            return fam;
        }
        case NodeKind::And: {
            TeamFamily fam = get(f->left(), dom);
            fam &= get(f->right(), dom);
            return fam;
        }
        case NodeKind::Or:
            return or_convolve(get(f->left(), dom), get(f->right(), dom));
    }
    throw std::logic_error("unreachable");
}

const TeamFamily& mod_set(Formula f, const TeamDomain& dom) {
    return ModCache::global().get(f, dom);
}

// ============================================================================
// Entailment
// ============================================================================

bool entails(Formula phi, Formula psi, const TeamDomain& dom) {
    return mod_set(phi, dom).is_subset_of(mod_set(psi, dom));
}

std::optional<Team> entails_witness(Formula phi, Formula psi, const TeamDomain& dom) {
    const TeamFamily& a = mod_set(phi, dom);
    const TeamFamily& b = mod_set(psi, dom);
    std::optional<Team> witness;
    a.for_each_member([&](TeamBits t) {
        if (!witness && !b.contains(t)) witness = Team(dom, t);
    });
    return witness;
}

bool classical_entails(Formula alpha, Formula beta, const TeamDomain& dom) {
    if (classify(alpha) != Fragment::PL || classify(beta) != Fragment::PL)
        throw std::invalid_argument("classical entailment is defined for PL formulas only");
    for (Valuation v = 0; v < static_cast<Valuation>(dom.num_valuations()); ++v)
        if (classical_satisfies(dom, v, alpha) && !classical_satisfies(dom, v, beta)) return false;
    return true;
}

// ============================================================================
// Closure property report
// ============================================================================

ClosureReport check_closure_properties(Formula f, const TeamDomain& dom) {
    const TeamFamily& fam = mod_set(f, dom);
    const std::uint64_t total = dom.num_teams();

    ClosureReport report;
    report.empty_team = fam.contains(0);

    TeamBits singleton_sat = 0;
    for (Valuation v = 0; v < static_cast<Valuation>(dom.num_valuations()); ++v)
        if (fam.contains(TeamBits{1} << v)) singleton_sat |= TeamBits{1} << v;

    report.flat = true;
    for (std::uint64_t x = 0; x < total; ++x) {
        const bool pointwise = (x & ~singleton_sat) == 0;
        if (fam.contains(x) != pointwise) {
            report.flat = false;
            break;
        }
    }

    report.downward_closed = true;
    for (std::uint64_t x = 0; x < total && report.downward_closed; ++x) {
        if (!fam.contains(x)) continue;
        TeamBits w = x;
        while (w) {
            TeamBits lowest = w & (~w + 1);
            if (!fam.contains(x & ~lowest)) {
                report.downward_closed = false;
                break;
            }
            w &= w - 1;
        }
    }

    report.union_closed = or_convolve(fam, fam).is_subset_of(fam);
    return report;
}

}  // namespace prefteam
