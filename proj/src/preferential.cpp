#include "prefteam/preferential.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

namespace prefteam {

// ============================================================================
// Construction
// ============================================================================

PreferentialModel::PreferentialModel(TeamDomain dom, std::vector<TeamBits> labels, OrderKind kind,
                                     std::string name)
    : dom_(std::move(dom)), labels_(std::move(labels)), kind_(kind), name_(std::move(name)) {
    const TeamBits universe = dom_.universe();
    for (TeamBits l : labels_)
        if (l & ~universe)
            throw DomainError("state label out of range for domain '" + dom_.to_string() + "'");
    (void)dom_.num_teams();  // models are capped at kMaxFamilyVars variables
    build_label_index();
}

void PreferentialModel::build_label_index() {
    label_index_.assign(dom_.num_teams(), {});
    for (StateId s = 0; s < labels_.size(); ++s)
        label_index_[labels_[s]].push_back(s);
}

void PreferentialModel::close_and_check_explicit() {
    // Transitive closure over predecessor bitsets, then irreflexivity.
    const std::size_t n = labels_.size();
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < n; ++s) {
            Bitset before = preds_[s];
            preds_[s].for_each_set([&](std::size_t t) { preds_[s] |= preds_[t]; });
            if (preds_[s] != before) changed = true;
        }
    }
    for (std::size_t s = 0; s < n; ++s)
        if (preds_[s].test(s))
            throw Error("order is not irreflexive after transitive closure (cycle through state " +
                        std::to_string(s) + ")");
}

namespace {

std::vector<TeamBits> all_nonempty_labels(const TeamDomain& dom) {
    std::vector<TeamBits> labels;
    labels.reserve(dom.num_teams() - 1);
    for (TeamBits t = 1; t < dom.num_teams(); ++t) labels.push_back(t);
    return labels;
}

}  // namespace

PreferentialModel PreferentialModel::builtin(std::string_view name, const TeamDomain& dom) {
    if (name == "sub" || name == "sup" || name == "discrete") {
        OrderKind kind = name == "sub"   ? OrderKind::SubsetRule
                         : name == "sup" ? OrderKind::SupersetRule
                                         : OrderKind::Discrete;
        return PreferentialModel(dom, all_nonempty_labels(dom), kind,
                                 "builtin:" + std::string(name));
    }

    if (name == "peng") {
        if (dom.vars() != std::vector<std::string>{"b", "p", "f"})
            throw DomainError("builtin:peng requires domain 'b p f'");
        // Singletons X_{b p̄ f} = {(b,p,f)=(1,0,1)} and X_{b p f̄} = {(1,1,0)}.
        const TeamBits x_bpf_bar_p = TeamBits{1} << 0b101;  // {v(b=1,p=0,f=1)}
        const TeamBits x_bpf_bar_f = TeamBits{1} << 0b011;  // {v(b=1,p=1,f=0)}
        std::vector<TeamBits> labels = all_nonempty_labels(dom);
        std::vector<std::pair<StateId, StateId>> edges;
        auto sid = [&](TeamBits t) { return static_cast<StateId>(t - 1); };
        edges.emplace_back(sid(x_bpf_bar_p), sid(x_bpf_bar_f));
        for (TeamBits t : labels) {
            if (__builtin_popcountll(t) == 1 && t != x_bpf_bar_p && t != x_bpf_bar_f) {
                edges.emplace_back(sid(x_bpf_bar_f), sid(t));
                edges.emplace_back(sid(x_bpf_bar_p), sid(t));
            }
            if (__builtin_popcountll(t) > 1) {
                // Proper non-empty subteams are preferred to non-singletons.
                for (TeamBits y = (t - 1) & t; y != 0; y = (y - 1) & t)
                    edges.emplace_back(sid(y), sid(t));
            }
        }
        return custom(dom, labels, edges, "builtin:peng");
    }

    if (name == "pq") {
        if (dom.vars() != std::vector<std::string>{"p", "q"})
            throw DomainError("builtin:pq requires domain 'p q'");
        const TeamBits x_pq = TeamBits{1} << 0b11;                       // {v1}
        const TeamBits x_pbar_q = TeamBits{1} << 0b10;                   // {v2}
        const TeamBits x_iff = (TeamBits{1} << 0b11) | (TeamBits{1} << 0b00);  // {v1, v3}
        std::vector<TeamBits> labels = all_nonempty_labels(dom);
        std::vector<std::pair<StateId, StateId>> edges;
        auto sid = [&](TeamBits t) { return static_cast<StateId>(t - 1); };
        edges.emplace_back(sid(x_iff), sid(x_pq));
        edges.emplace_back(sid(x_iff), sid(x_pbar_q));
        for (TeamBits t : labels) {
            if (t == x_pq || t == x_pbar_q || t == x_iff) continue;
            edges.emplace_back(sid(x_pq), sid(t));
            edges.emplace_back(sid(x_pbar_q), sid(t));
        }
        return custom(dom, labels, edges, "builtin:pq");
    }

    throw Error("unknown builtin model '" + std::string(name) +
                "' (expected sub, sup, peng, pq, or discrete)");
}

PreferentialModel PreferentialModel::custom(const TeamDomain& dom, std::vector<TeamBits> labels,
                                            const std::vector<std::pair<StateId, StateId>>& edges,
                                            std::string name) {
    PreferentialModel model(dom, std::move(labels), OrderKind::Explicit, std::move(name));
    model.preds_.assign(model.labels_.size(), Bitset(model.labels_.size()));
    for (auto [from, to] : edges) {
        if (from >= model.labels_.size() || to >= model.labels_.size())
            throw Error("order edge references a state that does not exist");
        model.preds_[to].set(from);
    }
    model.close_and_check_explicit();
    return model;
}

PreferentialModel PreferentialModel::random_standard(const TeamDomain& dom, std::uint64_t seed,
                                                     std::optional<double> edge_probability) {
    SplitMix64 rng(seed);
    std::vector<TeamBits> labels = all_nonempty_labels(dom);
    const std::size_t n = labels.size();
    std::vector<std::pair<StateId, StateId>> edges;

    const bool subset_seeded = edge_probability ? false : rng.chance(0.5);
    if (!subset_seeded) {
        const double q = edge_probability ? *edge_probability : 0.05 + 0.3 * rng.unit();
        // Random permutation as linear extension; sample forward edges.
        std::vector<StateId> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n; i > 1; --i)
            std::swap(perm[i - 1], perm[rng.below(i)]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng.chance(q)) edges.emplace_back(perm[i], perm[j]);
    } else {
        // Subset edges plus extra edges along the (cardinality, encoding)
        // linear extension; subteam preference is preserved.
        const double q = 0.3 * rng.unit();
        for (StateId s = 0; s < n; ++s)
            for (TeamBits y = (labels[s] - 1) & labels[s]; y != 0; y = (y - 1) & labels[s])
                edges.emplace_back(static_cast<StateId>(y - 1), s);
        std::vector<StateId> ext(n);
        std::iota(ext.begin(), ext.end(), 0);
        std::sort(ext.begin(), ext.end(), [&](StateId a, StateId b) {
            int ca = __builtin_popcountll(labels[a]), cb = __builtin_popcountll(labels[b]);
            return ca != cb ? ca < cb : labels[a] < labels[b];
        });
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng.chance(q)) edges.emplace_back(ext[i], ext[j]);
    }
    return custom(dom, std::move(labels), edges, "random:" + std::to_string(seed));
}

// ============================================================================
// Model file format
// ============================================================================

namespace {

std::string strip(std::string s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

PreferentialModel PreferentialModel::load(std::istream& in, std::string name) {
    std::optional<TeamDomain> dom;
    std::optional<std::string> builtin_name;
    std::vector<std::pair<long long, TeamBits>> state_lines;
    std::vector<std::pair<long long, long long>> order_lines;
    enum class Section { Header, States, Order } section = Section::Header;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip(raw);
        if (line.empty() || line[0] == '#') continue;

        if (line.rfind("domain:", 0) == 0) {
            dom = TeamDomain::parse(line.substr(7));
            continue;
        }
        if (line.rfind("builtin:", 0) == 0) {
            builtin_name = strip(line.substr(8));
            continue;
        }
        if (line == "states:") {
            section = Section::States;
            continue;
        }
        if (line == "order:") {
            section = Section::Order;
            continue;
        }

        std::istringstream ls(line);
        if (section == Section::States) {
            long long id;
            char eq;
            unsigned long long enc;
            if (!(ls >> id >> eq >> enc) || eq != '=')
                throw ParseError("expected 'id = team-encoding' in states block", lineno);
            state_lines.emplace_back(id, static_cast<TeamBits>(enc));
        } else if (section == Section::Order) {
            long long a, b;
            char lt;
            if (!(ls >> a >> lt >> b) || lt != '<')
                throw ParseError("expected 'id < id' in order block", lineno);
            order_lines.emplace_back(a, b);
        } else {
            throw ParseError("unexpected line outside states:/order: blocks", lineno);
        }
    }

    if (!dom) throw Error("model file is missing a 'domain:' header");
    if (builtin_name) return builtin(*builtin_name, *dom);
    if (state_lines.empty()) throw Error("model file declares no states");

    // Map declared ids (arbitrary, unique, non-negative) to dense StateIds.
    std::vector<TeamBits> labels;
    std::unordered_map<long long, StateId> id_map;
    for (auto [id, enc] : state_lines) {
        if (id < 0) throw Error("state ids must be non-negative");
        if (!id_map.emplace(id, static_cast<StateId>(labels.size())).second)
            throw Error("duplicate state id " + std::to_string(id));
        labels.push_back(enc);
    }
    std::vector<std::pair<StateId, StateId>> edges;
    for (auto [a, b] : order_lines) {
        auto ia = id_map.find(a), ib = id_map.find(b);
        if (ia == id_map.end() || ib == id_map.end())
            throw Error("order references undeclared state id");
        edges.emplace_back(ia->second, ib->second);
    }
    return custom(*dom, std::move(labels), edges, std::move(name));
}

PreferentialModel PreferentialModel::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file '" + path + "'");
    return load(in, path);
}

// ============================================================================
// Order queries
// ============================================================================

bool PreferentialModel::less(StateId a, StateId b) const {
    switch (kind_) {
        case OrderKind::Discrete:
            return false;
        case OrderKind::SubsetRule:
            return labels_[a] != labels_[b] && (labels_[a] & ~labels_[b]) == 0;
        case OrderKind::SupersetRule:
            return labels_[a] != labels_[b] && (labels_[b] & ~labels_[a]) == 0;
        case OrderKind::Explicit:
            return preds_[b].test(a);
    }
    return false;
}

std::span<const StateId> PreferentialModel::states_with_label(TeamBits team) const {
    const auto& v = label_index_[team];
    return {v.data(), v.size()};
}

std::size_t PreferentialModel::num_order_edges() const {
    std::size_t edges = 0;
    if (kind_ == OrderKind::Explicit) {
        for (const auto& p : preds_) edges += p.count();
    } else {
        for (StateId a = 0; a < labels_.size(); ++a)
            for (StateId b = 0; b < labels_.size(); ++b)
                if (less(a, b)) ++edges;
    }
    return edges;
}

std::vector<StateId> PreferentialModel::minimal_states(const Bitset& members) const {
    if (members.size() != labels_.size())
        throw DomainError("state set size does not match the model");
    std::vector<StateId> out;

    switch (kind_) {
        case OrderKind::Discrete: {
            members.for_each_set([&](std::size_t s) { out.push_back(static_cast<StateId>(s)); });
            return out;
        }
        case OrderKind::Explicit: {
            members.for_each_set([&](std::size_t s) {
                if (!preds_[s].intersects(members)) out.push_back(static_cast<StateId>(s));
            });
            return out;
        }
        case OrderKind::SubsetRule:
        case OrderKind::SupersetRule:
            break;
    }

    // Rule-based orders compare labels; a member is minimal iff no member
    // label is a proper sub-/superset of its label. Zeta transforms give
    // "some member label below X" in O(2^m · m).
    const std::size_t lattice = dom_.num_teams();
    std::vector<std::uint8_t> present(lattice, 0);
    members.for_each_set([&](std::size_t s) { present[labels_[s]] = 1; });

    std::vector<std::uint8_t> reach = present;
    const int m = dom_.num_valuations();
    if (kind_ == OrderKind::SubsetRule) {
        for (int i = 0; i < m; ++i)
            for (std::size_t x = 0; x < lattice; ++x)
                if (x & (std::size_t{1} << i)) reach[x] |= reach[x ^ (std::size_t{1} << i)];
    } else {
        for (int i = 0; i < m; ++i)
            for (std::size_t x = 0; x < lattice; ++x)
                if (!(x & (std::size_t{1} << i))) reach[x] |= reach[x | (std::size_t{1} << i)];
    }
    // reach[x]: some member label ⊆ x (subset rule) / ⊇ x (superset rule),
    // possibly x itself; check proper neighbours only.
    members.for_each_set([&](std::size_t s) {
        const std::size_t x = labels_[s];
        bool dominated = false;
        for (int i = 0; i < m && !dominated; ++i) {
            if (kind_ == OrderKind::SubsetRule) {
                if ((x & (std::size_t{1} << i)) && reach[x ^ (std::size_t{1} << i)]) dominated = true;
            } else {
                if (!(x & (std::size_t{1} << i)) && reach[x | (std::size_t{1} << i)]) dominated = true;
            }
        }
        if (!dominated) out.push_back(static_cast<StateId>(s));
    });
    return out;
}

// ============================================================================
// Non-monotonic entailment
// ============================================================================

Bitset states_of(const PreferentialModel& w, Formula f) {
    const TeamFamily& fam = mod_set(f, w.domain());
    Bitset set(w.num_states());
    for (StateId s = 0; s < w.num_states(); ++s)
        if (fam.contains(w.label_bits(s))) set.set(s);
    return set;
}

std::vector<StateId> min_states(const PreferentialModel& w, Formula f) {
    return w.minimal_states(states_of(w, f));
}

NmResult entails_nm(const PreferentialModel& w, Formula premise, Formula conclusion) {
    NmResult result;
    result.minimal = w.minimal_states(states_of(w, premise));
    const TeamFamily& conclusion_fam = mod_set(conclusion, w.domain());
    for (StateId s : result.minimal)
        if (!conclusion_fam.contains(w.label_bits(s))) result.violating.push_back(s);
    result.holds = result.violating.empty();
    return result;
}

bool check_smoothness(const PreferentialModel& w, std::span<const Formula> corpus) {
    for (Formula f : corpus) {
        Bitset set = states_of(w, f);
        std::vector<StateId> mins = w.minimal_states(set);
        Bitset min_mask(w.num_states());
        for (StateId s : mins) min_mask.set(s);
        bool ok = true;
        set.for_each_set([&](std::size_t s) {
            if (min_mask.test(s)) return;
            for (StateId m : mins)
                if (w.less(m, static_cast<StateId>(s))) return;
            ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

StandardnessReport check_standard(const PreferentialModel& w) {
    StandardnessReport report;
    for (StateId s = 0; s < w.num_states(); ++s)
        if (w.label_bits(s) == 0) report.s1_witnesses.push_back(s);
    report.s1_ok = report.s1_witnesses.empty();

    for (TeamBits t = 1; t < w.domain().num_teams(); ++t)
        if (w.states_with_label(t).empty()) report.s2_missing.push_back(t);
    report.s2_ok = report.s2_missing.empty();
    return report;
}

bool order_is_strict_partial(const PreferentialModel& w) {
    const std::size_t n = w.num_states();
    for (StateId s = 0; s < n; ++s)
        if (w.less(s, s)) return false;
    for (StateId a = 0; a < n; ++a)
        for (StateId b = 0; b < n; ++b) {
            if (!w.less(a, b)) continue;
            for (StateId c = 0; c < n; ++c)
                if (w.less(b, c) && !w.less(a, c)) return false;
        }
    return true;
}

}  // namespace prefteam
