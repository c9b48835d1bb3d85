#include "prefteam/teams.hpp"

#include <algorithm>
#include <sstream>

namespace prefteam {

namespace {

bool valid_ident(std::string_view s) {
    if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
    for (char c : s.substr(1)) {
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    }
    return true;
}

bool reserved_word(std::string_view s) {
    return s == "top" || s == "bot" || s == "inc";
}

TeamBits universe_for(int n) {
    return n == kMaxQueryVars ? ~TeamBits{0} : (TeamBits{1} << (1 << n)) - 1;
}

}  // namespace

// ============================================================================
// TeamDomain
// ============================================================================

TeamDomain::TeamDomain(std::vector<std::string> vars) : vars_(std::move(vars)) {
    if (vars_.empty())
        throw DomainError("domain must contain at least one variable");
    if (static_cast<int>(vars_.size()) > kMaxQueryVars)
        throw DomainError("domain too large: at most " + std::to_string(kMaxQueryVars) +
                          " variables are supported");
    for (const auto& v : vars_) {
        if (!valid_ident(v))
            throw DomainError("invalid variable name '" + v + "' (expected [a-z][a-z0-9_]*)");
        if (reserved_word(v))
            throw DomainError("variable name '" + v + "' is a reserved word of the grammar");
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
        for (std::size_t j = i + 1; j < vars_.size(); ++j)
            if (vars_[i] == vars_[j])
                throw DomainError("duplicate variable name '" + vars_[i] + "'");
}

TeamDomain TeamDomain::parse(std::string_view text) {
    std::vector<std::string> vars;
    std::string cur;
    std::istringstream in{std::string(text)};
    while (in >> cur) vars.push_back(cur);
    return TeamDomain(std::move(vars));
}

std::uint64_t TeamDomain::num_teams() const {
    if (size() > kMaxFamilyVars)
        throw DomainError("domain too large for team-lattice enumeration (max " +
                          std::to_string(kMaxFamilyVars) + " variables)");
    return std::uint64_t{1} << num_valuations();
}

std::optional<int> TeamDomain::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

std::string TeamDomain::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (i) out += ' ';
        out += vars_[i];
    }
    return out;
}

std::string valuation_text(const TeamDomain& dom, Valuation v) {
    std::string s(static_cast<std::size_t>(dom.size()), '0');
    for (int i = 0; i < dom.size(); ++i)
        if (valuation_bit(v, i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

// ============================================================================
// Team
// ============================================================================

Team::Team(TeamBits bits, int num_vars) : bits_(bits), n_(num_vars) {
    if (num_vars < 1 || num_vars > kMaxQueryVars)
        throw DomainError("team variable count out of range");
    if (bits & ~universe_for(num_vars))
        throw DomainError("team encoding " + std::to_string(bits) + " out of range for " +
                          std::to_string(num_vars) + " variables");
}

Team::Team(const TeamDomain& dom, TeamBits bits) : Team(bits, dom.size()) {}

Team Team::of(const TeamDomain& dom, const std::vector<Valuation>& members) {
    TeamBits bits = 0;
    for (Valuation v : members) {
        if (v >= static_cast<Valuation>(dom.num_valuations()))
            throw DomainError("valuation index " + std::to_string(v) + " out of range");
        bits |= TeamBits{1} << v;
    }
    return Team(dom, bits);
}

Team Team::from_text(const TeamDomain& dom, std::string_view text) {
    TeamBits bits = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Tolerate trailing carriage returns and surrounding blanks.
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        line = line.substr(start);
        if (line.size() != static_cast<std::size_t>(dom.size()))
            throw DomainError("team line " + std::to_string(lineno) + " ('" + line +
                              "') must have exactly " + std::to_string(dom.size()) +
                              " characters for domain '" + dom.to_string() + "'");
        Valuation v = 0;
        for (int i = 0; i < dom.size(); ++i) {
            char c = line[static_cast<std::size_t>(i)];
            if (c == '1')
                v |= Valuation{1} << i;
            else if (c != '0')
                throw DomainError("team line " + std::to_string(lineno) +
                                  " contains a character other than 0/1");
        }
        bits |= TeamBits{1} << v;
    }
    return Team(dom, bits);
}

std::string Team::to_text(const TeamDomain& dom) const {
    if (dom.size() != n_) throw DomainError("team/domain size mismatch");
    std::string out;
    for (Valuation v : valuations()) {
        out += valuation_text(dom, v);
        out += '\n';
    }
    return out;
}

std::string Team::to_string(const TeamDomain& dom) const {
    if (dom.size() != n_) throw DomainError("team/domain size mismatch");
    std::string out = "{";
    bool first = true;
    for (Valuation v : valuations()) {
        if (!first) out += ", ";
        first = false;
        out += valuation_text(dom, v);
    }
    out += '}';
    return out;
}

std::vector<Valuation> Team::valuations() const {
    std::vector<Valuation> out;
    out.reserve(static_cast<std::size_t>(cardinality()));
    TeamBits w = bits_;
    while (w) {
        out.push_back(static_cast<Valuation>(__builtin_ctzll(w)));
        w &= w - 1;
    }
    return out;
}

void check_same_domain(const Team& a, const Team& b) {
    if (a.num_vars() != b.num_vars())
        throw DomainError("teams have mismatched domains (" + std::to_string(a.num_vars()) +
                          " vs " + std::to_string(b.num_vars()) + " variables)");
}

bool is_subteam(const Team& sub, const Team& sup) {
    check_same_domain(sub, sup);
    return (sub.bits() & ~sup.bits()) == 0;
}

Team team_union(const Team& a, const Team& b) {
    check_same_domain(a, b);
    return Team(a.bits() | b.bits(), a.num_vars());
}

Team team_intersection(const Team& a, const Team& b) {
    check_same_domain(a, b);
    return Team(a.bits() & b.bits(), a.num_vars());
}

std::vector<Team> subteams(const Team& x) {
    std::vector<Team> out;
    out.reserve(std::size_t{1} << x.cardinality());
    TeamBits m = x.bits();
    // Submask enumeration runs descending; collect then reverse for
    // ascending encoding order.
    TeamBits sub = m;
    for (;;) {
        out.emplace_back(sub, x.num_vars());
        if (sub == 0) break;
        sub = (sub - 1) & m;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<Team> proper_subteams(const Team& x) {
    std::vector<Team> out = subteams(x);
    out.pop_back();  // the last entry is X itself
    return out;
}

std::vector<std::pair<Team, Team>> splits(const Team& x, SplitMode mode) {
    std::vector<std::pair<Team, Team>> out;
    const TeamBits m = x.bits();
    const int n = x.num_vars();
    TeamBits y = m;
    for (;;) {
        const TeamBits rest = m & ~y;
        if (mode == SplitMode::Partitions) {
            out.emplace_back(Team(y, n), Team(rest, n));
        } else {
            // Z ranges over rest ∪ T for every T ⊆ Y.
            TeamBits t = y;
            for (;;) {
                out.emplace_back(Team(y, n), Team(rest | t, n));
                if (t == 0) break;
                t = (t - 1) & y;
            }
        }
        if (y == 0) break;
        y = (y - 1) & m;
    }
    return out;
}

std::vector<Team> enumerate_nonempty_teams(const TeamDomain& dom) {
    const std::uint64_t total = dom.num_teams();  // throws when too large
    std::vector<Team> out;
    out.reserve(total - 1);
    for (std::uint64_t t = 1; t < total; ++t) out.emplace_back(dom, t);
    return out;
}

// ============================================================================
// TeamFamily
// ============================================================================

TeamFamily::TeamFamily(const TeamDomain& dom)
    : n_(dom.size()), members_(Bitset(dom.num_teams())) {}

TeamFamily TeamFamily::all(const TeamDomain& dom) {
    return TeamFamily(dom.size(), Bitset::full(dom.num_teams()));
}

TeamFamily TeamFamily::powerset(const TeamDomain& dom, TeamBits x) {
    TeamFamily fam(dom);
    TeamBits sub = x;
    for (;;) {
        fam.insert(sub);
        if (sub == 0) break;
        sub = (sub - 1) & x;
    }
    return fam;
}

TeamFamily& TeamFamily::operator&=(const TeamFamily& o) {
    if (n_ != o.n_) throw DomainError("team families over different domains");
    members_ &= o.members_;
    return *this;
}

TeamFamily& TeamFamily::operator|=(const TeamFamily& o) {
    if (n_ != o.n_) throw DomainError("team families over different domains");
    members_ |= o.members_;
    return *this;
}

std::vector<TeamBits> TeamFamily::members() const {
    std::vector<TeamBits> out;
    out.reserve(count());
    for_each_member([&](TeamBits t) { out.push_back(t); });
    return out;
}

TeamFamily or_convolve(const TeamFamily& a, const TeamFamily& b) {
    if (a.num_vars() != b.num_vars())
        throw DomainError("team families over different domains");
    const int m = 1 << a.num_vars();           // valuations = lattice dimension
    const std::size_t size = std::size_t{1} << m;  // number of teams

    // Count cover pairs via subset-sum zeta transform: with fa, fb the 0/1
    // indicator vectors, zeta(fa)·zeta(fb) is the zeta transform of the cover
    // convolution c[X] = #{(Y,Z) : Y ∪ Z = X, Y ∈ a, Z ∈ b}; Möbius-invert
    // and keep the support. Counts stay below 2^48, so int64 is exact.
    std::vector<std::int64_t> fa(size, 0), fb(size, 0);
    a.for_each_member([&](TeamBits t) { fa[t] = 1; });
    b.for_each_member([&](TeamBits t) { fb[t] = 1; });

    auto zeta = [&](std::vector<std::int64_t>& f) {
        for (int i = 0; i < m; ++i)
            for (std::size_t x = 0; x < size; ++x)
                if (x & (std::size_t{1} << i)) f[x] += f[x ^ (std::size_t{1} << i)];
    };
    auto moebius = [&](std::vector<std::int64_t>& f) {
        for (int i = 0; i < m; ++i)
            for (std::size_t x = 0; x < size; ++x)
                if (x & (std::size_t{1} << i)) f[x] -= f[x ^ (std::size_t{1} << i)];
    };

    zeta(fa);
    zeta(fb);
    for (std::size_t x = 0; x < size; ++x) fa[x] *= fb[x];
    moebius(fa);

    TeamFamily out(a.num_vars(), Bitset(size));
    for (std::size_t x = 0; x < size; ++x)
        if (fa[x] > 0) out.insert(static_cast<TeamBits>(x));
    return out;
}

}  // namespace prefteam
