#include "prefteam/syntax.hpp"

#include <algorithm>
#include <cstddef>
#include <memory>
#include <mutex>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace prefteam {

const char* fragment_name(Fragment f) {
    switch (f) {
        case Fragment::PL: return "pl";
        case Fragment::PDL: return "pdl";
        case Fragment::PIncl: return "pincl";
        case Fragment::Mixed: return "mixed";
    }
    return "?";
}

// ============================================================================
// Interner
// ============================================================================

namespace {

Fragment join_fragments(Fragment a, Fragment b) {
    if (a == b) return a;
    if (a == Fragment::PL) return b;
    if (b == Fragment::PL) return a;
    return Fragment::Mixed;
}

bool valid_ident(std::string_view s) {
    if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
    for (char c : s.substr(1)) {
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    }
    return true;
}

void check_var_name(std::string_view name) {
    if (!valid_ident(name) || name == "top" || name == "bot" || name == "inc")
        throw std::invalid_argument("invalid variable name '" + std::string(name) + "'");
}

}  // namespace

class Interner {
public:
    static Interner& instance() {
        static Interner inst;
        return inst;
    }

    Formula get(NodeKind kind, Formula left, Formula right, std::vector<std::string> vars) {
        std::string key = make_key(kind, left, right, vars);
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = table_.find(key);
        if (it != table_.end()) return it->second;

        nodes_.push_back(std::unique_ptr<FormulaNode>(new FormulaNode()));
        FormulaNode& node = *nodes_.back();
        node.kind_ = kind;
        node.left_ = left;
        node.right_ = right;
        node.vars_ = std::move(vars);
        node.id_ = static_cast<std::uint32_t>(nodes_.size() - 1);
        switch (kind) {
            case NodeKind::PosLiteral:
            case NodeKind::NegLiteral:
            case NodeKind::Bottom:
            case NodeKind::Top:
                node.fragment_ = Fragment::PL;
                node.depth_ = 0;
                break;
            case NodeKind::Dep:
                node.fragment_ = Fragment::PDL;
                node.depth_ = 0;
                break;
            case NodeKind::Inc:
                node.fragment_ = Fragment::PIncl;
                node.depth_ = 0;
                break;
            case NodeKind::And:
            case NodeKind::Or:
                node.fragment_ = join_fragments(left->fragment(), right->fragment());
                node.depth_ = 1 + std::max(left->depth(), right->depth());
                break;
        }
        table_.emplace(std::move(key), &node);
        return &node;
    }

    std::uint32_t size() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return static_cast<std::uint32_t>(nodes_.size());
    }

private:
    static std::string make_key(NodeKind kind, Formula left, Formula right,
                                const std::vector<std::string>& vars) {
        std::string key;
        key += static_cast<char>(kind);
        if (left) {
            key += std::to_string(left->id());
            key += ',';
            key += std::to_string(right->id());
        }
        for (const auto& v : vars) {
            key += ' ';
            key += v;
        }
        return key;
    }

    mutable std::mutex mutex_;
    std::vector<std::unique_ptr<FormulaNode>> nodes_;  // stable addresses
    std::unordered_map<std::string, Formula> table_;
};

Formula pos(std::string_view var) {
    check_var_name(var);
    return Interner::instance().get(NodeKind::PosLiteral, nullptr, nullptr, {std::string(var)});
}

Formula neg(std::string_view var) {
    check_var_name(var);
    return Interner::instance().get(NodeKind::NegLiteral, nullptr, nullptr, {std::string(var)});
}

Formula top() {
    return Interner::instance().get(NodeKind::Top, nullptr, nullptr, {});
}

Formula bottom() {
    return Interner::instance().get(NodeKind::Bottom, nullptr, nullptr, {});
}

Formula conj(Formula a, Formula b) {
    return Interner::instance().get(NodeKind::And, a, b, {});
}

Formula disj(Formula a, Formula b) {
    return Interner::instance().get(NodeKind::Or, a, b, {});
}

Formula dep(std::vector<std::string> args, std::string target) {
    if (args.size() > 64)
        throw std::invalid_argument("dependence atom argument list is too long (max 64)");
    for (const auto& a : args) check_var_name(a);
    check_var_name(target);
    args.push_back(std::move(target));
    return Interner::instance().get(NodeKind::Dep, nullptr, nullptr, std::move(args));
}

Formula inc(std::vector<std::string> lhs, std::vector<std::string> rhs) {
    if (lhs.empty() || lhs.size() != rhs.size())
        throw std::invalid_argument("inclusion atom requires equal, non-empty arities");
    if (lhs.size() > 64)
        throw std::invalid_argument("inclusion atom arity is too long (max 64)");
    for (const auto& a : lhs) check_var_name(a);
    for (const auto& b : rhs) check_var_name(b);
    for (auto& b : rhs) lhs.push_back(std::move(b));
    return Interner::instance().get(NodeKind::Inc, nullptr, nullptr, std::move(lhs));
}

Formula conj_all(std::span<const Formula> parts) {
    if (parts.empty()) return top();
    Formula acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
    return acc;
}

Formula disj_all(std::span<const Formula> parts) {
    if (parts.empty()) return bottom();
    Formula acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
    return acc;
}

std::vector<std::string> variables_of(Formula f) {
    std::set<std::string> names;
    std::vector<Formula> stack{f};
    while (!stack.empty()) {
        Formula cur = stack.back();
        stack.pop_back();
        switch (cur->kind()) {
            case NodeKind::PosLiteral:
            case NodeKind::NegLiteral:
                names.insert(cur->var());
                break;
            case NodeKind::Dep:
                for (const auto& v : cur->dep_args()) names.insert(v);
                names.insert(cur->dep_target());
                break;
            case NodeKind::Inc:
                for (const auto& v : cur->inc_lhs()) names.insert(v);
                for (const auto& v : cur->inc_rhs()) names.insert(v);
                break;
            case NodeKind::And:
            case NodeKind::Or:
                stack.push_back(cur->left());
                stack.push_back(cur->right());
                break;
            case NodeKind::Top:
            case NodeKind::Bottom:
                break;
        }
    }
    return {names.begin(), names.end()};
}

std::uint32_t interned_count() { return Interner::instance().size(); }

// ============================================================================
// Parser
// ============================================================================

namespace {

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() &&
               (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' || text[pos] == '\r'))
            ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    void expect(char c, const char* what) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c)
            throw ParseError(std::string("expected ") + what, pos);
        ++pos;
    }

    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        if (pos >= text.size() || !(text[pos] >= 'a' && text[pos] <= 'z'))
            throw ParseError("expected identifier", pos);
        ++pos;
        while (pos < text.size()) {
            char c = text[pos];
            if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')
                ++pos;
            else
                break;
        }
        return std::string(text.substr(start, pos - start));
    }
};

struct Parser {
    Lexer lex;
    const TeamDomain& domain;

    std::string domain_var() {
        std::size_t at = lex.pos;
        std::string name = lex.ident();
        if (!domain.index_of(name))
            throw DomainError("unknown variable '" + name + "' at position " +
                              std::to_string(at) + " (domain: " + domain.to_string() + ")");
        return name;
    }

    Formula formula() {
        Formula acc = conj_level();
        while (lex.consume('|')) acc = disj(acc, conj_level());
        return acc;
    }

    Formula conj_level() {
        Formula acc = unit();
        while (lex.consume('&')) acc = conj(acc, unit());
        return acc;
    }

    Formula unit() {
        lex.skip_ws();
        if (lex.pos >= lex.text.size()) throw ParseError("unexpected end of input", lex.pos);
        char c = lex.text[lex.pos];

        if (c == '(') {
            ++lex.pos;
            Formula inner = formula();
            lex.expect(')', "')'");
            return inner;
        }
        if (c == '~') {
            ++lex.pos;
            return neg(domain_var());
        }
        if (c == '=') {
            ++lex.pos;
            lex.expect('(', "'(' after '='");
            std::vector<std::string> args;
            while (lex.peek() != ';') args.push_back(domain_var());
            lex.expect(';', "';'");
            std::string target = domain_var();
            lex.expect(')', "')'");
            return dep(std::move(args), std::move(target));
        }
        if (c >= 'a' && c <= 'z') {
            std::size_t at = lex.pos;
            std::string name = lex.ident();
            if (name == "top") return top();
            if (name == "bot") return bottom();
            if (name == "inc") {
                lex.expect('(', "'(' after 'inc'");
                std::vector<std::string> lhs, rhs;
                while (lex.peek() != ';') lhs.push_back(domain_var());
                lex.expect(';', "';'");
                while (lex.peek() != ')') rhs.push_back(domain_var());
                lex.expect(')', "')'");
                if (lhs.empty() || lhs.size() != rhs.size())
                    throw ParseError("inclusion atom requires equal, non-empty arities", at);
                return inc(std::move(lhs), std::move(rhs));
            }
            if (!domain.index_of(name))
                throw DomainError("unknown variable '" + name + "' at position " +
                                  std::to_string(at) + " (domain: " + domain.to_string() + ")");
            return pos(name);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", lex.pos);
    }
};

}  // namespace

Formula parse(std::string_view text, const TeamDomain& domain) {
    Parser p{Lexer{text}, domain};
    Formula f = p.formula();
    if (!p.lex.at_end())
        throw ParseError("trailing input after formula", p.lex.pos);
    return f;
}

// ============================================================================
// Printer
// ============================================================================

namespace {

void print_rec(Formula f, std::string& out) {
    switch (f->kind()) {
        case NodeKind::PosLiteral:
            out += f->var();
            return;
        case NodeKind::NegLiteral:
            out += '~';
            out += f->var();
            return;
        case NodeKind::Top:
            out += "top";
            return;
        case NodeKind::Bottom:
            out += "bot";
            return;
        case NodeKind::Dep: {
            out += "=(";
            for (const auto& a : f->dep_args()) {
                out += a;
                out += ' ';
            }
            out += "; ";
            out += f->dep_target();
            out += ')';
            return;
        }
        case NodeKind::Inc: {
            out += "inc(";
            bool first = true;
            for (const auto& a : f->inc_lhs()) {
                if (!first) out += ' ';
                first = false;
                out += a;
            }
            out += " ; ";
            first = true;
            for (const auto& b : f->inc_rhs()) {
                if (!first) out += ' ';
                first = false;
                out += b;
            }
            out += ')';
            return;
        }
        case NodeKind::And:
        case NodeKind::Or:
            break;
    }

    const bool is_and = f->kind() == NodeKind::And;
    const char* op = is_and ? " & " : " | ";

    // Left-associative chains print without parentheses; anything that would
    // re-associate differently gets parenthesized.
    auto emit = [&](Formula child, bool is_right) {
        bool need_parens = false;
        if (child->kind() == NodeKind::Or) need_parens = is_and || is_right;
        if (child->kind() == NodeKind::And) need_parens = is_and && is_right;
        if (need_parens) out += '(';
        print_rec(child, out);
        if (need_parens) out += ')';
    };
    emit(f->left(), false);
    out += op;
    emit(f->right(), true);
}

}  // namespace

std::string print(Formula f) {
    std::string out;
    print_rec(f, out);
    return out;
}

// ============================================================================
// Flattening
// ============================================================================

Formula flatten(Formula f) {
    switch (f->kind()) {
        case NodeKind::PosLiteral:
        case NodeKind::NegLiteral:
        case NodeKind::Top:
        case NodeKind::Bottom:
            return f;
        case NodeKind::Dep:
            return top();
        case NodeKind::Inc:
            throw std::invalid_argument(
                "flattening is defined for PDL formulas only (inclusion atom found)");
        case NodeKind::And:
            return conj(flatten(f->left()), flatten(f->right()));
        case NodeKind::Or:
            return disj(flatten(f->left()), flatten(f->right()));
    }
    throw std::logic_error("unreachable");
}

// ============================================================================
// Θ_X and cardinality-bounded formulas
// ============================================================================

Formula theta_formula(const Team& x, const TeamDomain& dom) {
    if (x.num_vars() != dom.size()) throw DomainError("team/domain size mismatch");
    std::vector<Formula> disjuncts;
    for (Valuation v : x.valuations()) {
        Formula cube = valuation_bit(v, 0) ? pos(dom.var(0)) : neg(dom.var(0));
        for (int i = 1; i < dom.size(); ++i)
            cube = conj(cube, valuation_bit(v, i) ? pos(dom.var(i)) : neg(dom.var(i)));
        disjuncts.push_back(cube);
    }
    return disj_all(disjuncts);  // empty disjunction = bot
}

Formula cardinality_formula(const Team& x, const TeamDomain& dom, int max_cardinality) {
    if (max_cardinality < 1)
        throw std::invalid_argument("cardinality bound must be at least 1");
    Formula constancies = dep({}, dom.var(0));
    for (int i = 1; i < dom.size(); ++i) constancies = conj(constancies, dep({}, dom.var(i)));
    Formula bound = constancies;
    for (int i = 1; i < max_cardinality; ++i) bound = disj(bound, constancies);
    return conj(theta_formula(x, dom), bound);
}

// ============================================================================
// Corpus generation
// ============================================================================

namespace {

Formula random_atom(const TeamDomain& dom, Fragment atoms, SplitMix64& rng) {
    const std::uint64_t n = static_cast<std::uint64_t>(dom.size());
    // Atom classes: literals/constants always; dep for PDL/Mixed; inc for
    // PIncl/Mixed.
    const bool allow_dep = atoms == Fragment::PDL || atoms == Fragment::Mixed;
    const bool allow_inc = atoms == Fragment::PIncl || atoms == Fragment::Mixed;

    std::uint64_t classes = 1 + (allow_dep ? 1 : 0) + (allow_inc ? 1 : 0);
    std::uint64_t cls = rng.below(classes);
    if (cls == 0) {
        std::uint64_t pick = rng.below(2 * n + 2);
        if (pick < n) return pos(dom.var(static_cast<int>(pick)));
        if (pick < 2 * n) return neg(dom.var(static_cast<int>(pick - n)));
        return pick == 2 * n ? top() : bottom();
    }
    if (cls == 1 && allow_dep) {
        std::vector<std::string> args;
        for (int i = 0; i < dom.size(); ++i)
            if (rng.chance(0.5)) args.push_back(dom.var(i));
        std::string target = dom.var(static_cast<int>(rng.below(n)));
        return dep(std::move(args), std::move(target));
    }
    // Inclusion atom with arity 1 or 2 (capped by the domain size).
    std::uint64_t arity = 1 + rng.below(std::min<std::uint64_t>(2, n));
    std::vector<std::string> lhs, rhs;
    for (std::uint64_t i = 0; i < arity; ++i) lhs.push_back(dom.var(static_cast<int>(rng.below(n))));
    for (std::uint64_t i = 0; i < arity; ++i) rhs.push_back(dom.var(static_cast<int>(rng.below(n))));
    return inc(std::move(lhs), std::move(rhs));
}

Formula random_formula(const TeamDomain& dom, int depth, Fragment atoms, SplitMix64& rng,
                       double binary_weight) {
    if (depth <= 0 || !rng.chance(binary_weight)) return random_atom(dom, atoms, rng);
    Formula a = random_formula(dom, depth - 1, atoms, rng, binary_weight);
    Formula b = random_formula(dom, depth - 1, atoms, rng, binary_weight);
    return rng.chance(0.5) ? conj(a, b) : disj(a, b);
}

}  // namespace

std::vector<Formula> generate_corpus(const TeamDomain& dom, int max_depth, Fragment atoms,
                                     std::uint64_t seed, int count, const CorpusOptions& options) {
    if (max_depth < 0) throw std::invalid_argument("corpus depth must be non-negative");
    if (count < 1) throw std::invalid_argument("corpus count must be at least 1");

    SplitMix64 rng(seed);
    std::vector<Formula> out;
    std::unordered_set<Formula> seen;
    long long attempts =
        static_cast<long long>(count) * std::max(1, options.max_attempts_factor);
    while (static_cast<int>(out.size()) < count && attempts-- > 0) {
        Formula f = random_formula(dom, max_depth, atoms, rng, options.binary_weight);
        if (seen.insert(f).second) out.push_back(f);
    }
    return out;
}

}  // namespace prefteam
