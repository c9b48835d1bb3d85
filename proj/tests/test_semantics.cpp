#include "prefteam/semantics.hpp"

#include <doctest.h>

#include <atomic>
#include <thread>
#include <vector>

using namespace prefteam;

namespace {

// Independent satisfaction oracle: literal recursion over the defining
// clauses, with disjunction enumerated through splits(). Kept deliberately
// naive; the evaluator and mod_set are both checked against it.
bool oracle_satisfies(const TeamDomain& dom, const Team& x, Formula f) {
    switch (f->kind()) {
        case NodeKind::Top:
            return true;
        case NodeKind::Bottom:
            return x.is_empty();
        case NodeKind::PosLiteral: {
            int i = *dom.index_of(f->var());
            for (Valuation v : x.valuations())
                if (!valuation_bit(v, i)) return false;
            return true;
        }
        case NodeKind::NegLiteral: {
            int i = *dom.index_of(f->var());
            for (Valuation v : x.valuations())
                if (valuation_bit(v, i)) return false;
            return true;
        }
        case NodeKind::And:
            return oracle_satisfies(dom, x, f->left()) && oracle_satisfies(dom, x, f->right());
        case NodeKind::Or: {
            for (const auto& [y, z] : splits(x, SplitMode::Covers))
                if (oracle_satisfies(dom, y, f->left()) && oracle_satisfies(dom, z, f->right()))
                    return true;
            return false;
        }
        case NodeKind::Dep: {
            std::vector<int> args;
            for (const auto& a : f->dep_args()) args.push_back(*dom.index_of(a));
            int target = *dom.index_of(f->dep_target());
            auto vals = x.valuations();
            for (Valuation v : vals)
                for (Valuation u : vals) {
                    bool agree = true;
                    for (int i : args)
                        if (valuation_bit(v, i) != valuation_bit(u, i)) agree = false;
                    if (agree && valuation_bit(v, target) != valuation_bit(u, target))
                        return false;
                }
            return true;
        }
        case NodeKind::Inc: {
            std::vector<int> lhs, rhs;
            for (const auto& a : f->inc_lhs()) lhs.push_back(*dom.index_of(a));
            for (const auto& b : f->inc_rhs()) rhs.push_back(*dom.index_of(b));
            auto vals = x.valuations();
            for (Valuation v : vals) {
                bool witnessed = false;
                for (Valuation u : vals) {
                    bool match = true;
                    for (std::size_t k = 0; k < lhs.size(); ++k)
                        if (valuation_bit(v, lhs[k]) != valuation_bit(u, rhs[k])) match = false;
                    if (match) witnessed = true;
                }
                if (!witnessed) return false;
            }
            return true;
        }
    }
    return false;
}

const TeamDomain& dom_pqr() {
    static TeamDomain dom = TeamDomain::parse("p q r");
    return dom;
}
const TeamDomain& dom_pq() {
    static TeamDomain dom = TeamDomain::parse("p q");
    return dom;
}

// Example team {(1,0,0), (0,1,0)} over (p, q, r).
Team example2_team() {
    return Team::of(dom_pqr(), {0b001, 0b010});
}

}  // namespace

TEST_CASE("dependence and constancy atoms on the two-member example team") {
    Team x = example2_team();
    CHECK(satisfies(dom_pqr(), x, parse("=(p ; q)", dom_pqr())));
    CHECK(satisfies(dom_pqr(), x, parse("=(; r)", dom_pqr())));
    CHECK(!satisfies(dom_pqr(), x, parse("=(; p)", dom_pqr())));
    CHECK(satisfies(dom_pqr(), x, parse("=(; p) | =(; p)", dom_pqr())));
}

TEST_CASE("empty team satisfies every formula") {
    Team empty = Team::empty(dom_pqr());
    for (Fragment frag : {Fragment::PL, Fragment::PDL, Fragment::PIncl, Fragment::Mixed})
        for (Formula f : generate_corpus(dom_pqr(), 2, frag, 17, 40))
            CHECK(satisfies(dom_pqr(), empty, f));
}

TEST_CASE("singletons reduce to classical truth of the flattening") {
    auto corpus = generate_corpus(dom_pqr(), 2, Fragment::PDL, 23, 60);
    Evaluator ev(dom_pqr());
    for (Formula f : corpus) {
        Formula flat = flatten(f);
        for (Valuation v = 0; v < 8; ++v) {
            Team singleton = Team::of(dom_pqr(), {v});
            CHECK(ev.satisfies(singleton, f) == classical_satisfies(dom_pqr(), v, flat));
        }
    }
}

TEST_CASE("evaluator agrees with the cover-split oracle (mixed corpus, n = 2)") {
    auto corpus = generate_corpus(dom_pq(), 2, Fragment::Mixed, 31, 40);
    for (Formula f : corpus) {
        Evaluator ev(dom_pq());
        for (TeamBits bits = 0; bits < dom_pq().num_teams(); ++bits) {
            Team x(dom_pq(), bits);
            CAPTURE(print(f));
            CAPTURE(bits);
            CHECK(ev.satisfies(x, f) == oracle_satisfies(dom_pq(), x, f));
        }
    }
}

TEST_CASE("mod_set agrees with the oracle and the evaluator (n = 2)") {
    auto corpus = generate_corpus(dom_pq(), 2, Fragment::Mixed, 37, 30);
    for (Formula f : corpus) {
        const TeamFamily& fam = mod_set(f, dom_pq());
        for (TeamBits bits = 0; bits < dom_pq().num_teams(); ++bits) {
            CAPTURE(print(f));
            CAPTURE(bits);
            CHECK(fam.contains(bits) == oracle_satisfies(dom_pq(), Team(dom_pq(), bits), f));
        }
    }
}

TEST_CASE("mod_set: pinned families") {
    TeamDomain dom_p = TeamDomain::parse("p");
    const TeamFamily& constancy = mod_set(parse("=(; p)", dom_p), dom_p);
    CHECK(constancy.members() == std::vector<TeamBits>{0, 1, 2});

    const TeamFamily& bot_fam = mod_set(bottom(), dom_pq());
    CHECK(bot_fam.members() == std::vector<TeamBits>{0});

    // Mod(Θ_X) is the powerset of X.
    for (TeamBits x = 0; x < dom_pq().num_teams(); ++x) {
        Formula theta = theta_formula(Team(dom_pq(), x), dom_pq());
        CHECK(mod_set(theta, dom_pq()) == TeamFamily::powerset(dom_pq(), x));
    }
}

TEST_CASE("mod_set is memoized") {
    Formula f = parse("=(p ; q) | inc(q ; p)", dom_pq());
    const TeamFamily& a = mod_set(f, dom_pq());
    const TeamFamily& b = mod_set(f, dom_pq());
    CHECK(&a == &b);
}

TEST_CASE("entailment: examples and flattening weakening") {
    CHECK(entails(bottom(), parse("=(; p)", dom_pqr()), dom_pqr()));

    Formula dep_p = parse("=(; p)", dom_pqr());
    Formula dep_or = parse("=(; p) | =(; p)", dom_pqr());
    CHECK(!entails(dep_or, dep_p, dom_pqr()));
    auto witness = entails_witness(dep_or, dep_p, dom_pqr());
    REQUIRE(witness);
    CHECK(satisfies(dom_pqr(), *witness, dep_or));
    CHECK(!satisfies(dom_pqr(), *witness, dep_p));

    for (Formula f : generate_corpus(dom_pq(), 2, Fragment::PDL, 41, 40))
        CHECK(entails(f, flatten(f), dom_pq()));
}

TEST_CASE("classical entailment: examples and agreement with team entailment on PL") {
    CHECK(classical_entails(parse("p & q", dom_pq()), pos("p"), dom_pq()));
    CHECK(classical_entails(pos("p"), parse("p | q", dom_pq()), dom_pq()));
    CHECK(!classical_entails(pos("p"), pos("q"), dom_pq()));
    CHECK_THROWS_AS(classical_entails(dep({}, "p"), pos("p"), dom_pq()), std::invalid_argument);

    auto corpus = generate_corpus(dom_pq(), 2, Fragment::PL, 43, 30);
    for (Formula a : corpus)
        for (Formula b : corpus)
            CHECK(classical_entails(a, b, dom_pq()) == entails(a, b, dom_pq()));
}

TEST_CASE("closure properties: fragment guarantees") {
    for (Formula f : generate_corpus(dom_pq(), 2, Fragment::PL, 47, 25)) {
        ClosureReport r = check_closure_properties(f, dom_pq());
        CHECK(r.flat);
        CHECK(r.downward_closed);
        CHECK(r.union_closed);
        CHECK(r.empty_team);
    }
    for (Formula f : generate_corpus(dom_pq(), 2, Fragment::PDL, 47, 25)) {
        ClosureReport r = check_closure_properties(f, dom_pq());
        CHECK(r.downward_closed);
        CHECK(r.empty_team);
    }
    for (Formula f : generate_corpus(dom_pq(), 2, Fragment::PIncl, 47, 25)) {
        ClosureReport r = check_closure_properties(f, dom_pq());
        CHECK(r.union_closed);
        CHECK(r.empty_team);
    }
}

TEST_CASE("closure properties: pinned example atoms") {
    ClosureReport dep_report = check_closure_properties(parse("=(; p)", dom_pqr()), dom_pqr());
    CHECK(dep_report.downward_closed);
    CHECK(!dep_report.union_closed);
    CHECK(!dep_report.flat);
    CHECK(dep_report.empty_team);

    ClosureReport inc_report = check_closure_properties(parse("inc(p ; q)", dom_pq()), dom_pq());
    CHECK(inc_report.union_closed);
    CHECK(!inc_report.downward_closed);
    CHECK(inc_report.empty_team);

    // PIncl formulas absorb self-disjunction: φ ≡ φ ∨ φ.
    Formula inc_atom = parse("inc(p ; q)", dom_pq());
    CHECK(mod_set(disj(inc_atom, inc_atom), dom_pq()) == mod_set(inc_atom, dom_pq()));
}

TEST_CASE("monotone entailment satisfies Or on PL and PIncl corpora") {
    for (Fragment frag : {Fragment::PL, Fragment::PIncl}) {
        auto corpus = generate_corpus(dom_pq(), 2, frag, 53, 20);
        for (Formula a : corpus)
            for (Formula b : corpus)
                for (Formula c : corpus) {
                    if (!entails(a, c, dom_pq()) || !entails(b, c, dom_pq())) continue;
                    CHECK(entails(disj(a, b), c, dom_pq()));
                }
    }
}

TEST_CASE("monotone Or fails for PDL: the self-disjunction witness") {
    Formula dep_p = parse("=(; p)", dom_pqr());
    CHECK(entails(dep_p, dep_p, dom_pqr()));
    CHECK(!entails(disj(dep_p, dep_p), dep_p, dom_pqr()));
    CHECK(satisfies(dom_pqr(), example2_team(), disj(dep_p, dep_p)));
    CHECK(!satisfies(dom_pqr(), example2_team(), dep_p));
}

TEST_CASE("disjunction strategies agree (n = 3, all teams)") {
    auto corpus = generate_corpus(dom_pqr(), 2, Fragment::Mixed, 59, 30);
    for (Formula f : corpus) {
        Evaluator cover(dom_pqr(), {DisjunctionStrategy::CoverSearch});
        Evaluator partition(dom_pqr(), {DisjunctionStrategy::PartitionSearch});
        Evaluator unions(dom_pqr(), {DisjunctionStrategy::UnionShortcut});
        Evaluator autos(dom_pqr(), {DisjunctionStrategy::Auto});
        for (TeamBits bits = 0; bits < dom_pqr().num_teams(); ++bits) {
            Team x(dom_pqr(), bits);
            bool expected = cover.satisfies(x, f);
            CAPTURE(print(f));
            CAPTURE(bits);
            CHECK(partition.satisfies(x, f) == expected);
            CHECK(unions.satisfies(x, f) == expected);
            CHECK(autos.satisfies(x, f) == expected);
        }
    }
}

TEST_CASE("evaluator validates domains") {
    Evaluator ev(dom_pq());
    CHECK_THROWS_AS(ev.satisfies(Team::empty(dom_pqr()), pos("p")), DomainError);
    CHECK_THROWS_AS(ev.satisfies(Team::empty(dom_pq()), pos("r")), DomainError);
    CHECK_THROWS_AS(mod_set(pos("r"), dom_pq()), DomainError);
}

TEST_CASE("queries above the family bound still evaluate (n = 5)") {
    TeamDomain dom = TeamDomain::parse("a b c d e");
    Formula f = parse("=(a ; b) | (c & inc(d ; e))", dom);
    Evaluator ev(dom);
    Team x = Team::of(dom, {0b00011, 0b00001, 0b11111, 0b10101});
    CHECK(ev.satisfies(x, f) == oracle_satisfies(dom, x, f));
    CHECK_THROWS_AS(mod_set(f, dom), DomainError);
}

TEST_CASE("single queries work at the 6-variable bound") {
    TeamDomain dom = TeamDomain::parse("a b c d e f");
    Team x = Team::of(dom, {0b000000, 0b111111, 0b101010});
    Formula g = parse("=(a b ; c) | ~f", dom);
    Evaluator ev(dom);
    CHECK(ev.satisfies(x, g) == oracle_satisfies(dom, x, g));
    CHECK(satisfies(dom, Team::empty(dom), g));
}

TEST_CASE("interning and the mod cache tolerate concurrent use") {
    std::vector<std::thread> workers;
    std::atomic<int> failures{0};
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([t, &failures] {
            TeamDomain dom = TeamDomain::parse("p q");
            for (int i = 0; i < 200; ++i) {
                Formula f = parse(i % 2 ? "=(; p) | q" : "inc(p ; q) & top", dom);
                const TeamFamily& fam = mod_set(f, dom);
                if (!fam.contains(0)) ++failures;
                if (!satisfies(dom, Team::empty(dom), f)) ++failures;
                (void)t;
            }
        });
    }
    for (auto& w : workers) w.join();
    CHECK(failures == 0);
}

TEST_CASE("atoms with repeated variables project beyond the domain width") {
    // Positional repeats are meaningful: inc(p p ; q r) requires some member
    // whose (q, r) values equal the member's (p, p) values.
    TeamDomain dom = TeamDomain::parse("p q r");
    Formula wide_inc = parse("inc(p p p p p p p ; q q q q q q r)", dom);
    Formula wide_dep = parse("=(p p p p p p p ; q)", dom);
    Evaluator ev(dom);
    for (TeamBits bits = 0; bits < dom.num_teams(); ++bits) {
        Team x(dom, bits);
        CHECK(ev.satisfies(x, wide_inc) == oracle_satisfies(dom, x, wide_inc));
        CHECK(ev.satisfies(x, wide_dep) == oracle_satisfies(dom, x, wide_dep));
    }
    CHECK(mod_set(wide_inc, dom).contains(0));
}
