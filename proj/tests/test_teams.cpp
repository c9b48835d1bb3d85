#include "prefteam/teams.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace prefteam;

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(TeamDomain::parse(""), DomainError);
    CHECK_THROWS_AS(TeamDomain::parse("p q p"), DomainError);
    CHECK_THROWS_AS(TeamDomain::parse("p Q"), DomainError);
    CHECK_THROWS_AS(TeamDomain::parse("top q"), DomainError);
    CHECK_THROWS_AS(TeamDomain::parse("a b c d e f g"), DomainError);

    TeamDomain dom = TeamDomain::parse("p q r");
    CHECK(dom.size() == 3);
    CHECK(dom.num_valuations() == 8);
    CHECK(dom.index_of("q") == 1);
    CHECK(!dom.index_of("z"));
    CHECK(dom.to_string() == "p q r");
}

TEST_CASE("valuation text uses domain variable order") {
    TeamDomain dom = TeamDomain::parse("p q r");
    // bit i of the valuation index is the value of variable i.
    CHECK(valuation_text(dom, 0b001) == "100");
    CHECK(valuation_text(dom, 0b010) == "010");
    CHECK(valuation_text(dom, 0b110) == "011");
}

TEST_CASE("team text round-trip and duplicate collapse") {
    TeamDomain dom = TeamDomain::parse("p q r");
    Team team = Team::from_text(dom, "100\n010\n010\n");
    CHECK(team.cardinality() == 2);  // duplicated valuations collapse
    CHECK(team.bits() == ((TeamBits{1} << 1) | (TeamBits{1} << 2)));
    CHECK(Team::from_text(dom, team.to_text(dom)) == team);

    CHECK(Team::from_text(dom, "").is_empty());
    CHECK(Team::from_text(dom, "\n \n").is_empty());
    CHECK_THROWS_AS(Team::from_text(dom, "10"), DomainError);
    CHECK_THROWS_AS(Team::from_text(dom, "10x"), DomainError);
}

TEST_CASE("team encoding bijectivity") {
    TeamDomain dom = TeamDomain::parse("p q");
    for (TeamBits bits = 0; bits < dom.num_teams(); ++bits) {
        Team team(dom, bits);
        CHECK(team.bits() == bits);
        CHECK(Team::from_text(dom, team.to_text(dom)) == team);
    }
}

TEST_CASE("enumerate_nonempty_teams counts") {
    CHECK(enumerate_nonempty_teams(TeamDomain::parse("p")).size() == 3);
    CHECK(enumerate_nonempty_teams(TeamDomain::parse("p q")).size() == 15);
    CHECK(enumerate_nonempty_teams(TeamDomain::parse("p q r")).size() == 255);
    CHECK_THROWS_AS(enumerate_nonempty_teams(TeamDomain::parse("a b c d e")), DomainError);

    // Ascending encoding order, starting at 1.
    auto teams = enumerate_nonempty_teams(TeamDomain::parse("p q"));
    for (std::size_t i = 0; i < teams.size(); ++i) CHECK(teams[i].bits() == i + 1);
}

TEST_CASE("subteams and set operations") {
    TeamDomain dom = TeamDomain::parse("p q");
    Team x = Team::of(dom, {1, 2});
    auto subs = subteams(x);
    CHECK(subs.size() == 4);
    CHECK(subs.front().is_empty());
    CHECK(subs.back() == x);
    CHECK(proper_subteams(x).size() == 3);

    Team v1 = Team::of(dom, {1});
    Team v2 = Team::of(dom, {2});
    CHECK(team_union(v1, v2) == x);
    CHECK(team_intersection(v1, v2).is_empty());
    CHECK(is_subteam(Team::empty(dom), x));
    CHECK(is_subteam(v1, x));
    CHECK(!is_subteam(x, v1));

    TeamDomain other = TeamDomain::parse("p q r");
    CHECK_THROWS_AS(team_union(v1, Team::empty(other)), DomainError);
}

TEST_CASE("splits: covers and partitions") {
    TeamDomain dom = TeamDomain::parse("p q");
    Team x = Team::of(dom, {0, 3});

    auto covers = splits(x, SplitMode::Covers);
    auto partitions = splits(x, SplitMode::Partitions);
    CHECK(covers.size() == 9);      // 3^2
    CHECK(partitions.size() == 4);  // 2^2

    std::set<std::pair<TeamBits, TeamBits>> cover_set, partition_set;
    for (auto& [y, z] : covers) {
        CHECK(team_union(y, z) == x);
        cover_set.emplace(y.bits(), z.bits());
    }
    for (auto& [y, z] : partitions) {
        CHECK(team_union(y, z) == x);
        CHECK(team_intersection(y, z).is_empty());
        partition_set.emplace(y.bits(), z.bits());
    }
    for (auto& p : partition_set) CHECK(cover_set.count(p) == 1);

    auto empty_covers = splits(Team::empty(dom), SplitMode::Covers);
    auto empty_partitions = splits(Team::empty(dom), SplitMode::Partitions);
    CHECK(empty_covers.size() == 1);
    CHECK(empty_partitions.size() == 1);
    CHECK(empty_covers[0].first.is_empty());
    CHECK(empty_covers[0].second.is_empty());
}

TEST_CASE("splits cover/partition law for all teams up to 4 members") {
    TeamDomain dom = TeamDomain::parse("p q");
    for (TeamBits bits = 0; bits < dom.num_teams(); ++bits) {
        Team x(dom, bits);
        auto covers = splits(x, SplitMode::Covers);
        auto partitions = splits(x, SplitMode::Partitions);
        CHECK(covers.size() == static_cast<std::size_t>(std::pow(3, x.cardinality())));
        CHECK(partitions.size() == (std::size_t{1} << x.cardinality()));
        std::set<std::pair<TeamBits, TeamBits>> cover_set;
        for (auto& [y, z] : covers) {
            CHECK((y.bits() | z.bits()) == bits);
            cover_set.emplace(y.bits(), z.bits());
        }
        CHECK(cover_set.size() == covers.size());  // no duplicate pairs
        for (auto& [y, z] : partitions) CHECK(cover_set.count({y.bits(), z.bits()}) == 1);
    }
}

TEST_CASE("team family basics and powerset") {
    TeamDomain dom = TeamDomain::parse("p q");
    TeamFamily fam(dom);
    CHECK(fam.count() == 0);
    fam.insert(5);
    fam.insert(3);
    CHECK(fam.contains(5));
    CHECK(!fam.contains(4));
    CHECK(fam.members() == std::vector<TeamBits>{3, 5});

    TeamFamily power = TeamFamily::powerset(dom, 0b0110);
    CHECK(power.count() == 4);
    for (TeamBits t : {0, 2, 4, 6}) CHECK(power.contains(static_cast<TeamBits>(t)));

    CHECK(TeamFamily::all(dom).count() == 16);
}

TEST_CASE("or_convolve matches the pairwise-union oracle") {
    TeamDomain dom = TeamDomain::parse("p q");
    SplitMix64 rng(2024);
    for (int round = 0; round < 50; ++round) {
        TeamFamily a(dom), b(dom);
        for (TeamBits t = 0; t < dom.num_teams(); ++t) {
            if (rng.chance(0.3)) a.insert(t);
            if (rng.chance(0.3)) b.insert(t);
        }
        TeamFamily expected(dom);
        a.for_each_member([&](TeamBits y) {
            b.for_each_member([&](TeamBits z) { expected.insert(y | z); });
        });
        CHECK(or_convolve(a, b) == expected);
    }
}

TEST_CASE("splitmix64 determinism") {
    SplitMix64 a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    SplitMix64 c(42), d(43);
    CHECK(c.next() != d.next());
    SplitMix64 e(7);
    for (int i = 0; i < 1000; ++i) CHECK(e.below(10) < 10);
}
