#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "kgbell/bell.hpp"
#include "kgbell/polytope.hpp"

using namespace kgbell;

TEST_SUITE("polytope") {

TEST_CASE("strategy vector layout") {
    DeterministicStrategy s{{1, -1}, {1, 1, -1}};
    auto v = strategy_vector(s);
    // correlations row-major, then a, then b, then the affine 1
    REQUIRE(v.size() == 2 * 3 + 2 + 3 + 1);
    CHECK(v == std::vector<long long>{1, 1, -1, -1, -1, 1, 1, -1, 1, 1, -1, 1});

    // flipping both parties fixes correlations and flips the marginal blocks
    DeterministicStrategy f{{-1, 1}, {-1, -1, 1}};
    auto w = strategy_vector(f);
    for (int t = 0; t < 6; ++t) CHECK(w[t] == v[t]);
    for (int t = 6; t < 11; ++t) CHECK(w[t] == -v[t]);
    CHECK(w[11] == 1);
}

TEST_CASE("chsh saturating strategies") {
    auto q = chsh();
    auto sat = saturating_strategies(q);
    REQUIRE(sat.size() == 8);
    for (const auto& s : sat) CHECK(evaluate_deterministic(q, s.a, s.b) == 2);
    // lexicographic: all-plus Alice first, Bob's free column expanded +1 first
    CHECK(sat[0].a == std::vector<int>{1, 1});
    CHECK(sat[0].b == std::vector<int>{1, 1});
    CHECK(sat[1].a == std::vector<int>{1, 1});
    CHECK(sat[1].b == std::vector<int>{1, -1});
    // no duplicates
    std::set<std::pair<std::vector<int>, std::vector<int>>> uniq;
    for (const auto& s : sat) uniq.insert({s.a, s.b});
    CHECK(uniq.size() == sat.size());
}

TEST_CASE("saturating set is complete") {
    // every deterministic point either appears in the list or strictly
    // undershoots the bound
    auto q = build_inequality(2, 2);
    auto sat = saturating_strategies(q);
    std::set<std::pair<std::vector<int>, std::vector<int>>> listed;
    for (const auto& s : sat) listed.insert({s.a, s.b});
    const long long bound = local_bound_bruteforce(q).bound;
    std::mt19937 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<int> a(q.mA), b(q.mB);
        for (auto& t : a) t = rng() & 1 ? 1 : -1;
        for (auto& t : b) t = rng() & 1 ? 1 : -1;
        const long long v = evaluate_deterministic(q, a, b);
        CHECK(v <= bound);
        if (v == bound) CHECK(listed.count({a, b}) == 1);
    }
}

TEST_CASE("saturating counts across the family") {
    CHECK(saturating_strategies(build_inequality(2, 1)).size() == 8);
    CHECK(saturating_strategies(build_inequality(3, 2)).size() == 80);
    CHECK(saturating_strategies(build_inequality(2, 2)).size() == 12);
    CHECK(saturating_strategies(build_inequality(3, 3)).size() == 200);
    CHECK(saturating_strategies(build_inequality(2, 2, true)).size() == 20);
    CHECK(saturating_strategies(build_inequality(3, 3, true)).size() == 332);
}

TEST_CASE("tightness verdicts") {
    // nearly-square instances are facets
    auto t21 = tightness(build_inequality(2, 1));
    CHECK(t21.local_bound == 2);
    CHECK(t21.saturating_count == 8);
    CHECK(t21.ambient_dimension == 8);
    CHECK(t21.rank == 8);
    CHECK(t21.tight);

    auto t32 = tightness(build_inequality(3, 2));
    CHECK(t32.local_bound == 6);
    CHECK(t32.ambient_dimension == 29);
    CHECK(t32.rank == 29);
    CHECK(t32.tight);

    // square marginal-free instances are not
    auto t22 = tightness(build_inequality(2, 2));
    CHECK(t22.local_bound == 4);
    CHECK(t22.saturating_count == 12);
    CHECK(t22.ambient_dimension == 15);
    CHECK(t22.rank == 11);
    CHECK_FALSE(t22.tight);

    auto t33 = tightness(build_inequality(3, 3));
    CHECK(t33.ambient_dimension == 48);
    CHECK(t33.rank == 42);
    CHECK_FALSE(t33.tight);

    // adding the marginals restores tightness
    auto m22 = tightness(build_inequality(2, 2, true));
    CHECK(m22.local_bound == 4);
    CHECK(m22.saturating_count == 20);
    CHECK(m22.ambient_dimension == 15);
    CHECK(m22.rank == 15);
    CHECK(m22.tight);

    auto m33 = tightness(build_inequality(3, 3, true));
    CHECK(m33.ambient_dimension == 48);
    CHECK(m33.rank == 48);
    CHECK(m33.tight);
}

TEST_CASE("rank is invariant under row order and global flips") {
    auto q = build_inequality(3, 3);
    auto sat = saturating_strategies(q);
    const auto base = tightness(q);

    // the rank of the saturating family is a set property; shuffling the
    // vectors or applying the both-party flip symmetry cannot change it.
    // exercise both through the public interface by checking the verdict is
    // reproducible (the enumeration itself is deterministic)
    auto again = tightness(q);
    CHECK(again.rank == base.rank);
    CHECK(again.saturating_count == base.saturating_count);

    // both-party flip maps the saturating set onto itself
    std::set<std::pair<std::vector<int>, std::vector<int>>> listed;
    for (const auto& s : sat) listed.insert({s.a, s.b});
    for (const auto& s : sat) {
        auto fa = s.a, fb = s.b;
        for (auto& t : fa) t = -t;
        for (auto& t : fb) t = -t;
        CHECK(listed.count({fa, fb}) == 1);
    }
}

TEST_CASE("enumeration guard") {
    // the enumeration is guarded at mA <= 20; I(7,6) has mA = 7 + 15 = 22
    CHECK_THROWS_AS(saturating_strategies(build_inequality(7, 6)), std::invalid_argument);
}

TEST_CASE("strategies csv") {
    auto sat = saturating_strategies(chsh());
    auto csv = export_strategies_csv(sat);
    std::istringstream is(csv);
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 3);
    }
    CHECK(rows == 8);
    CHECK(csv.substr(0, 8) == "1,1,1,1\n");
}

TEST_CASE("marginal instance reduces to the next size down") {
    auto ev3 = reduce_inclusion(3);
    CHECK(ev3.n == 3);
    CHECK(ev3.coefficients_match);
    CHECK(ev3.constant_offset == 5);
    CHECK(ev3.source_bound == 9);
    CHECK(ev3.target_bound == 4);
    CHECK(ev3.bounds_consistent);
    CHECK(ev3.target.label == "I'(2,2)");
    CHECK(ev3.residual.mA == 3);
    CHECK(same_coefficients(ev3.residual, ev3.target));

    auto ev4 = reduce_inclusion(4);
    CHECK(ev4.coefficients_match);
    CHECK(ev4.constant_offset == 7);
    CHECK(ev4.bounds_consistent);
    CHECK(ev4.target.mA == 6);

    CHECK_THROWS_AS(reduce_inclusion(2), std::invalid_argument);
}

TEST_CASE("reduction chain reaches the smallest instance") {
    // n = 5 -> 4 -> 3: offsets 9, 7, total bound telescopes 25 = 16 + 9
    auto ev5 = reduce_inclusion(5);
    CHECK(ev5.coefficients_match);
    CHECK(ev5.constant_offset == 9);
    CHECK(ev5.source_bound == 25);
    CHECK(ev5.target_bound == 16);
    // and the chain terminates at the 3-setting instance
    auto ev = reduce_inclusion(3);
    CHECK(ev.target.mA == 3);
    CHECK(ev.target.mB == 3);
}

} // TEST_SUITE
