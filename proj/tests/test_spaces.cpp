#include <gtest/gtest.h>

#include <random>

#include "fuzzdyn/fuzzdyn.hpp"
#include "oracles.hpp"

using namespace fuzzdyn;

TEST(Rational, ParsesAndPrintsCanonically) {
    EXPECT_EQ(to_string(parse_rational("2/4")), "1/2");
    EXPECT_EQ(to_string(parse_rational("3")), "3");
    EXPECT_EQ(to_string(parse_rational("-6/9")), "-2/3");
    EXPECT_THROW(parse_rational("1/0"), InputError);
    EXPECT_THROW(parse_rational("x"), InputError);
    EXPECT_THROW(parse_rational(""), InputError);
}

TEST(MetricSpace, GeneratedSpacesSatisfyTheAxioms) {
    for (std::size_t n = 1; n <= 9; ++n) {
        EXPECT_TRUE(validate_metric(circle_space(n)).empty()) << n;
        EXPECT_TRUE(validate_metric(discrete_space(n)).empty()) << n;
        EXPECT_TRUE(validate_metric(interval_grid_space(n)).empty()) << n;
    }
    for (std::size_t k = 0; k <= 4; ++k) EXPECT_TRUE(validate_metric(dyadic_space(k)).empty()) << k;
}

TEST(MetricSpace, CircleDistances) {
    const auto c = circle_space(12);
    EXPECT_EQ(c.distance(0, 1), Rational(1, 12));
    EXPECT_EQ(c.distance(0, 11), Rational(1, 12));
    EXPECT_EQ(c.distance(0, 6), Rational(1, 2));
    EXPECT_EQ(c.diameter(), Rational(1, 2));
    EXPECT_EQ(*c.min_positive_distance(), Rational(1, 12));
}

TEST(MetricSpace, DyadicDistances) {
    const auto d = dyadic_space(3);
    EXPECT_EQ(d.distance(0, 1), Rational(1));
    EXPECT_EQ(d.distance(0, 2), Rational(1, 2));
    EXPECT_EQ(d.distance(0, 4), Rational(1, 4));
    EXPECT_EQ(d.distance(2, 6), Rational(1, 4));
}

TEST(MetricSpace, ValidateReportsEachKindOfViolation) {
    using K = MetricViolation::Kind;
    auto kinds = [](const MetricSpace& s) {
        std::vector<K> out;
        for (const auto& v : validate_metric(s)) out.push_back(v.kind);
        return out;
    };
    const std::vector<std::string> l3{"a", "b", "c"};
    // d(a,c) = 3 > d(a,b) + d(b,c) = 2
    const auto tri = MetricSpace::from_table(
        l3, {{Rational(0), Rational(1), Rational(3)}, {Rational(1), Rational(0), Rational(1)}, {Rational(3), Rational(1), Rational(0)}});
    EXPECT_EQ(kinds(tri), std::vector<K>{K::triangle});
    const auto asym = MetricSpace::from_table({"a", "b"}, {{Rational(0), Rational(1)}, {Rational(2), Rational(0)}});
    EXPECT_EQ(kinds(asym), std::vector<K>{K::asymmetric});
    const auto zero = MetricSpace::from_table({"a", "b"}, {{Rational(0), Rational(0)}, {Rational(0), Rational(0)}});
    EXPECT_EQ(kinds(zero).size(), 2u);
    EXPECT_EQ(kinds(zero).front(), K::zero_between_distinct);
    const auto self = MetricSpace::from_table({"a"}, {{Rational(1)}});
    EXPECT_EQ(kinds(self), std::vector<K>{K::nonzero_self_distance});
    const auto neg = MetricSpace::from_table({"a", "b"}, {{Rational(0), Rational(-1)}, {Rational(-1), Rational(0)}});
    EXPECT_EQ(kinds(neg).front(), K::negative);
}

TEST(MetricSpace, RejectsMalformedTables) {
    EXPECT_THROW(MetricSpace::from_table({}, {}), InputError);
    EXPECT_THROW(MetricSpace::from_table({"a", "b"}, {{Rational(0), Rational(1)}}), InputError);
    EXPECT_THROW(MetricSpace::from_table({"a", "b"}, {{Rational(0)}, {Rational(0), Rational(1)}}), InputError);
}

TEST(SystemMap, GeneratorTables) {
    EXPECT_EQ(make_rotation(5, 2).table(), (SystemMap::Table{2, 3, 4, 0, 1}));
    EXPECT_EQ(make_rotation(4, -1).table(), (SystemMap::Table{3, 0, 1, 2}));
    EXPECT_EQ(make_multiply(8, 2).table(), (SystemMap::Table{0, 2, 4, 6, 0, 2, 4, 6}));
    EXPECT_EQ(make_constant(3, 1).table(), (SystemMap::Table{1, 1, 1}));
    EXPECT_EQ(make_odometer(2).table(), (SystemMap::Table{1, 2, 3, 0}));
    EXPECT_EQ(make_reflection(5).table(), (SystemMap::Table{0, 4, 3, 2, 1}));
    EXPECT_EQ(make_named_grid_map("half", 8).table(), (SystemMap::Table{0, 0, 1, 1, 2, 2, 3, 3, 4}));
    EXPECT_EQ(make_named_grid_map("tent", 4).table(), (SystemMap::Table{0, 2, 4, 2, 0}));
    EXPECT_FALSE(make_multiply(8, 2).surjective());
    EXPECT_TRUE(make_rotation(8, 3).surjective());
    EXPECT_THROW(make_named_grid_map("logistic", 4), InputError);
    EXPECT_THROW(SystemMap(discrete_space(2), {0, 2}), InputError);
    EXPECT_THROW(SystemMap(discrete_space(2), {0}), InputError);
}

TEST(SystemMap, NearestSnappingRoundsTiesUp) {
    // tent on {i/8}: values 0, 1/4, 1/2, 3/4, 1, 3/4, ... land on the grid exactly
    EXPECT_EQ(make_named_grid_map("tent", 8, Snap::nearest).table(), (SystemMap::Table{0, 2, 4, 6, 8, 6, 4, 2, 0}));
    // halving on {i/3}: 1/6 -> 1/2 of a step, rounds up to 1/3
    EXPECT_EQ(make_named_grid_map("half", 3, Snap::nearest).table(), (SystemMap::Table{0, 1, 1, 2}));
    EXPECT_EQ(make_named_grid_map("half", 3, Snap::down).table(), (SystemMap::Table{0, 0, 1, 1}));
}

TEST(SystemMap, IterateMatchesRepeatedApplication) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto t = oracle::random_table(rng, 7);
        const SystemMap sys(discrete_space(7), t);
        for (std::size_t k = 0; k < 12; ++k) {
            const auto it = iterate(sys, k);
            for (std::size_t x = 0; x < 7; ++x) EXPECT_EQ(it(x), oracle::iterate_point(t, x, k));
        }
    }
}

TEST(EventualPeriod, MatchesIterateTableOracle) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng() % 9;
        const auto t = oracle::random_table(rng, n);
        const auto ep = eventual_period(SystemMap(discrete_space(n), t));
        const auto [rho, pi] = oracle::eventual_period(t);
        EXPECT_EQ(ep.preperiod, rho);
        EXPECT_EQ(ep.period, pi);
    }
}

TEST(EventualPeriod, KnownSystems) {
    EXPECT_EQ(eventual_period(make_rotation(12, 1)), (EventualPeriod{0, 12}));
    EXPECT_EQ(eventual_period(make_multiply(9, 2)), (EventualPeriod{0, 6}));
    EXPECT_EQ(eventual_period(make_multiply(8, 2)), (EventualPeriod{3, 1}));
    EXPECT_EQ(eventual_period(make_constant(4)), (EventualPeriod{1, 1}));
    EXPECT_EQ(eventual_period(make_named_grid_map("half", 8)), (EventualPeriod{4, 1}));
    EXPECT_EQ(eventual_period(make_point()), (EventualPeriod{0, 1}));
}

TEST(EventualPeriod, RespectsTheHorizonBound) {
    // cycles of lengths 2,3,5,7 give period 210
    std::vector<std::pair<SystemMap, std::size_t>> f{{make_rotation(2, 1), 1}, {make_rotation(3, 1), 1},
                                                     {make_rotation(5, 1), 1}, {make_rotation(7, 1), 1}};
    const auto prod = product_system(f);
    EXPECT_EQ(eventual_period(prod).period, 210u);
    Limits tight;
    tight.max_horizon = 100;
    EXPECT_THROW(eventual_period(prod, tight), BoundError);
}

TEST(PeriodicPoints, MatchesOrbitOracle) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = oracle::random_table(rng, 6);
        const auto p = periodic_points(SystemMap(discrete_space(6), t));
        for (std::size_t x = 0; x < 6; ++x) {
            bool returns = false;
            for (std::size_t n = 1; n <= 6 && !returns; ++n) returns = oracle::iterate_point(t, x, n) == x;
            EXPECT_EQ(p.test(x), returns);
        }
    }
}

TEST(Product, MaxMetricAndCoordinates) {
    const auto a = make_rotation(3, 1);
    const auto b = make_multiply(4, 3);
    const auto p = product_system({{a, 1}, {b, 2}});
    ASSERT_EQ(p.size(), 12u);
    EXPECT_TRUE(validate_metric(p.space()).empty());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto ci = product_coordinates(i, {3, 4});
        const auto img = product_coordinates(p(i), {3, 4});
        EXPECT_EQ(img[0], a(ci[0]));
        EXPECT_EQ(img[1], b(b(ci[1])));
        for (std::size_t j = 0; j < p.size(); ++j) {
            const auto cj = product_coordinates(j, {3, 4});
            EXPECT_EQ(p.space().distance(i, j),
                      std::max(a.space().distance(ci[0], cj[0]), b.space().distance(ci[1], cj[1])));
        }
    }
    EXPECT_EQ(p.space().diameter(), Rational(1, 2));
}

TEST(Product, BoundIsEnforced) {
    Limits tight;
    tight.max_product_points = 10;
    EXPECT_THROW(product_system({{make_rotation(4, 1), 1}, {make_rotation(3, 1), 1}}, tight), BoundError);
    EXPECT_THROW(product_system({}), InputError);
    EXPECT_THROW(product_system({{make_rotation(4, 1), 0}}), InputError);
}

TEST(Restrict, KeepsDistancesAndMap) {
    const auto sys = make_rotation(6, 2);
    PointSet evens(6);
    evens.set(0).set(2).set(4);
    const auto r = restrict_to(sys, evens);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r.table(), (SystemMap::Table{1, 2, 0}));
    EXPECT_EQ(r.space().distance(0, 1), Rational(1, 3));
}
