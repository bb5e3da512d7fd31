#include <gtest/gtest.h>

#include <random>

#include "fuzzdyn/fuzzdyn.hpp"
#include "oracles.hpp"

using namespace fuzzdyn;

namespace {

oracle::Grades grades_of(const FuzzySet& a) { return {a.levels().begin(), a.levels().end()}; }

FuzzySet make_fuzzy(const MetricSpace& s, std::size_t m, const std::vector<std::uint8_t>& levels) {
    return FuzzySet(s, LevelGrid(m), levels);
}

}  // namespace

TEST(LevelGrid, IndexAndCeiling) {
    const LevelGrid g(4);
    EXPECT_EQ(g.index_of(Rational(3, 4)), 3u);
    EXPECT_EQ(g.index_of(Rational(1, 2)), 2u);
    EXPECT_THROW(g.index_of(Rational(1, 3)), InputError);
    EXPECT_THROW(g.index_of(Rational(5, 4)), InputError);
    EXPECT_EQ(g.ceil_index(Rational(1, 3)), 2u);
    EXPECT_EQ(g.ceil_index(Rational(1, 4)), 1u);
    EXPECT_THROW(LevelGrid(0), InputError);
    EXPECT_THROW(LevelGrid(256), InputError);
}

TEST(FuzzySet, CutsHeightAndSupport) {
    const auto s = circle_space(4);
    const auto a = make_fuzzy(s, 4, {4, 2, 0, 1});
    EXPECT_EQ(a.height(), Rational(1));
    EXPECT_EQ(alpha_cut(a, Rational(1, 2)).points(), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(alpha_cut(a, Rational(1, 3)).points(), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(alpha_cut(a, Rational(1, 5)).points(), (std::vector<std::size_t>{0, 1, 3}));
    EXPECT_EQ(support(a).points(), (std::vector<std::size_t>{0, 1, 3}));
    EXPECT_THROW(alpha_cut(a, Rational(0)), InputError);
    EXPECT_THROW(make_fuzzy(s, 2, {3, 0, 0, 0}), InputError);
    EXPECT_THROW(make_fuzzy(s, 2, {1, 0}), InputError);
    EXPECT_EQ(a.label(), "(1,1/2,0,1/4)");
}

TEST(Levelwise, MatchesOracleOverFullEnumeration) {
    for (const auto& space : {circle_space(3), interval_grid_space(2)}) {
        const LevelGrid grid(2);
        const auto all = enumerate_fuzzy(space, grid, FuzzyConstraint::all());
        ASSERT_EQ(all.size(), 27u);
        const auto d = oracle::distances(space);
        for (const auto& a : all)
            for (const auto& b : all)
                EXPECT_EQ(levelwise_distance(a, b), oracle::levelwise(d, grades_of(a), grades_of(b), 2));
    }
}

TEST(Levelwise, EmptyCutsCostTheDiameter) {
    const auto s = interval_grid_space(4);
    const auto a = make_fuzzy(s, 2, {2, 0, 0, 0, 0});
    const auto b = make_fuzzy(s, 2, {1, 0, 0, 0, 0});
    EXPECT_EQ(levelwise_distance(a, b), Rational(1));
    EXPECT_EQ(levelwise_distance(a, a), Rational(0));
    EXPECT_THROW(levelwise_distance(a, make_fuzzy(s, 3, {3, 0, 0, 0, 0})), InputError);
}

TEST(Zadeh, MatchesSupOverPreimages) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 5, m = 1 + rng() % 4;
        const auto t = oracle::random_table(rng, n);
        const SystemMap sys(discrete_space(n), t);
        std::vector<std::uint8_t> levels(n);
        for (auto& l : levels) l = static_cast<std::uint8_t>(rng() % (m + 1));
        const auto a = make_fuzzy(sys.space(), m, levels);
        EXPECT_EQ(grades_of(zadeh_apply(sys, a)), oracle::zadeh(t, grades_of(a)));
    }
}

TEST(Zadeh, IndicatorsCommuteWithTheInducedMap) {
    const auto sys = make_multiply(5, 2);
    const LevelGrid grid(2);
    for (const auto& c : enumerate_compacts(sys.space()))
        for (std::size_t k = 1; k <= 2; ++k) {
            const auto lambda = grid.value(k);
            EXPECT_EQ(zadeh_apply(sys, embed_indicator(grid, lambda, c)),
                      embed_indicator(grid, lambda, induced_apply(sys, c)));
        }
    EXPECT_THROW(embed_indicator(grid, Rational(0), CompactSet::of(sys.space(), {1})), InputError);
    EXPECT_THROW(embed_indicator(grid, Rational(1), CompactSet::empty(sys.space())), InputError);
}

TEST(GFunction, ValidationAndXi) {
    const LevelGrid grid(4);
    EXPECT_THROW(GFunction(grid, {0, 1, 2, 3}), InputError);
    EXPECT_THROW(GFunction(grid, {1, 1, 2, 3, 4}), InputError);
    EXPECT_THROW(GFunction(grid, {0, 1, 2, 3, 3}), InputError);
    EXPECT_THROW(GFunction(grid, {0, 2, 1, 3, 4}), InputError);
    const GFunction g(grid, {0, 1, 1, 3, 4});
    // xi(x) = least y with g(y) >= x
    EXPECT_EQ(xi_of(g), (std::vector<std::uint8_t>{0, 1, 3, 3, 4}));
    EXPECT_EQ(xi_of(GFunction::identity(grid)), (std::vector<std::uint8_t>{0, 1, 2, 3, 4}));
}

TEST(GFunction, CutLemmaAgainstOracle) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 5, m = 1 + rng() % 4;
        const auto t = oracle::random_table(rng, n);
        const SystemMap sys(discrete_space(n), t);
        std::vector<std::uint8_t> table(m + 1);
        table[m] = static_cast<std::uint8_t>(m);
        for (std::size_t k = 1; k < m; ++k) table[k] = static_cast<std::uint8_t>(rng() % (m + 1));
        std::sort(table.begin(), table.end());
        const GFunction g{LevelGrid(m), table};
        std::vector<std::uint8_t> levels(n);
        for (auto& l : levels) l = static_cast<std::uint8_t>(rng() % (m + 1));
        auto a = make_fuzzy(sys.space(), m, levels);
        const auto xi = xi_of(g);
        const oracle::Grades g_vec(table.begin(), table.end());
        auto ref = grades_of(a);
        for (std::size_t step = 1; step <= 6; ++step) {
            a = g_fuzzify_apply(sys, g, a);
            ref = oracle::zadeh(t, ref, g_vec);
            ASSERT_EQ(grades_of(a), ref);
            for (std::size_t k = 1; k <= m; ++k) {
                std::size_t level = k;
                for (std::size_t i = 0; i < step; ++i) level = xi[level];
                // [(T_F^g)^n A]_k = T^n([A]_{xi^n(k)}); a zero level means the whole space
                const auto original = level == 0 ? oracle::Set{} : oracle::cut(grades_of(make_fuzzy(sys.space(), m, levels)), level);
                oracle::Set source = original;
                if (level == 0)
                    for (std::size_t x = 0; x < n; ++x) source.push_back(x);
                EXPECT_EQ(oracle::cut(ref, k), oracle::iterate_set(t, source, step));
            }
        }
    }
}

TEST(Piecewise, RoundTripAndMergedChains) {
    const auto s = circle_space(5);
    const auto a = make_fuzzy(s, 4, {4, 2, 0, 1, 2});
    const auto r = PiecewiseRepresentation::of(a);
    EXPECT_EQ(r.thresholds, (std::vector<Rational>{Rational(1, 4), Rational(1, 2), Rational(1)}));
    EXPECT_EQ(r.reconstruct(LevelGrid(4)), a);
    EXPECT_EQ(r.cut(Rational(3, 4)), a.cut_at_level(4));
    EXPECT_TRUE(r.cut(Rational(1)).test(0));
    const auto b = make_fuzzy(s, 4, {0, 3, 3, 0, 0});
    const auto merged = merge_chains(r, PiecewiseRepresentation::of(b));
    EXPECT_EQ(merged.thresholds.size(), 4u);
    for (std::size_t k = 1; k <= 4; ++k) {
        const auto [ca, cb] = merged.lookup(Rational(static_cast<std::int64_t>(k), 4), 5);
        EXPECT_EQ(ca, a.cut_at_level(k));
        EXPECT_EQ(cb, b.cut_at_level(k));
    }
}

TEST(FuzzyLift, SliceSizesAndInvariance) {
    const auto sys = make_rotation(3, 1);
    const LevelGrid grid(2);
    // (m+1)^n states; height exactly 1 means some point has level 2
    EXPECT_EQ(fuzzy_lift_system(sys, grid, FuzzyConstraint::all()).size(), 27u);
    EXPECT_EQ(fuzzy_lift_system(sys, grid, FuzzyConstraint::height_equal(2)).size(), 27u - 8u);
    EXPECT_EQ(fuzzy_lift_system(sys, grid, FuzzyConstraint::height_equal(1)).size(), 7u);
    EXPECT_EQ(fuzzy_lift_system(sys, grid, FuzzyConstraint::nonempty()).size(), 26u);
    // g can push a set above its height, leaving the slice
    const GFunction g(grid, {0, 2, 2});
    EXPECT_THROW(fuzzy_lift_system(sys, grid, FuzzyConstraint::height_equal(1), g), InvarianceError);
}

TEST(FuzzyLift, TableAndDistancesMatchOracles) {
    for (const auto& sys : {make_multiply(4, 2), make_named_grid_map("half", 3), make_reflection(3)}) {
        const LevelGrid grid(2);
        const auto lift = fuzzy_lift_system(sys, grid, FuzzyConstraint::all());
        const auto states = enumerate_fuzzy(sys.space(), grid, FuzzyConstraint::all());
        ASSERT_EQ(lift.size(), states.size());
        const auto d = oracle::distances(sys.space());
        for (std::size_t i = 0; i < states.size(); ++i) {
            EXPECT_EQ(*fuzzy_lift_index(lift, states[i]), i);
            EXPECT_EQ(lift(i), *fuzzy_lift_index(lift, zadeh_apply(sys, states[i])));
            for (std::size_t j = 0; j < states.size(); ++j)
                EXPECT_EQ(lift.space().distance(i, j),
                          oracle::levelwise(d, grades_of(states[i]), grades_of(states[j]), 2));
        }
    }
}

TEST(FuzzyLift, LevelwiseMetricOnHeightOneSlice) {
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t m = 1; m <= 2; ++m) {
            const auto lift = fuzzy_lift_system(make_rotation(n, 1), LevelGrid(m), FuzzyConstraint::height_equal(m));
            EXPECT_TRUE(validate_metric(lift.space()).empty()) << n << " " << m;
        }
}

TEST(FuzzyLift, StateBound) {
    Limits tight;
    tight.max_fuzzy_states = 26;
    EXPECT_THROW(fuzzy_lift_system(make_rotation(3, 1), LevelGrid(2), FuzzyConstraint::all(), std::nullopt, tight),
                 BoundError);
}
