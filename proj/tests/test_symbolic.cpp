#include <gtest/gtest.h>

#include "fuzzdyn/fuzzdyn.hpp"
#include "oracles.hpp"

using namespace fuzzdyn;

namespace {

using Word = SymbolicSystem::Word;

SymbolicSystem golden_mean(std::size_t k) { return SymbolicSystem({"0", "1"}, {{true, true}, {true, false}}, k); }
SymbolicSystem flip(std::size_t k) { return SymbolicSystem({"a", "b"}, {{false, true}, {true, false}}, k); }

// n is a return time iff some allowed word of length max(|u|, n+|v|) starts
// with u and reads v from position n.
bool oracle_return(const SymbolicSystem& s, const Word& u, const Word& v, std::size_t n) {
    const std::size_t len = std::max(u.size(), n + v.size());
    for (const auto& w : s.words(len)) {
        bool ok = std::equal(u.begin(), u.end(), w.begin());
        for (std::size_t j = 0; ok && j < v.size(); ++j) ok = w[n + j] == v[j];
        if (ok) return true;
    }
    return false;
}

}  // namespace

TEST(Symbolic, Validation) {
    EXPECT_THROW(SymbolicSystem({}, {}, 2), InputError);
    EXPECT_THROW(SymbolicSystem::full_shift(2, 0), InputError);
    EXPECT_THROW(SymbolicSystem::full_shift(2, 13), InputError);
    EXPECT_THROW(SymbolicSystem({"a", "b"}, {{true, true}}, 2), InputError);
    // b has no successor
    EXPECT_THROW(SymbolicSystem({"a", "b"}, {{true, true}, {false, false}}, 2), InputError);
}

TEST(Symbolic, WordCounts) {
    EXPECT_EQ(SymbolicSystem::full_shift(3, 2).words(3).size(), 27u);
    // Fibonacci counts for the golden mean shift
    const auto g = golden_mean(6);
    std::size_t a = 2, b = 3;
    EXPECT_EQ(g.words(1).size(), a);
    EXPECT_EQ(g.words(2).size(), b);
    for (std::size_t len = 3; len <= 8; ++len) {
        const auto c = a + b;
        EXPECT_EQ(g.words(len).size(), c) << len;
        a = b, b = c;
    }
    EXPECT_EQ(flip(4).words(4).size(), 2u);
}

TEST(Symbolic, PrefixMetric) {
    EXPECT_EQ(SymbolicSystem::prefix_distance({0, 1, 1}, {1, 1, 1}), Rational(1));
    EXPECT_EQ(SymbolicSystem::prefix_distance({0, 1, 1}, {0, 0, 1}), Rational(1, 2));
    EXPECT_EQ(SymbolicSystem::prefix_distance({0, 1, 1}, {0, 1, 0}), Rational(1, 4));
    EXPECT_EQ(SymbolicSystem::prefix_distance({0, 1, 1}, {0, 1, 1}), Rational(0));
    for (const auto& s : {SymbolicSystem::full_shift(2, 3), golden_mean(4), flip(3)})
        EXPECT_TRUE(validate_metric(s.word_space()).empty());
}

TEST(Symbolic, CylinderReturnsMatchWordEnumeration) {
    for (const auto& s : {SymbolicSystem::full_shift(2, 4), golden_mean(4), flip(4),
                          SymbolicSystem({"a", "b", "c"}, {{false, true, false}, {false, false, true}, {true, true, false}}, 3)}) {
        std::vector<Word> basis;
        for (std::size_t len = 1; len <= 2; ++len)
            for (const auto& w : s.words(len)) basis.push_back(w);
        for (const auto& u : basis)
            for (const auto& v : basis) {
                const auto r = s.cylinder_returns(u, v);
                for (std::size_t n = 0; n < 9; ++n)
                    EXPECT_EQ(*r.at(n), oracle_return(s, u, v, n)) << s.label(u) << " " << s.label(v) << " " << n;
            }
    }
}

TEST(Symbolic, CylinderReturnsRejectForbiddenWords) {
    EXPECT_THROW(golden_mean(3).cylinder_returns({1, 1}, {0}), InputError);
    EXPECT_THROW(golden_mean(3).cylinder_returns({}, {0}), InputError);
}

TEST(Symbolic, BaseDynamics) {
    const auto full = cylinder_model(SymbolicSystem::full_shift(2, 3), 3);
    EXPECT_TRUE(is_mixing(full).holds());
    EXPECT_EQ(full.exactness, Exactness::resolution);
    EXPECT_TRUE(is_mixing(cylinder_model(golden_mean(3), 3)).holds());
    const auto f = cylinder_model(flip(3), 2);
    EXPECT_TRUE(is_transitive(f).holds());
    EXPECT_FALSE(is_weakly_mixing(f).holds());
    EXPECT_FALSE(is_weakly_mixing(f, WeakMixingMethod::lemma22).holds());
    EXPECT_TRUE(is_periodically_dense(f).holds());
    EXPECT_TRUE(is_devaney_chaotic(f).holds());
    EXPECT_THROW(cylinder_model(flip(3), 4), InputError);
}

TEST(Symbolic, HyperspaceAndFuzzyModels) {
    const auto full = SymbolicSystem::full_shift(2, 2);
    EXPECT_TRUE(is_mixing(vietoris_model(full, 2)).holds());
    EXPECT_TRUE(is_weakly_mixing(vietoris_model(full, 2)).holds());
    EXPECT_EQ(vietoris_model(full, 2).size, 15u);
    // the period-two flip: its hyperspace is not even transitive
    EXPECT_FALSE(is_transitive(vietoris_model(flip(2), 2)).holds());
    const LevelGrid grid(2);
    for (std::size_t h = 1; h <= 2; ++h) {
        EXPECT_TRUE(is_weakly_mixing(fuzzy_symbolic_model(full, 2, grid, h)).holds());
        EXPECT_FALSE(is_transitive(fuzzy_symbolic_model(flip(2), 2, grid, h)).holds());
    }
    // height-exactly-h classes: (h+1)^w - h^w
    EXPECT_EQ(fuzzy_symbolic_model(full, 2, grid, 2).size, 81u - 16u);
    EXPECT_THROW(fuzzy_symbolic_model(full, 2, grid, 3), InputError);
    EXPECT_THROW(vietoris_model(SymbolicSystem::full_shift(5, 2), 2), BoundError);
}
