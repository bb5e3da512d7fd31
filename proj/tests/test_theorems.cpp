#include <gtest/gtest.h>

#include "fuzzdyn/fuzzdyn.hpp"

using namespace fuzzdyn;

namespace {

TheoremConfig config(AnySystem sys, std::size_t m = 1) {
    TheoremConfig c;
    c.system = std::move(sys);
    c.m = m;
    return c;
}

std::string failures(const EquivalenceReport& r) {
    std::string s = r.theorem + " on " + r.system + ": " + r.detail;
    for (const auto& it : r.items) s += "\n  " + it.item + " " + describe(it.verdict);
    return s;
}

bool all_items(const EquivalenceReport& r, Status s) {
    for (const auto& it : r.items)
        if (it.in_equivalence && it.verdict.status != s) return false;
    return true;
}

}  // namespace

TEST(Theorems, EveryTheoremIsConsistentOnTheSmallCatalog) {
    for (const auto& e : theorem_entries())
        for (const auto& sys : small_catalog()) {
            if (e.name == "mild-mixing" && sys.size() > 4) continue;
            const auto r = verify_theorem(e.name, config(sys));
            EXPECT_TRUE(r.consistent) << failures(r);
            EXPECT_FALSE(r.red_alert) << failures(r);
            EXPECT_EQ(r.matrix.size(), static_cast<std::size_t>(std::count_if(
                                           r.items.begin(), r.items.end(), [](const auto& i) { return i.in_equivalence; })));
        }
}

TEST(Theorems, FinerGridOnSmallSystems) {
    for (const auto& id : {"transitivity", "mixing", "devaney", "uniform-rigidity", "proximality", "conjugacy"})
        for (const auto& sys : {make_rotation(3, 1), make_multiply(4, 2), make_constant(3), make_reflection(3)}) {
            const auto r = verify_theorem(id, config(sys, 2));
            EXPECT_TRUE(r.consistent) << failures(r);
        }
}

TEST(Theorems, ExpectedOutcomes) {
    // a rotation of two points is transitive but not weakly mixing, so every item fails
    const auto rot = verify_theorem("transitivity", config(make_rotation(2, 1)));
    EXPECT_TRUE(rot.consistent);
    EXPECT_TRUE(all_items(rot, Status::fails)) << failures(rot);
    const auto point = verify_theorem("mixing", config(make_point(), 2));
    EXPECT_TRUE(all_items(point, Status::holds)) << failures(point);
    const auto half = verify_theorem("proximality", config(make_named_grid_map("half", 8)));
    EXPECT_TRUE(half.consistent) << failures(half);
    const auto rigid = verify_theorem("uniform-rigidity", config(make_rotation(5, 2)));
    EXPECT_TRUE(all_items(rigid, Status::holds)) << failures(rigid);
    const auto equi = verify_theorem("equicontinuity", config(make_reflection(5)));
    EXPECT_TRUE(all_items(equi, Status::holds)) << failures(equi);
}

TEST(Theorems, SymbolicSystems) {
    for (const auto& id : {"transitivity", "mixing", "devaney", "periodic-density", "a-transitivity"}) {
        const auto full = verify_theorem(id, config(SymbolicSystem::full_shift(2, 2)));
        EXPECT_TRUE(full.consistent) << failures(full);
        EXPECT_TRUE(all_items(full, Status::holds)) << failures(full);
    }
    const auto flip = verify_theorem(
        "transitivity", config(SymbolicSystem({"a", "b"}, {{false, true}, {true, false}}, 2)));
    EXPECT_TRUE(flip.consistent) << failures(flip);
    EXPECT_TRUE(all_items(flip, Status::fails)) << failures(flip);
    EXPECT_THROW(verify_theorem("equicontinuity", config(SymbolicSystem::full_shift(2, 2))), InputError);
}

TEST(Theorems, CutLemmaWithNonlinearG) {
    auto c = config(make_multiply(9, 2), 4);
    c.g = GFunction(LevelGrid(4), {0, 1, 1, 3, 4});
    c.samples = 20;
    const auto r = verify_theorem("cut-lemma", c);
    EXPECT_TRUE(r.consistent) << failures(r);
    EXPECT_FALSE(r.table.empty());
}

TEST(Theorems, FamiliesAndExponents) {
    for (const auto& fam : {"thick", "syndetic", "cofinite", "inf", "ip"}) {
        auto c = config(make_rotation(3, 1));
        c.family = parse_family(fam);
        const auto r = verify_theorem("f-mixing", c);
        EXPECT_TRUE(r.consistent) << fam << "\n" << failures(r);
    }
    auto c = config(make_point());
    c.a = {1, 2, 3};
    EXPECT_TRUE(all_items(verify_theorem("a-transitivity", c), Status::holds));
}

TEST(Theorems, RejectsUnknownInput) {
    EXPECT_THROW(verify_theorem("chaos", config(make_point())), InputError);
    EXPECT_THROW(verify_theorem("mixing", config(make_point(), 0)), InputError);
    auto c = config(make_rotation(3, 1));
    c.epsilon = Rational(0);
    EXPECT_THROW(verify_theorem("equicontinuity", c), InputError);
}

TEST(Theorems, DefaultEpsilonIsHalfTheLeastDistance) {
    EXPECT_EQ(default_epsilon(circle_space(12)), Rational(1, 24));
    EXPECT_EQ(default_epsilon(interval_grid_space(4)), Rational(1, 8));
}

TEST(Theorems, ComposeLevels) {
    const std::vector<std::uint8_t> xi{0, 1, 3, 3, 4};
    EXPECT_EQ(detail::compose_levels(xi, 0), (std::vector<std::uint8_t>{0, 1, 2, 3, 4}));
    EXPECT_EQ(detail::compose_levels(xi, 2), xi);
}

TEST(Theorems, ExactDisagreementRaisesRedAlert) {
    EquivalenceReport r;
    Verdict yes, no;
    yes.status = Status::holds;
    no.status = Status::fails;
    r.items = {{"(1)", "a", yes}, {"(2)", "b", no}};
    detail::settle(r);
    EXPECT_TRUE(r.red_alert);
    EXPECT_EQ(r.matrix, (std::vector<std::string>{"=x", "x="}));

    EquivalenceReport soft;
    no.exactness = Exactness::horizon;
    soft.items = {{"(1)", "a", yes}, {"(2)", "b", no}};
    detail::settle(soft);
    EXPECT_FALSE(soft.consistent);
    EXPECT_FALSE(soft.red_alert);

    EquivalenceReport side;
    side.items = {{"(1)", "a", yes}, {"(r)", "c", yes, false, false}};
    detail::settle(side);
    EXPECT_TRUE(side.red_alert);
}
