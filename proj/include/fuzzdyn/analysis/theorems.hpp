#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzdyn/analysis/metric.hpp"
#include "fuzzdyn/analysis/recurrence.hpp"
#include "fuzzdyn/analysis/returns.hpp"
#include "fuzzdyn/analysis/transitivity.hpp"
#include "fuzzdyn/analysis/verdict.hpp"
#include "fuzzdyn/catalog.hpp"
#include "fuzzdyn/fuzzy.hpp"
#include "fuzzdyn/hyperspace.hpp"

namespace fuzzdyn {

struct TheoremConfig {
    AnySystem system = make_point();
    std::size_t m = 2;
    std::optional<GFunction> g;           // cut-lemma only; identity when unset
    std::optional<Rational> epsilon;      // default: half the least positive distance
    std::vector<std::size_t> a{1, 2};
    FamilyClassifier family = FamilyClassifier::thick();
    std::size_t cylinder_length = 2;      // symbolic systems
    std::size_t samples = 40;             // cut-lemma
    std::size_t max_n = 10;               // cut-lemma
    std::uint64_t seed = 1;
    Limits limits = default_limits();
    std::optional<std::vector<ReturnModel>> catalog;  // mild mixing partners
};

struct ReportItem {
    std::string item;
    std::string statement;
    Verdict verdict;
    bool in_equivalence = true;
    std::optional<bool> expected = std::nullopt;
};

struct EquivalenceReport {
    std::string theorem;
    std::string system;
    std::vector<ReportItem> items;
    // matrix[i][j] over the equivalence items: '=' agree, 'x' disagree, '?' undecided
    std::vector<std::string> matrix;
    bool consistent = true;
    bool red_alert = false;
    std::string detail;
    std::vector<std::string> table_header;
    std::vector<std::vector<std::string>> table;
};

inline std::string system_summary(const AnySystem& sys) {
    if (const auto* f = std::get_if<SystemMap>(&sys)) return f->provenance().summary();
    const auto& s = std::get<SymbolicSystem>(sys);
    return (s.is_full_shift() ? "fullshift:symbols=" : "sft:symbols=") + std::to_string(s.alphabet().size()) +
           ",k=" + std::to_string(s.resolution());
}

/// Half the least positive distance of the space, or 1 on a single point.
inline Rational default_epsilon(const MetricSpace& space) {
    for (const auto& d : space.scale())
        if (d > 0) return d / 2;
    return Rational(1);
}

namespace detail {

inline void require_pairs(const ReturnModel& model, const Limits& limits) {
    if (model.size * model.size > limits.max_basis_pairs)
        throw BoundError("max_basis_pairs", model.level + " model has " + std::to_string(model.size) +
                                                " basis opens; pairwise checks exceed the bound");
}

inline std::string level_name(const FuzzyConstraint& c, const LevelGrid& grid) {
    switch (c.kind) {
        case FuzzyConstraint::Kind::all: return "fuzzy(all)";
        case FuzzyConstraint::Kind::height_equal: return "fuzzy(=" + to_string(grid.value(c.level)) + ")";
        case FuzzyConstraint::Kind::height_at_least:
            return c.level == 1 ? "fuzzy(F_0)" : "fuzzy(>=" + to_string(grid.value(c.level)) + ")";
    }
    return "fuzzy";
}

/// Lifts of one finite system, built on first use.
class Lifts {
public:
    Lifts(const SystemMap& base, const LevelGrid& grid, const Limits& limits)
        : base_(base), grid_(grid), limits_(limits) {}

    const SystemMap& base() const { return base_; }
    const LevelGrid& grid() const { return grid_; }

    const SystemMap& hyper() {
        if (!hyper_) hyper_ = lift_system(base_, limits_);
        return *hyper_;
    }
    const SystemMap& fuzzy(const FuzzyConstraint& c) {
        const auto key = std::make_pair(static_cast<int>(c.kind), c.level);
        auto it = fuzzy_.find(key);
        if (it == fuzzy_.end()) it = fuzzy_.emplace(key, fuzzy_lift_system(base_, grid_, c, std::nullopt, limits_)).first;
        return it->second;
    }

    ReturnModel base_model() { return checked(finite_model(base_, "base", std::nullopt, limits_)); }
    ReturnModel hyper_model() { return checked(finite_model(hyper(), "hyperspace", std::nullopt, limits_)); }
    ReturnModel fuzzy_model(const FuzzyConstraint& c) {
        return checked(finite_model(fuzzy(c), level_name(c, grid_), std::nullopt, limits_));
    }

private:
    ReturnModel checked(ReturnModel m) const {
        require_pairs(m, limits_);
        return m;
    }

    SystemMap base_;
    LevelGrid grid_;
    Limits limits_;
    std::optional<SystemMap> hyper_;
    std::map<std::pair<int, std::size_t>, SystemMap> fuzzy_;
};

/// Combine per-level verdicts into "for all" (every part holds) or
/// "exists" (some part holds).
inline Verdict combine_levels(const std::string& property, const std::string& level,
                              const std::vector<Verdict>& parts, bool universal) {
    Verdict v;
    v.property = property;
    v.level = level;
    std::size_t holding = 0, failing = 0;
    for (const auto& p : parts) {
        v.exactness = weaker(v.exactness, p.exactness);
        v.horizon = std::max(v.horizon, p.horizon);
        holding += p.holds();
        failing += p.fails();
        v.with(p.level, to_string(p.status));
    }
    if (universal) {
        v.status = failing ? Status::fails : holding == parts.size() ? Status::holds : Status::inconclusive;
    } else {
        v.status = holding ? Status::holds : failing == parts.size() ? Status::fails : Status::inconclusive;
    }
    if (v.fails() || (!universal && v.holds())) {
        // attach the first deciding part's witnesses
        for (const auto& p : parts)
            if (p.status == v.status) {
                for (const auto& [k, w] : p.witnesses) v.with(p.level + ":" + k, w);
                break;
            }
    }
    return v;
}

/// Fill in the agreement matrix, consistency and the red-alert flag.
inline void settle(EquivalenceReport& r) {
    std::vector<const ReportItem*> eq;
    for (const auto& it : r.items)
        if (it.in_equivalence) eq.push_back(&it);
    const auto decided = [](const Verdict& v) { return v.status != Status::inconclusive; };
    r.matrix.assign(eq.size(), std::string(eq.size(), '?'));
    for (std::size_t i = 0; i < eq.size(); ++i)
        for (std::size_t j = 0; j < eq.size(); ++j) {
            const auto& a = eq[i]->verdict;
            const auto& b = eq[j]->verdict;
            if (!decided(a) || !decided(b)) continue;
            const bool same = a.status == b.status;
            r.matrix[i][j] = same ? '=' : 'x';
            if (same) continue;
            r.consistent = false;
            if (a.exactness == Exactness::exact && b.exactness == Exactness::exact && !r.red_alert) {
                r.red_alert = true;
                r.detail = "items " + eq[i]->item + " and " + eq[j]->item + " disagree in exact mode";
            }
        }
    for (const auto& it : r.items) {
        if (!it.expected || !decided(it.verdict)) continue;
        if (it.verdict.holds() == *it.expected) continue;
        r.consistent = false;
        if (it.verdict.exactness == Exactness::exact && !r.red_alert) {
            r.red_alert = true;
            r.detail = "item " + it.item + " contradicts its expected value in exact mode";
        }
    }
    if (r.detail.empty()) r.detail = r.consistent ? "all decided items agree" : "disagreement outside exact mode";
}

/// Per-level models of a system: finite lifts or symbolic resolutions.
struct Models {
    std::function<ReturnModel()> base;
    std::function<ReturnModel()> hyper;
    std::function<ReturnModel(std::size_t)> fuzzy_equal;  // by grid level
    std::size_t m = 1;
};

inline Models models_for(const TheoremConfig& cfg, std::shared_ptr<Lifts> lifts) {
    Models out;
    out.m = cfg.m;
    if (lifts) {
        out.base = [lifts] { return lifts->base_model(); };
        out.hyper = [lifts] { return lifts->hyper_model(); };
        out.fuzzy_equal = [lifts](std::size_t k) { return lifts->fuzzy_model(FuzzyConstraint::height_equal(k)); };
        return out;
    }
    const auto sym = std::get<SymbolicSystem>(cfg.system);
    const std::size_t k = cfg.cylinder_length;
    const LevelGrid grid(cfg.m);
    const Limits limits = cfg.limits;
    out.base = [sym, k] { return cylinder_model(sym, k); };
    out.hyper = [sym, k, limits] { return vietoris_model(sym, k, limits); };
    out.fuzzy_equal = [sym, k, grid, limits](std::size_t level) {
        return fuzzy_symbolic_model(sym, k, grid, level, limits);
    };
    return out;
}

inline std::vector<Verdict> per_level(const Models& models, const std::function<Verdict(const ReturnModel&)>& check) {
    std::vector<Verdict> out;
    for (std::size_t k = 1; k <= models.m; ++k) out.push_back(check(models.fuzzy_equal(k)));
    return out;
}

inline std::string forall_label() { return "fuzzy(=l) for all l"; }
inline std::string exists_label() { return "fuzzy(=l) for some l"; }

// ---------------------------------------------------------------------------
// Model-based theorems (finite and symbolic)
// ---------------------------------------------------------------------------

inline void theorem_transitivity(EquivalenceReport& r, const Models& mo) {
    const auto base = mo.base();
    const auto hyper = mo.hyper();
    r.items.push_back({"(1)", "T weakly mixing", is_weakly_mixing(base, WeakMixingMethod::product)});
    r.items.push_back({"(1')", "T weakly mixing, N(U,U) meets N(U,V)", is_weakly_mixing(base, WeakMixingMethod::lemma22)});
    r.items.push_back({"(2)", "T_K transitive", is_transitive(hyper)});
    r.items.push_back({"(3)", "T_K weakly mixing", is_weakly_mixing(hyper)});
    std::vector<Verdict> tr, wm;
    for (std::size_t k = 1; k <= mo.m; ++k) {
        const auto f = mo.fuzzy_equal(k);
        tr.push_back(is_transitive(f));
        wm.push_back(is_weakly_mixing(f));
    }
    r.items.push_back({"(4)", "T_F on F^{=l} transitive for all l", combine_levels("transitivity", forall_label(), tr, true)});
    r.items.push_back({"(5)", "T_F on F^{=l} weakly mixing for all l", combine_levels("weak-mixing", forall_label(), wm, true)});
}

inline void theorem_mixing(EquivalenceReport& r, const Models& mo) {
    r.items.push_back({"(1)", "T mixing", is_mixing(mo.base())});
    r.items.push_back({"(2)", "T_K mixing", is_mixing(mo.hyper())});
    for (std::size_t k = 1; k <= mo.m; ++k) {
        auto v = is_mixing(mo.fuzzy_equal(k));
        const auto item = "(3:" + to_string(Rational(static_cast<std::int64_t>(k), static_cast<std::int64_t>(mo.m))) + ")";
        r.items.push_back({item, "T_F on " + v.level + " mixing", std::move(v)});
    }
}

inline void theorem_f_mixing(EquivalenceReport& r, const Models& mo, const FamilyClassifier& family) {
    const auto hyper = mo.hyper();
    r.items.push_back({"(1)", "T F-mixing", is_F_mixing(mo.base(), family)});
    r.items.push_back({"(2)", "T_K F-transitive", is_F_transitive(hyper, family)});
    r.items.push_back({"(3)", "T_K F-mixing", is_F_mixing(hyper, family)});
    std::vector<Verdict> tr, mx;
    for (std::size_t k = 1; k <= mo.m; ++k) {
        const auto f = mo.fuzzy_equal(k);
        tr.push_back(is_F_transitive(f, family));
        mx.push_back(is_F_mixing(f, family));
    }
    r.items.push_back({"(4)", "T_F on F^{=l} F-transitive for all l", combine_levels("F-transitivity", forall_label(), tr, true)});
    r.items.push_back({"(5)", "T_F on F^{=l} F-mixing for all l", combine_levels("F-mixing", forall_label(), mx, true)});
    r.items.push_back({"(6)", "T_F on F^{=l} F-transitive for some l", combine_levels("F-transitivity", exists_label(), tr, false)});
    r.items.push_back({"(7)", "T_F on F^{=l} F-mixing for some l", combine_levels("F-mixing", exists_label(), mx, false)});
}

inline void theorem_devaney(EquivalenceReport& r, const Models& mo) {
    r.items.push_back({"(1)", "T_K Devaney chaotic", is_devaney_chaotic(mo.hyper())});
    const auto parts = per_level(mo, [](const ReturnModel& f) { return is_devaney_chaotic(f); });
    r.items.push_back({"(2)", "T_F on F^{=l} Devaney chaotic for all l", combine_levels("devaney", forall_label(), parts, true)});
    r.items.push_back({"(3)", "T_F on F^{=l} Devaney chaotic for some l", combine_levels("devaney", exists_label(), parts, false)});
}

inline void theorem_mild_mixing(EquivalenceReport& r, const Models& mo, const std::vector<ReturnModel>& catalog) {
    r.items.push_back({"(1)", "T mildly mixing", is_mildly_mixing_bounded(mo.base(), catalog)});
    r.items.push_back({"(2)", "T_K mildly mixing", is_mildly_mixing_bounded(mo.hyper(), catalog)});
    const auto parts = per_level(mo, [&](const ReturnModel& f) { return is_mildly_mixing_bounded(f, catalog); });
    r.items.push_back({"(3)", "T_F on F^{=l} mildly mixing for all l", combine_levels("mild-mixing", forall_label(), parts, true)});
    r.items.push_back({"(4)", "T_F on F^{=l} mildly mixing for some l", combine_levels("mild-mixing", exists_label(), parts, false)});
}

inline void theorem_a_transitivity(EquivalenceReport& r, const Models& mo, const std::vector<std::size_t>& a,
                                   const Limits& limits) {
    const auto base = mo.base();
    const auto wm = is_weakly_mixing(base);
    const auto at = is_a_transitive(base, a, limits);
    Verdict both;
    both.property = "weak-mixing+a-transitivity";
    both.level = base.level;
    both.exactness = weaker(wm.exactness, at.exactness);
    both.horizon = std::max(wm.horizon, at.horizon);
    both.status = wm.holds() && at.holds() ? Status::holds : (wm.fails() || at.fails()) ? Status::fails : Status::inconclusive;
    both.with("weak_mixing", to_string(wm.status)).with("a_transitive", to_string(at.status));
    for (const auto* part : {&wm, &at})
        if (part->fails()) both.witnesses.insert(both.witnesses.end(), part->witnesses.begin(), part->witnesses.end());
    r.items.push_back({"(1)", "T weakly mixing and a-transitive", both});
    r.items.push_back({"(2)", "T_K a-transitive", is_a_transitive(mo.hyper(), a, limits)});
    const auto parts = per_level(mo, [&](const ReturnModel& f) { return is_a_transitive(f, a, limits); });
    r.items.push_back({"(3)", "T_F on F^{=l} a-transitive for all l", combine_levels("a-transitivity", forall_label(), parts, true)});
    r.items.push_back({"(4)", "T_F on F^{=l} a-transitive for some l", combine_levels("a-transitivity", exists_label(), parts, false)});
}

inline void theorem_periodic_density(EquivalenceReport& r, const Models& mo) {
    r.items.push_back({"(0)", "T periodically dense", is_periodically_dense(mo.base()), false});
    r.items.push_back({"(1)", "T_K periodically dense", is_periodically_dense(mo.hyper())});
    const auto parts = per_level(mo, [](const ReturnModel& f) { return is_periodically_dense(f); });
    r.items.push_back({"(2)", "T_F on F^{=l} periodically dense for all l", combine_levels("periodic-density", forall_label(), parts, true)});
    r.items.push_back({"(3)", "T_F on F^{=l} periodically dense for some l", combine_levels("periodic-density", exists_label(), parts, false)});
}

// ---------------------------------------------------------------------------
// Metric theorems (finite only)
// ---------------------------------------------------------------------------

inline Verdict at_level(Verdict v, const std::string& level) {
    v.level = level;
    return v;
}

inline void theorem_equicontinuity(EquivalenceReport& r, Lifts& lifts, const Rational& eps, const Limits& limits) {
    const auto f0 = FuzzyConstraint::nonempty();
    r.items.push_back({"(1)", "T equicontinuous", at_level(equicontinuity_modulus(lifts.base(), eps, limits).verdict, "base")});
    r.items.push_back({"(2)", "T_K equicontinuous",
                       at_level(equicontinuity_modulus(lifts.hyper(), eps, limits).verdict, "hyperspace")});
    const auto& fz = lifts.fuzzy(f0);
    if (fz.size() * fz.size() > limits.max_basis_pairs)
        throw BoundError("max_basis_pairs", "F_0 lift of " + std::to_string(fz.size()) + " states is too large for a pair scan");
    r.items.push_back({"(3)", "T_F on F_0 equicontinuous",
                       at_level(equicontinuity_modulus(fz, eps, limits).verdict, level_name(f0, lifts.grid()))});
}

inline void theorem_uniform_rigidity(EquivalenceReport& r, Lifts& lifts, const Rational& eps, const Limits& limits) {
    const auto& grid = lifts.grid();
    std::vector<std::pair<std::string, UniformRigidity>> all;
    auto run = [&](const SystemMap& s, const std::string& level) {
        auto u = uniform_rigidity(s, eps, limits);
        u.verdict.level = level;
        all.emplace_back(level, u);
        return u.verdict;
    };
    r.items.push_back({"(1)", "T uniformly rigid", run(lifts.base(), "base")});
    r.items.push_back({"(2)", "T_K uniformly rigid", run(lifts.hyper(), "hyperspace")});
    r.items.push_back({"(3)", "T_F on F_0 uniformly rigid",
                       run(lifts.fuzzy(FuzzyConstraint::nonempty()), level_name(FuzzyConstraint::nonempty(), grid))});
    std::vector<Verdict> eq, ge;
    for (std::size_t k = 1; k <= grid.m; ++k) {
        eq.push_back(run(lifts.fuzzy(FuzzyConstraint::height_equal(k)), level_name(FuzzyConstraint::height_equal(k), grid)));
        const auto c = FuzzyConstraint::height_at_least(k);
        ge.push_back(run(lifts.fuzzy(c), k == 1 ? "fuzzy(>=" + to_string(grid.value(1)) + ")" : level_name(c, grid)));
    }
    r.items.push_back({"(4)", "T_F on F^{=l} uniformly rigid for all l", combine_levels("uniform-rigidity", forall_label(), eq, true)});
    r.items.push_back({"(5)", "T_F on F^{>=l} uniformly rigid for all l",
                       combine_levels("uniform-rigidity", "fuzzy(>=l) for all l", ge, true)});
    r.items.push_back({"(6)", "T_F on F^{=l} uniformly rigid for some l", combine_levels("uniform-rigidity", exists_label(), eq, false)});
    r.items.push_back({"(7)", "T_F on F^{>=l} uniformly rigid for some l",
                       combine_levels("uniform-rigidity", "fuzzy(>=l) for some l", ge, false)});

    Verdict same;
    same.property = "rigidity-witnesses";
    same.level = "all";
    same.status = Status::holds;
    const auto& ref = all.front().second.witnesses;
    same.with("witnesses", detail::set_label(ref));
    for (const auto& [level, u] : all)
        if (!(u.witnesses.normalized() == ref.normalized())) {
            same.status = Status::fails;
            same.with("differs_at", level).with(level, detail::set_label(u.witnesses));
            break;
        }
    r.items.push_back({"(w)", "witness sets n coincide on every level", same, false, true});
    r.table_header = {"level", "least_n", "witnesses"};
    for (const auto& [level, u] : all)
        r.table.push_back({level, u.least ? std::to_string(*u.least) : "none", detail::set_label(u.witnesses)});
}

inline void theorem_proximality(EquivalenceReport& r, Lifts& lifts, const Limits& limits) {
    const auto& grid = lifts.grid();
    r.items.push_back({"(0)", "T proximal", is_proximal(lifts.base(), limits), false});
    r.items.push_back({"(1)", "T_K proximal", at_level(is_proximal(lifts.hyper(), limits), "hyperspace")});
    r.items.push_back({"(2)", "diam T^n(X) -> 0", diam_vanishes(lifts.base(), limits)});
    std::vector<Verdict> parts;
    for (std::size_t k = 1; k <= grid.m; ++k) {
        const auto c = FuzzyConstraint::height_equal(k);
        parts.push_back(at_level(is_proximal(lifts.fuzzy(c), limits), level_name(c, grid)));
    }
    r.items.push_back({"(3)", "T_F on F^{=l} proximal for all l", combine_levels("proximality", forall_label(), parts, true)});
    const auto f0 = FuzzyConstraint::nonempty();
    std::optional<bool> expected;
    // with m = 1 every nonempty set has height 1 and F_0 is F^{=1}
    if (lifts.base().size() >= 2 && grid.m >= 2) expected = false;
    r.items.push_back({"(r)", "T_F on F_0 proximal", at_level(is_proximal(lifts.fuzzy(f0), limits), level_name(f0, grid)),
                       false, expected});
    const auto decay = diam_decay(lifts.base(), eventual_period(lifts.base(), limits).horizon() + 1);
    r.table_header = {"n", "diam"};
    for (std::size_t n = 0; n < decay.size(); ++n) r.table.push_back({std::to_string(n), to_string(decay[n])});
}

inline void theorem_height_invariance(EquivalenceReport& r, Lifts& lifts, const Limits& limits) {
    const auto& base = lifts.base();
    const auto& grid = lifts.grid();
    const auto states = enumerate_fuzzy(base.space(), grid, FuzzyConstraint::nonempty(), limits);

    Verdict keep;
    keep.property = "height-preservation";
    keep.level = "fuzzy(all)";
    keep.status = Status::holds;
    for (const auto& a : states) {
        const auto b = zadeh_apply(base, a);
        if (b.height_level() != a.height_level()) {
            keep.status = Status::fails;
            keep.with("A", a.label()).with("T_F(A)", b.label());
            break;
        }
    }
    r.items.push_back({"(1)", "T_F preserves height", keep, false, true});

    const auto& lift = lifts.fuzzy(FuzzyConstraint::nonempty());
    if (lift.size() * lift.size() > limits.max_basis_pairs)
        throw BoundError("max_basis_pairs", "F_0 lift of " + std::to_string(lift.size()) + " states is too large for a pair scan");
    Verdict gap;
    gap.property = "height-obstruction";
    gap.level = "fuzzy(F_0)";
    gap.status = Status::holds;
    const auto diam = lift.space().diameter_rank();
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < states.size() && gap.holds(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            if (states[i].height_level() == states[j].height_level()) continue;
            ++pairs;
            if (lift.space().rank(i, j) != diam) {
                gap.status = Status::fails;
                gap.with("A", states[i].label()).with("B", states[j].label());
                gap.with("distance", to_string(lift.space().distance(i, j)));
                break;
            }
        }
    gap.with("pairs", std::to_string(pairs)).with("diam", to_string(base.space().diameter()));
    gap.note = "with height preserved, the distance is diam(X) along the whole orbit";
    r.items.push_back({"(2)", "sets of different height are diam(X) apart", gap, false, true});

    std::optional<bool> expected;
    if (base.size() >= 2 && lifts.grid().m >= 2) expected = false;
    auto model = finite_model(lift, "fuzzy(F_0)", std::nullopt, limits);
    require_pairs(model, limits);
    r.items.push_back({"(3)", "T_F on F_0 transitive", is_transitive(model), false, expected});
}

inline std::vector<std::uint8_t> compose_levels(const std::vector<std::uint8_t>& f, std::size_t times) {
    std::vector<std::uint8_t> out(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) out[k] = static_cast<std::uint8_t>(k);
    for (std::size_t t = 0; t < times; ++t)
        for (auto& v : out) v = f[v];
    return out;
}

inline void theorem_cut_lemma(EquivalenceReport& r, const SystemMap& base, const LevelGrid& grid,
                              const GFunction& g, std::size_t samples, std::size_t max_n, std::uint64_t seed) {
    if (!(g.grid() == grid)) throw InputError("g uses grid m=" + std::to_string(g.grid().m) + ", expected m=" + std::to_string(grid.m));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> level(0, static_cast<int>(grid.m));
    std::vector<FuzzySet> sets;
    for (std::size_t s = 0; s < samples; ++s) {
        FuzzySet::Levels l(base.size());
        for (auto& x : l) x = static_cast<std::uint8_t>(level(rng));
        sets.emplace_back(base.space(), grid, std::move(l));
    }
    const auto xi = xi_of(g);
    r.table_header = {"n", "alpha", "xi^n(alpha)", "equal", "samples"};
    std::vector<FuzzySet> current = sets;
    for (std::size_t n = 1; n <= max_n; ++n) {
        for (auto& a : current) a = g_fuzzify_apply(base, g, a);
        const auto xin = compose_levels(xi, n);
        const auto power = iterate(base, n);
        Verdict v;
        v.property = "cut-commutation";
        v.level = "fuzzy(all)";
        v.status = Status::holds;
        v.with("n", std::to_string(n));
        for (std::size_t k = 1; k <= grid.m; ++k) {
            std::size_t equal = 0;
            for (std::size_t s = 0; s < sets.size(); ++s) {
                const auto lhs = current[s].cut_at_level(k);
                const auto rhs = power.image(sets[s].cut_at_level(xin[k]));
                if (lhs == rhs) {
                    ++equal;
                } else if (v.holds()) {
                    v.status = Status::fails;
                    v.with("A", sets[s].label()).with("alpha", to_string(grid.value(k)));
                }
            }
            r.table.push_back({std::to_string(n), to_string(grid.value(k)), to_string(grid.value(xin[k])),
                               std::to_string(equal), std::to_string(sets.size())});
        }
        v.note = "over " + std::to_string(sets.size()) + " sampled fuzzy sets";
        r.items.push_back({"(n=" + std::to_string(n) + ")", "cut identity at n = " + std::to_string(n), v, false, true});
    }
}

inline void theorem_conjugacy(EquivalenceReport& r, Lifts& lifts) {
    const auto& grid = lifts.grid();
    const auto& base = lifts.base();
    const auto& hyper = lifts.hyper();
    for (std::size_t k = 1; k <= grid.m; ++k) {
        const auto lambda = grid.value(k);
        const auto& fz = lifts.fuzzy(FuzzyConstraint::height_equal(k));
        std::vector<std::size_t> embed(hyper.size());
        for (std::size_t i = 0; i < hyper.size(); ++i) {
            PointSet members(base.size());
            for (std::size_t x = 0; x < base.size(); ++x)
                if ((i + 1) >> x & 1) members.set(x);
            const auto idx = fuzzy_lift_index(fz, embed_indicator(grid, lambda, CompactSet(base.space(), members)));
            if (!idx) throw InputError("indicator missing from the fuzzy lift");
            embed[i] = *idx;
        }
        Verdict v;
        v.property = "conjugacy";
        v.level = level_name(FuzzyConstraint::height_equal(k), grid);
        v.status = Status::holds;
        for (std::size_t i = 0; i < hyper.size() && v.holds(); ++i) {
            if (fz(embed[i]) != embed[hyper(i)]) {
                v.status = Status::fails;
                v.with("A", hyper.space().label(i)).with("failure", "not equivariant");
                break;
            }
            for (std::size_t j = i + 1; j < hyper.size(); ++j)
                if (hyper.space().distance(i, j) != fz.space().distance(embed[i], embed[j])) {
                    v.status = Status::fails;
                    v.with("A", hyper.space().label(i)).with("B", hyper.space().label(j));
                    v.with("d_H", to_string(hyper.space().distance(i, j)));
                    v.with("d_inf", to_string(fz.space().distance(embed[i], embed[j])));
                    break;
                }
        }
        v.with("sets", std::to_string(hyper.size()));
        r.items.push_back({"(l=" + to_string(lambda) + ")", "A -> l*chi_A is an isometric conjugacy", v, false, true});
    }
}

}  // namespace detail

/// Evaluate every item of a theorem's equivalence list on one system and
/// cross-check them. Finite systems are lifted exhaustively; symbolic
/// systems are read through cylinders, prefix classes and grade classes.
inline EquivalenceReport verify_theorem(const std::string& id, const TheoremConfig& cfg) {
    if (!known_theorem(id)) throw InputError("unknown theorem id '" + id + "'");
    if (cfg.m == 0 || cfg.m > 255) throw InputError("grid size m must lie in [1, 255]");
    EquivalenceReport r;
    r.theorem = id;
    r.system = system_summary(cfg.system);
    const LevelGrid grid(cfg.m);

    std::shared_ptr<detail::Lifts> lifts;
    if (const auto* f = std::get_if<SystemMap>(&cfg.system)) lifts = std::make_shared<detail::Lifts>(*f, grid, cfg.limits);
    const auto models = detail::models_for(cfg, lifts);

    if (id == "transitivity") {
        detail::theorem_transitivity(r, models);
    } else if (id == "mixing") {
        detail::theorem_mixing(r, models);
    } else if (id == "f-mixing") {
        detail::theorem_f_mixing(r, models, cfg.family);
    } else if (id == "devaney") {
        detail::theorem_devaney(r, models);
    } else if (id == "mild-mixing") {
        detail::theorem_mild_mixing(r, models, cfg.catalog ? *cfg.catalog : default_transitive_catalog());
    } else if (id == "a-transitivity") {
        detail::theorem_a_transitivity(r, models, cfg.a, cfg.limits);
    } else if (id == "periodic-density") {
        detail::theorem_periodic_density(r, models);
    } else {
        if (!lifts) throw InputError("theorem '" + id + "' needs a finite system");
        const auto eps = cfg.epsilon.value_or(default_epsilon(lifts->base().space()));
        if (eps <= 0) throw InputError("epsilon must be positive");
        if (id == "equicontinuity") {
            detail::theorem_equicontinuity(r, *lifts, eps, cfg.limits);
        } else if (id == "uniform-rigidity") {
            detail::theorem_uniform_rigidity(r, *lifts, eps, cfg.limits);
        } else if (id == "proximality") {
            detail::theorem_proximality(r, *lifts, cfg.limits);
        } else if (id == "height-invariance") {
            detail::theorem_height_invariance(r, *lifts, cfg.limits);
        } else if (id == "cut-lemma") {
            detail::theorem_cut_lemma(r, lifts->base(), grid, cfg.g ? *cfg.g : GFunction::identity(grid), cfg.samples,
                                      cfg.max_n, cfg.seed);
        } else if (id == "conjugacy") {
            detail::theorem_conjugacy(r, *lifts);
        }
    }
    detail::settle(r);
    return r;
}

}  // namespace fuzzdyn
