#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/errors.hpp"
#include "fuzzdyn/hyperspace.hpp"
#include "fuzzdyn/limits.hpp"
#include "fuzzdyn/spaces.hpp"

namespace fuzzdyn {

/// Grade levels {1/m, ..., 1}; level index k stands for k/m, 0 for grade 0.
struct LevelGrid {
    std::size_t m = 1;

    explicit LevelGrid(std::size_t levels = 1) : m(levels) {
        if (m == 0 || m > 255) throw InputError("grid size m must lie in [1, 255]");
    }
    Rational value(std::size_t k) const { return Rational(static_cast<std::int64_t>(k), static_cast<std::int64_t>(m)); }
    std::vector<Rational> levels() const {
        std::vector<Rational> out;
        for (std::size_t k = 1; k <= m; ++k) out.push_back(value(k));
        return out;
    }
    /// Level index of a grid value; throws if off-grid.
    std::size_t index_of(const Rational& v) const {
        const Rational scaled = v * static_cast<std::int64_t>(m);
        if (scaled.denominator() != 1 || scaled < 0 || scaled > static_cast<std::int64_t>(m))
            throw InputError("value " + to_string(v) + " is not on the grid 1/" + std::to_string(m));
        return static_cast<std::size_t>(scaled.numerator());
    }
    /// Least level index k with k/m >= alpha, for alpha in (0, 1].
    std::size_t ceil_index(const Rational& alpha) const {
        const Rational scaled = alpha * static_cast<std::int64_t>(m);
        auto k = scaled.numerator() / scaled.denominator();
        if (Rational(k) < scaled) ++k;
        return static_cast<std::size_t>(k);
    }
    friend bool operator==(const LevelGrid&, const LevelGrid&) = default;
};

/// Quantized fuzzy set: grade(x) = level(x) / m.
class FuzzySet {
public:
    using Levels = std::vector<std::uint8_t>;

    FuzzySet(MetricSpace base, LevelGrid grid, Levels levels)
        : base_(std::move(base)), grid_(grid), levels_(std::move(levels)) {
        if (levels_.size() != base_.size()) throw InputError("grade vector does not match the base space");
        for (auto l : levels_)
            if (l > grid_.m) throw InputError("grade exceeds 1");
    }
    static FuzzySet empty(const MetricSpace& base, LevelGrid grid) {
        return FuzzySet(base, grid, Levels(base.size(), 0));
    }

    const MetricSpace& base() const noexcept { return base_; }
    const LevelGrid& grid() const noexcept { return grid_; }
    const Levels& levels() const noexcept { return levels_; }
    std::uint8_t level(std::size_t x) const { return levels_.at(x); }
    Rational grade(std::size_t x) const { return grid_.value(levels_.at(x)); }

    std::size_t height_level() const { return *std::max_element(levels_.begin(), levels_.end()); }
    Rational height() const { return grid_.value(height_level()); }
    bool is_empty() const { return height_level() == 0; }

    /// Cut at level index k >= 1 as a point set.
    PointSet cut_at_level(std::size_t k) const {
        PointSet out(levels_.size());
        for (std::size_t x = 0; x < levels_.size(); ++x)
            if (levels_[x] >= k) out.set(x);
        return out;
    }

    std::string label() const {
        std::string s = "(";
        for (std::size_t x = 0; x < levels_.size(); ++x) s += (x ? "," : "") + to_string(grade(x));
        return s + ")";
    }

    friend bool operator==(const FuzzySet& a, const FuzzySet& b) {
        return a.grid_ == b.grid_ && a.levels_ == b.levels_;
    }

private:
    MetricSpace base_;
    LevelGrid grid_;
    Levels levels_;
};

namespace detail {
inline void require_compatible(const FuzzySet& a, const FuzzySet& b) {
    if (!(a.grid() == b.grid())) throw InputError("fuzzy sets live on different grids");
    require_same_base(a.base(), b.base());
}
}  // namespace detail

/// [A]_alpha = {x : A(x) >= alpha}; may be empty.
inline CompactSet alpha_cut(const FuzzySet& a, const Rational& alpha) {
    if (alpha <= 0 || alpha > 1) throw InputError("alpha must lie in (0, 1], got " + to_string(alpha));
    return CompactSet(a.base(), a.cut_at_level(a.grid().ceil_index(alpha)));
}

/// supp(A) = {x : A(x) > 0}; closure is trivial on finite spaces.
inline CompactSet support(const FuzzySet& a) { return CompactSet(a.base(), a.cut_at_level(1)); }

/// d_inf(A, B) = sup over alpha in (0,1] of d_H([A]_alpha, [B]_alpha). Cuts
/// are constant on each (k-1/m, k/m], so the sup is a max over grid levels.
inline Rational levelwise_distance(const FuzzySet& a, const FuzzySet& b) {
    detail::require_compatible(a, b);
    Rational best(0);
    for (std::size_t k = 1; k <= a.grid().m; ++k) {
        const auto d = hausdorff_distance(CompactSet(a.base(), a.cut_at_level(k)),
                                          CompactSet(b.base(), b.cut_at_level(k)));
        best = std::max(best, d);
    }
    return best;
}

/// Zadeh's extension: T_F(A)(x) = max of A over T^{-1}(x), 0 without preimages.
inline FuzzySet zadeh_apply(const SystemMap& sys, const FuzzySet& a) {
    detail::require_same_base(sys.space(), a.base());
    FuzzySet::Levels out(a.levels().size(), 0);
    for (std::size_t y = 0; y < out.size(); ++y) out[sys(y)] = std::max(out[sys(y)], a.level(y));
    return FuzzySet(a.base(), a.grid(), std::move(out));
}

/// Nondecreasing g on {0, 1/m, ..., 1} with g(0) = 0 and g(1) = 1, stored as
/// level indices.
class GFunction {
public:
    GFunction(LevelGrid grid, std::vector<std::uint8_t> table) : grid_(grid), table_(std::move(table)) {
        if (table_.size() != grid_.m + 1) throw InputError("g table must have m + 1 entries");
        if (table_.front() != 0) throw InputError("g(0) must be 0");
        if (table_.back() != grid_.m) throw InputError("g(1) must be 1");
        for (std::size_t k = 0; k < table_.size(); ++k) {
            if (table_[k] > grid_.m) throw InputError("g leaves [0, 1]");
            if (k > 0 && table_[k] < table_[k - 1]) throw InputError("g must be nondecreasing");
        }
    }
    static GFunction identity(LevelGrid grid) {
        std::vector<std::uint8_t> t(grid.m + 1);
        for (std::size_t k = 0; k <= grid.m; ++k) t[k] = static_cast<std::uint8_t>(k);
        return GFunction(grid, std::move(t));
    }
    const LevelGrid& grid() const noexcept { return grid_; }
    const std::vector<std::uint8_t>& table() const noexcept { return table_; }
    std::uint8_t operator()(std::size_t k) const { return table_.at(k); }
    bool is_identity() const {
        for (std::size_t k = 0; k < table_.size(); ++k)
            if (table_[k] != k) return false;
        return true;
    }

private:
    LevelGrid grid_;
    std::vector<std::uint8_t> table_;
};

/// xi_g(x) = least grid level y with g(y) >= x, as level indices.
inline std::vector<std::uint8_t> xi_of(const GFunction& g) {
    const std::size_t m = g.grid().m;
    std::vector<std::uint8_t> xi(m + 1, 0);
    for (std::size_t x = 0; x <= m; ++x) {
        std::size_t y = 0;
        while (g(y) < x) ++y;  // terminates: g(m) = m >= x
        xi[x] = static_cast<std::uint8_t>(y);
    }
    return xi;
}

/// g-fuzzification: T_F^g(A)(x) = max of g(A(y)) over T^{-1}(x).
inline FuzzySet g_fuzzify_apply(const SystemMap& sys, const GFunction& g, const FuzzySet& a) {
    if (!(g.grid() == a.grid())) throw InputError("g and the fuzzy set use different grids");
    detail::require_same_base(sys.space(), a.base());
    FuzzySet::Levels out(a.levels().size(), 0);
    for (std::size_t y = 0; y < out.size(); ++y) out[sys(y)] = std::max(out[sys(y)], g(a.level(y)));
    return FuzzySet(a.base(), a.grid(), std::move(out));
}

/// lambda * chi_C.
inline FuzzySet embed_indicator(const LevelGrid& grid, const Rational& lambda, const CompactSet& c) {
    const auto k = grid.index_of(lambda);
    if (k == 0) throw InputError("indicator height must be positive");
    if (c.is_empty()) throw InputError("indicator of the empty set is not in F_0");
    FuzzySet::Levels levels(c.base().size(), 0);
    for (auto p : c.points()) levels[p] = static_cast<std::uint8_t>(k);
    return FuzzySet(c.base(), grid, std::move(levels));
}

// ---------------------------------------------------------------------------
// Piecewise-constant representation
// ---------------------------------------------------------------------------

/// Strictly decreasing cuts c_0 > c_1 > ... with thresholds t_0 < t_1 < ... =
/// height: [A]_alpha = c_i for alpha in (t_{i-1}, t_i] (t_{-1} = 0) and
/// empty above the height.
struct PiecewiseRepresentation {
    MetricSpace base;
    std::vector<PointSet> cuts;
    std::vector<Rational> thresholds;

    static PiecewiseRepresentation of(const FuzzySet& a) {
        PiecewiseRepresentation r{a.base(), {}, {}};
        std::vector<std::uint8_t> values;
        for (auto l : a.levels())
            if (l > 0) values.push_back(l);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (auto l : values) {
            r.thresholds.push_back(a.grid().value(l));
            r.cuts.push_back(a.cut_at_level(l));
        }
        return r;
    }

    PointSet cut(const Rational& alpha) const {
        for (std::size_t i = 0; i < thresholds.size(); ++i)
            if (alpha <= thresholds[i]) return cuts[i];
        return PointSet(base.size());
    }

    /// grade(x) = largest threshold whose cut contains x.
    FuzzySet reconstruct(const LevelGrid& grid) const {
        FuzzySet::Levels levels(base.size(), 0);
        for (std::size_t i = 0; i < thresholds.size(); ++i)
            for (auto x = cuts[i].find_first(); x != PointSet::npos; x = cuts[i].find_next(x))
                levels[x] = static_cast<std::uint8_t>(grid.index_of(thresholds[i]));
        return FuzzySet(base, grid, std::move(levels));
    }
};

/// Common refinement of two cut chains: on each (gamma_{t-1}, gamma_t] both
/// cuts are constant and recorded as a pair.
struct MergedChains {
    std::vector<Rational> thresholds;
    std::vector<std::pair<PointSet, PointSet>> cuts;

    std::pair<PointSet, PointSet> lookup(const Rational& alpha, std::size_t n) const {
        for (std::size_t i = 0; i < thresholds.size(); ++i)
            if (alpha <= thresholds[i]) return cuts[i];
        return {PointSet(n), PointSet(n)};
    }
};

inline MergedChains merge_chains(const PiecewiseRepresentation& a, const PiecewiseRepresentation& b) {
    detail::require_same_base(a.base, b.base);
    MergedChains out;
    std::merge(a.thresholds.begin(), a.thresholds.end(), b.thresholds.begin(), b.thresholds.end(),
               std::back_inserter(out.thresholds));
    out.thresholds.erase(std::unique(out.thresholds.begin(), out.thresholds.end()), out.thresholds.end());
    for (const auto& gamma : out.thresholds) out.cuts.emplace_back(a.cut(gamma), b.cut(gamma));
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration and lifted systems
// ---------------------------------------------------------------------------

/// Which slice of the quantized F(X) to enumerate. `at_least` with level 1
/// is F_0(X).
struct FuzzyConstraint {
    enum class Kind { all, height_equal, height_at_least };
    Kind kind = Kind::all;
    std::size_t level = 0;  // level index of lambda

    static FuzzyConstraint all() { return {Kind::all, 0}; }
    static FuzzyConstraint height_equal(std::size_t k) { return {Kind::height_equal, k}; }
    static FuzzyConstraint height_at_least(std::size_t k) { return {Kind::height_at_least, k}; }
    static FuzzyConstraint nonempty() { return {Kind::height_at_least, 1}; }

    bool admits(std::size_t height_level) const {
        switch (kind) {
            case Kind::all: return true;
            case Kind::height_equal: return height_level == level;
            case Kind::height_at_least: return height_level >= level;
        }
        return false;
    }
    std::string describe(const LevelGrid& grid) const {
        switch (kind) {
            case Kind::all: return "all";
            case Kind::height_equal: return "height=" + to_string(grid.value(level));
            case Kind::height_at_least: return "height>=" + to_string(grid.value(level));
        }
        return "?";
    }
};

inline std::size_t fuzzy_state_count(std::size_t points, const LevelGrid& grid, const Limits& limits) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < points; ++i) {
        if (total > limits.max_fuzzy_states / (grid.m + 1))
            throw BoundError("max_fuzzy_states", "(m+1)^|X| exceeds " + std::to_string(limits.max_fuzzy_states));
        total *= grid.m + 1;
    }
    return total;
}

/// Every grade function satisfying the constraint, in base-(m+1) counting
/// order with the first point least significant.
template <class Fn>
void for_each_fuzzy(const MetricSpace& space, const LevelGrid& grid, const FuzzyConstraint& constraint, Fn&& fn,
                    const Limits& limits = default_limits()) {
    const std::size_t total = fuzzy_state_count(space.size(), grid, limits);
    FuzzySet::Levels levels(space.size(), 0);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code, h = 0;
        for (std::size_t x = 0; x < levels.size(); ++x) {
            levels[x] = static_cast<std::uint8_t>(c % (grid.m + 1));
            c /= grid.m + 1;
            h = std::max<std::size_t>(h, levels[x]);
        }
        if (constraint.admits(h)) fn(FuzzySet(space, grid, levels));
    }
}

inline std::vector<FuzzySet> enumerate_fuzzy(const MetricSpace& space, const LevelGrid& grid,
                                             const FuzzyConstraint& constraint,
                                             const Limits& limits = default_limits()) {
    std::vector<FuzzySet> out;
    for_each_fuzzy(space, grid, constraint, [&](FuzzySet f) { out.push_back(std::move(f)); }, limits);
    return out;
}

/// Thrown when a lifted map leaves the enumerated slice.
class InvarianceError : public InputError {
public:
    using InputError::InputError;
};

/// Zadeh extension (or g-fuzzification) restricted to an enumerated slice,
/// as a finite system with the levelwise metric.
inline SystemMap fuzzy_lift_system(const SystemMap& sys, const LevelGrid& grid, const FuzzyConstraint& constraint,
                                   const std::optional<GFunction>& g = std::nullopt,
                                   const Limits& limits = default_limits()) {
    if (g && !(g->grid() == grid)) throw InputError("g uses a different grid");
    const auto& base = sys.space();
    const std::size_t radix = grid.m + 1;
    const std::size_t total = fuzzy_state_count(base.size(), grid, limits);
    auto kernel = std::make_shared<const HausdorffKernel>(base, Limits{.max_base_points = 24});

    std::vector<std::int64_t> index_of(total, -1);
    auto states = std::make_shared<std::vector<std::uint32_t>>();  // cut masks, m per state
    std::vector<std::size_t> codes;
    std::vector<std::string> labels;
    for_each_fuzzy(
        base, grid, constraint,
        [&](const FuzzySet& f) {
            std::size_t code = 0;
            for (std::size_t x = f.levels().size(); x-- > 0;) code = code * radix + f.level(x);
            index_of[code] = static_cast<std::int64_t>(codes.size());
            codes.push_back(code);
            labels.push_back(f.label());
            for (std::size_t k = 1; k <= grid.m; ++k) {
                std::uint32_t mask = 0;
                for (std::size_t x = 0; x < f.levels().size(); ++x)
                    if (f.level(x) >= k) mask |= std::uint32_t{1} << x;
                states->push_back(mask);
            }
        },
        limits);
    if (codes.empty()) throw InputError("the fuzzy slice " + constraint.describe(grid) + " is empty");

    SystemMap::Table table(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i) {
        FuzzySet::Levels levels(base.size(), 0);
        std::size_t c = codes[i];
        for (std::size_t x = 0; x < levels.size(); ++x, c /= radix) levels[x] = static_cast<std::uint8_t>(c % radix);
        FuzzySet image = g ? g_fuzzify_apply(sys, *g, FuzzySet(base, grid, levels))
                           : zadeh_apply(sys, FuzzySet(base, grid, levels));
        std::size_t code = 0;
        for (std::size_t x = image.levels().size(); x-- > 0;) code = code * radix + image.level(x);
        if (index_of[code] < 0)
            throw InvarianceError("the map sends " + labels[i] + " to " + image.label() + ", outside the slice " +
                                  constraint.describe(grid));
        table[i] = static_cast<std::uint32_t>(index_of[code]);
    }
    const std::size_t m = grid.m;
    auto rank = [kernel, states, m](std::size_t i, std::size_t j) {
        std::uint32_t best = 0;
        for (std::size_t k = 0; k < m; ++k) best = std::max(best, kernel->rank((*states)[i * m + k], (*states)[j * m + k]));
        return best;
    };
    // every slice with two states holds indicators of a diametral pair
    auto space = MetricSpace::from_ranks(std::move(labels), base.shared_scale(), std::move(rank),
                                         MetricSpace::Kind::fuzzy,
                                         codes.size() > 1 ? base.diameter_rank() : base.rank(0, 0));
    Provenance prov{"fuzzy_lift",
                    {{"grid_m", std::to_string(grid.m)}, {"constraint", constraint.describe(grid)}},
                    sys.shared_provenance()};
    if (g) {
        std::string t;
        for (std::size_t k = 0; k < g->table().size(); ++k) t += (k ? "," : "") + to_string(grid.value((*g)(k)));
        prov.params.emplace_back("g", t);
    }
    return SystemMap(std::move(space), std::move(table), std::move(prov));
}

/// Position of a fuzzy set inside a lift built with the same constraint.
inline std::optional<std::size_t> fuzzy_lift_index(const SystemMap& lift, const FuzzySet& f) {
    const auto label = f.label();
    const auto& labels = lift.space().labels();
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace fuzzdyn
