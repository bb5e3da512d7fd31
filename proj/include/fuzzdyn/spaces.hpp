#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "fuzzdyn/errors.hpp"
#include "fuzzdyn/limits.hpp"
#include "fuzzdyn/rational.hpp"

namespace fuzzdyn {

using PointSet = boost::dynamic_bitset<>;

// ---------------------------------------------------------------------------
// Metric spaces
// ---------------------------------------------------------------------------

/// Finite metric space stored as ranks into a sorted table of distinct
/// distance values. Comparisons of distances reduce to integer comparisons of
/// ranks, and derived spaces (hyperspace, fuzzy, products) reuse the ranks of
/// their base so their distances stay exact.
class MetricSpace {
public:
    enum class Kind { finite_table, circle, word_space, hyperspace, fuzzy, product };
    using RankFn = std::function<std::uint32_t(std::size_t, std::size_t)>;
    using Scale = std::vector<Rational>;

    MetricSpace() = default;

    /// Takes an arbitrary square table; validate_metric reports axiom
    /// violations, construction does not reject them.
    static MetricSpace from_table(std::vector<std::string> labels,
                                  const std::vector<std::vector<Rational>>& dist,
                                  Kind kind = Kind::finite_table) {
        const std::size_t n = labels.size();
        if (n == 0) throw InputError("metric space needs at least one point");
        if (dist.size() != n) throw InputError("distance table has wrong number of rows");
        Scale values;
        values.reserve(n * n);
        for (const auto& row : dist) {
            if (row.size() != n) throw InputError("distance table is not square");
            values.insert(values.end(), row.begin(), row.end());
        }
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        auto ranks = std::make_shared<std::vector<std::uint32_t>>(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const auto it = std::lower_bound(values.begin(), values.end(), dist[i][j]);
                (*ranks)[i * n + j] = static_cast<std::uint32_t>(it - values.begin());
            }
        RankFn fn = [ranks, n](std::size_t i, std::size_t j) { return (*ranks)[i * n + j]; };
        return MetricSpace(std::move(labels), std::make_shared<const Scale>(std::move(values)),
                           std::move(fn), kind, std::nullopt);
    }

    /// Space whose distances are given lazily as ranks into `scale`.
    /// When `diameter_rank` is omitted it is computed over all pairs.
    static MetricSpace from_ranks(std::vector<std::string> labels,
                                  std::shared_ptr<const Scale> scale, RankFn rank, Kind kind,
                                  std::optional<std::uint32_t> diameter_rank = std::nullopt) {
        if (labels.empty()) throw InputError("metric space needs at least one point");
        return MetricSpace(std::move(labels), std::move(scale), std::move(rank), kind, diameter_rank);
    }

    std::size_t size() const noexcept { return labels_ ? labels_->size() : 0; }
    bool nontrivial() const noexcept { return size() >= 2; }
    Kind kind() const noexcept { return kind_; }
    const std::string& label(std::size_t i) const { return labels_->at(i); }
    const std::vector<std::string>& labels() const noexcept { return *labels_; }

    std::uint32_t rank(std::size_t i, std::size_t j) const { return rank_(i, j); }
    const Rational& distance(std::size_t i, std::size_t j) const { return (*scale_)[rank_(i, j)]; }
    const Scale& scale() const noexcept { return *scale_; }
    const std::shared_ptr<const Scale>& shared_scale() const noexcept { return scale_; }
    const Rational& value_of_rank(std::uint32_t r) const { return (*scale_)[r]; }

    /// Number of scale values strictly below eps: rank r satisfies d < eps iff r < result.
    std::uint32_t ranks_below(const Rational& eps) const {
        return static_cast<std::uint32_t>(std::lower_bound(scale_->begin(), scale_->end(), eps) -
                                          scale_->begin());
    }

    /// diam(X).
    const Rational& diameter() const { return (*scale_)[diameter_rank_]; }
    std::uint32_t diameter_rank() const noexcept { return diameter_rank_; }

    /// Smallest positive distance, if any two points differ.
    std::optional<Rational> min_positive_distance() const {
        std::optional<Rational> best;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j) {
                if (i == j) continue;
                const auto& d = distance(i, j);
                if (d > 0 && (!best || d < *best)) best = d;
            }
        return best;
    }

    /// Same points and same distances. Copies of one space compare in O(1).
    bool same_as(const MetricSpace& other) const {
        if (labels_ == other.labels_ && scale_ == other.scale_) return true;
        if (size() != other.size() || labels() != other.labels()) return false;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j)
                if (distance(i, j) != other.distance(i, j)) return false;
        return true;
    }

private:
    MetricSpace(std::vector<std::string> labels, std::shared_ptr<const Scale> scale, RankFn rank,
                Kind kind, std::optional<std::uint32_t> diameter_rank)
        : labels_(std::make_shared<const std::vector<std::string>>(std::move(labels))),
          scale_(std::move(scale)),
          rank_(std::move(rank)),
          kind_(kind) {
        if (!scale_ || scale_->empty()) throw InputError("empty distance scale");
        if (diameter_rank) {
            diameter_rank_ = *diameter_rank;
        } else {
            diameter_rank_ = size() == 1 ? rank_(0, 0) : 0;
            for (std::size_t i = 0; i < size(); ++i)
                for (std::size_t j = i + 1; j < size(); ++j) diameter_rank_ = std::max(diameter_rank_, rank_(i, j));
        }
    }

    std::shared_ptr<const std::vector<std::string>> labels_;
    std::shared_ptr<const Scale> scale_;
    RankFn rank_;
    Kind kind_ = Kind::finite_table;
    std::uint32_t diameter_rank_ = 0;
};

/// One metric-axiom violation; `points` names the offending pair or triple.
struct MetricViolation {
    enum class Kind { nonzero_self_distance, negative, zero_between_distinct, asymmetric, triangle };
    Kind kind;
    std::vector<std::size_t> points;
};

inline std::string to_string(MetricViolation::Kind k) {
    switch (k) {
        case MetricViolation::Kind::nonzero_self_distance: return "nonzero_self_distance";
        case MetricViolation::Kind::negative: return "negative";
        case MetricViolation::Kind::zero_between_distinct: return "zero_between_distinct";
        case MetricViolation::Kind::asymmetric: return "asymmetric";
        case MetricViolation::Kind::triangle: return "triangle";
    }
    return "unknown";
}

/// Exhaustive check of the metric axioms. Never throws on bad data.
inline std::vector<MetricViolation> validate_metric(const MetricSpace& space) {
    using K = MetricViolation::Kind;
    std::vector<MetricViolation> out;
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (space.distance(i, i) != Rational(0)) out.push_back({K::nonzero_self_distance, {i}});
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto& d = space.distance(i, j);
            if (d < 0) out.push_back({K::negative, {i, j}});
            else if (d == Rational(0)) out.push_back({K::zero_between_distinct, {i, j}});
            if (i < j && d != space.distance(j, i)) out.push_back({K::asymmetric, {i, j}});
        }
    }
    // unordered endpoints: (a,b,c) and (c,b,a) name the same violation
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = a + 1; c < n; ++c) {
                if (a == b || b == c) continue;
                if (space.distance(a, c) > space.distance(a, b) + space.distance(b, c))
                    out.push_back({K::triangle, {a, b, c}});
            }
    return out;
}

inline std::vector<std::string> index_labels(std::size_t n) {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
    return labels;
}

/// Z_n with d(i,j) = min(|i-j|, n-|i-j|) / n.
inline MetricSpace circle_space(std::size_t n) {
    if (n == 0) throw InputError("circle needs n >= 1");
    std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto diff = static_cast<std::int64_t>(i > j ? i - j : j - i);
            const auto wrap = static_cast<std::int64_t>(n) - diff;
            dist[i][j] = Rational(std::min(diff, wrap), static_cast<std::int64_t>(n));
        }
    return MetricSpace::from_table(index_labels(n), dist, MetricSpace::Kind::circle);
}

/// All off-diagonal distances equal to one.
inline MetricSpace discrete_space(std::size_t n) {
    if (n == 0) throw InputError("discrete space needs n >= 1");
    std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n, Rational(1)));
    for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0;
    return MetricSpace::from_table(index_labels(n), dist);
}

/// Grid {0, 1/m, ..., 1} with the usual distance.
inline MetricSpace interval_grid_space(std::size_t m) {
    if (m == 0) throw InputError("grid needs m >= 1");
    const std::size_t n = m + 1;
    std::vector<std::string> labels(n);
    std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = to_string(Rational(static_cast<std::int64_t>(i), static_cast<std::int64_t>(m)));
        for (std::size_t j = 0; j < n; ++j) {
            const auto diff = static_cast<std::int64_t>(i > j ? i - j : j - i);
            dist[i][j] = Rational(diff, static_cast<std::int64_t>(m));
        }
    }
    return MetricSpace::from_table(std::move(labels), dist);
}

/// Z_{2^k} with the 2-adic metric 2^{-v_2(i-j)}.
inline MetricSpace dyadic_space(std::size_t k) {
    if (k > 20) throw InputError("dyadic space exponent too large");
    const std::size_t n = std::size_t{1} << k;
    std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            std::size_t diff = i > j ? i - j : j - i;
            std::int64_t denom = 1;
            while (diff % 2 == 0) {
                diff /= 2;
                denom *= 2;
            }
            dist[i][j] = Rational(1, denom);
        }
    return MetricSpace::from_table(index_labels(n), dist);
}

// ---------------------------------------------------------------------------
// Systems
// ---------------------------------------------------------------------------

/// Where a system came from; serialized alongside its tables.
struct Provenance {
    std::string kind;
    std::vector<std::pair<std::string, std::string>> params;
    std::shared_ptr<const Provenance> base;

    std::string summary() const {
        std::string s = kind;
        for (std::size_t i = 0; i < params.size(); ++i)
            s += (i == 0 ? ":" : ",") + params[i].first + "=" + params[i].second;
        if (base) s += "<" + base->summary() + ">";
        return s;
    }
};

/// Total endomap of a finite metric space, stored as an image table.
class SystemMap {
public:
    using Table = std::vector<std::uint32_t>;

    SystemMap() = default;

    SystemMap(MetricSpace space, Table table, Provenance provenance = {"finite", {}, nullptr})
        : space_(std::move(space)),
          table_(std::make_shared<const Table>(std::move(table))),
          provenance_(std::make_shared<const Provenance>(std::move(provenance))) {
        if (table_->size() != space_.size())
            throw InputError("map table size does not match the number of points");
        std::vector<bool> hit(space_.size(), false);
        for (auto image : *table_) {
            if (image >= space_.size()) throw InputError("map image out of range");
            hit[image] = true;
        }
        surjective_ = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    }

    const MetricSpace& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return space_.size(); }
    const Table& table() const noexcept { return *table_; }
    std::uint32_t operator()(std::size_t x) const { return (*table_)[x]; }
    bool surjective() const noexcept { return surjective_; }
    const Provenance& provenance() const noexcept { return *provenance_; }
    std::shared_ptr<const Provenance> shared_provenance() const noexcept { return provenance_; }

    bool is_identity() const {
        for (std::size_t i = 0; i < table_->size(); ++i)
            if ((*table_)[i] != i) return false;
        return true;
    }

    /// Pointwise image of a point set.
    PointSet image(const PointSet& set) const {
        PointSet out(size());
        for (auto i = set.find_first(); i != PointSet::npos; i = set.find_next(i))
            out.set((*table_)[i]);
        return out;
    }

private:
    MetricSpace space_;
    std::shared_ptr<const Table> table_;
    std::shared_ptr<const Provenance> provenance_;
    bool surjective_ = false;
};

inline SystemMap identity_system(const MetricSpace& space) {
    SystemMap::Table t(space.size());
    std::iota(t.begin(), t.end(), 0u);
    return SystemMap(space, std::move(t), {"identity", {{"n", std::to_string(space.size())}}, nullptr});
}

/// i -> i + step (mod n) on the circle grid Z_n.
inline SystemMap make_rotation(std::size_t n, std::int64_t step) {
    if (n == 0) throw InputError("rotation needs n >= 1");
    const auto nn = static_cast<std::int64_t>(n);
    SystemMap::Table t(n);
    for (std::int64_t i = 0; i < nn; ++i) t[i] = static_cast<std::uint32_t>((((i + step) % nn) + nn) % nn);
    return SystemMap(circle_space(n), std::move(t),
                     {"rotation", {{"n", std::to_string(n)}, {"step", std::to_string(step)}}, nullptr});
}

/// i -> a*i (mod n) on the circle grid Z_n; surjective iff gcd(a, n) = 1.
inline SystemMap make_multiply(std::size_t n, std::uint64_t a) {
    if (n == 0) throw InputError("multiply needs n >= 1");
    SystemMap::Table t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<std::uint32_t>((a % n) * i % n);
    return SystemMap(circle_space(n), std::move(t),
                     {"multiply", {{"n", std::to_string(n)}, {"a", std::to_string(a)}}, nullptr});
}

/// Constant map onto point `target` of the discrete space on n points.
inline SystemMap make_constant(std::size_t n, std::size_t target = 0) {
    if (n == 0 || target >= n) throw InputError("constant map needs 0 <= target < n");
    SystemMap::Table t(n, static_cast<std::uint32_t>(target));
    return SystemMap(discrete_space(n), std::move(t),
                     {"constant", {{"n", std::to_string(n)}, {"target", std::to_string(target)}}, nullptr});
}

/// Adding machine on Z_{2^k}: i -> i + 1 with the 2-adic metric.
inline SystemMap make_odometer(std::size_t k) {
    const std::size_t n = std::size_t{1} << k;
    SystemMap::Table t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<std::uint32_t>((i + 1) % n);
    return SystemMap(dyadic_space(k), std::move(t), {"odometer", {{"k", std::to_string(k)}}, nullptr});
}

/// Piecewise-linear self-map of [0,1] through rational breakpoints.
struct PiecewiseLinear {
    std::vector<std::pair<Rational, Rational>> breakpoints;  // x strictly increasing, 0 .. 1

    void check() const {
        if (breakpoints.size() < 2) throw InputError("piecewise-linear map needs two breakpoints");
        if (breakpoints.front().first != Rational(0) || breakpoints.back().first != Rational(1))
            throw InputError("breakpoints must start at x = 0 and end at x = 1");
        for (std::size_t i = 0; i < breakpoints.size(); ++i) {
            const auto& [x, y] = breakpoints[i];
            if (y < 0 || y > 1) throw InputError("map leaves [0,1] at x = " + to_string(x));
            if (i > 0 && !(breakpoints[i - 1].first < x))
                throw InputError("breakpoint abscissae must be strictly increasing");
        }
    }

    Rational operator()(const Rational& x) const {
        for (std::size_t i = 1; i < breakpoints.size(); ++i) {
            const auto& [x0, y0] = breakpoints[i - 1];
            const auto& [x1, y1] = breakpoints[i];
            if (x <= x1) return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
        return breakpoints.back().second;
    }

    static PiecewiseLinear halving() { return {{{Rational(0), Rational(0)}, {Rational(1), Rational(1, 2)}}}; }
    static PiecewiseLinear tent() {
        return {{{Rational(0), Rational(0)}, {Rational(1, 2), Rational(1)}, {Rational(1), Rational(0)}}};
    }
    static PiecewiseLinear identity() { return {{{Rational(0), Rational(0)}, {Rational(1), Rational(1)}}}; }
};

enum class Snap { down, nearest };

/// f restricted to {i/m}, each value snapped back to the grid. Nearest-snapping
/// resolves ties upward.
inline SystemMap make_grid_interval_map(const PiecewiseLinear& f, std::size_t m, Snap snap,
                                        const std::string& name = "custom") {
    if (m == 0) throw InputError("grid needs m >= 1");
    f.check();
    const auto mm = static_cast<std::int64_t>(m);
    SystemMap::Table t(m + 1);
    for (std::int64_t i = 0; i <= mm; ++i) {
        const Rational scaled = f(Rational(i, mm)) * mm;
        std::int64_t floor = scaled.numerator() / scaled.denominator();
        if (snap == Snap::nearest && scaled - floor >= Rational(1, 2)) ++floor;
        t[i] = static_cast<std::uint32_t>(std::clamp<std::int64_t>(floor, 0, mm));
    }
    Provenance prov{"grid_map",
                    {{"map", name}, {"m", std::to_string(m)}, {"snap", snap == Snap::down ? "down" : "nearest"}},
                    nullptr};
    if (name == "custom")
        for (const auto& [x, y] : f.breakpoints) prov.params.emplace_back("breakpoint", to_string(x) + ":" + to_string(y));
    return SystemMap(interval_grid_space(m), std::move(t), std::move(prov));
}

/// Composition of two tables: (second o first).
inline SystemMap::Table compose(const SystemMap::Table& first, const SystemMap::Table& second) {
    SystemMap::Table out(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) out[i] = second[first[i]];
    return out;
}

/// T^k as a system on the same space; T^0 is the identity.
inline SystemMap iterate(const SystemMap& sys, std::uint64_t k) {
    const auto original_k = k;
    SystemMap::Table result(sys.size());
    std::iota(result.begin(), result.end(), 0u);
    SystemMap::Table power = sys.table();
    while (k > 0) {
        if (k & 1) result = compose(result, power);
        k >>= 1;
        if (k) power = compose(power, power);
    }
    Provenance p{"iterate", {{"k", std::to_string(original_k)}}, sys.shared_provenance()};
    return SystemMap(sys.space(), std::move(result), std::move(p));
}

struct EventualPeriod {
    std::size_t preperiod = 0;
    std::size_t period = 1;
    std::size_t horizon() const noexcept { return preperiod + period; }
    friend bool operator==(const EventualPeriod&, const EventualPeriod&) = default;
};

/// Least (preperiod, period) with T^{preperiod+period} = T^{preperiod}: the
/// longest tail into a cycle and the lcm of all cycle lengths.
inline EventualPeriod eventual_period(const SystemMap& sys, const Limits& limits = default_limits()) {
    const std::size_t n = sys.size();
    const auto& t = sys.table();
    std::vector<std::int64_t> cycle_len(n, 0), tail(n, -1);
    std::vector<std::uint8_t> state(n, 0);  // 0 new, 1 on stack, 2 done
    std::vector<std::size_t> path;
    for (std::size_t s = 0; s < n; ++s) {
        if (state[s]) continue;
        path.clear();
        std::size_t x = s;
        while (state[x] == 0) {
            state[x] = 1;
            path.push_back(x);
            x = t[x];
        }
        if (state[x] == 1) {
            // new cycle closes at x
            const auto pos = std::find(path.begin(), path.end(), x) - path.begin();
            const auto len = static_cast<std::int64_t>(path.size()) - pos;
            for (auto i = static_cast<std::size_t>(pos); i < path.size(); ++i) {
                cycle_len[path[i]] = len;
                tail[path[i]] = 0;
                state[path[i]] = 2;
            }
            path.resize(static_cast<std::size_t>(pos));
        }
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            tail[*it] = tail[t[*it]] + 1;
            cycle_len[*it] = cycle_len[t[*it]];
            state[*it] = 2;
        }
    }
    EventualPeriod ep;
    std::uint64_t period = 1;
    for (std::size_t i = 0; i < n; ++i) {
        ep.preperiod = std::max(ep.preperiod, static_cast<std::size_t>(tail[i]));
        if (tail[i] == 0) {
            period = std::lcm(period, static_cast<std::uint64_t>(cycle_len[i]));
            if (period > limits.max_horizon)
                throw BoundError("max_horizon", "eventual period exceeds " + std::to_string(limits.max_horizon));
        }
    }
    ep.period = static_cast<std::size_t>(period);
    if (ep.horizon() > limits.max_horizon)
        throw BoundError("max_horizon", "eventual period exceeds " + std::to_string(limits.max_horizon));
    return ep;
}

/// Points on cycles of the functional graph.
inline PointSet periodic_points(const SystemMap& sys) {
    const std::size_t n = sys.size();
    const auto ep = eventual_period(sys);
    // after preperiod steps every orbit sits on its cycle
    PointSet out(n);
    for (std::size_t x = 0; x < n; ++x) {
        std::size_t y = x;
        for (std::size_t k = 0; k < ep.preperiod; ++k) y = sys(y);
        out.set(y);
    }
    // a point reached after the preperiod is periodic; conversely every periodic point is reached from itself
    return out;
}

/// Cartesian product with the max metric; each factor advances `exponent`
/// steps of its own map per step of the product.
inline SystemMap product_system(const std::vector<std::pair<SystemMap, std::size_t>>& factors,
                                const Limits& limits = default_limits()) {
    if (factors.empty()) throw InputError("product of zero factors");
    std::size_t total = 1;
    for (const auto& [f, e] : factors) {
        if (e == 0) throw InputError("product exponents must be >= 1");
        if (total > limits.max_product_points / f.size())
            throw BoundError("max_product_points", "product space too large");
        total *= f.size();
    }
    // merged distance scale
    auto merged = std::make_shared<MetricSpace::Scale>();
    for (const auto& [f, e] : factors) merged->insert(merged->end(), f.space().scale().begin(), f.space().scale().end());
    std::sort(merged->begin(), merged->end());
    merged->erase(std::unique(merged->begin(), merged->end()), merged->end());
    struct Factor {
        MetricSpace space;
        std::vector<std::uint32_t> remap;
        std::size_t stride;
        std::size_t size;
    };
    auto parts = std::make_shared<std::vector<Factor>>();
    std::size_t stride = 1;
    // the last factor varies fastest so labels read lexicographically
    std::vector<std::size_t> strides(factors.size());
    for (std::size_t k = factors.size(); k-- > 0;) {
        strides[k] = stride;
        stride *= factors[k].first.size();
    }
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const auto& sp = factors[k].first.space();
        std::vector<std::uint32_t> remap(sp.scale().size());
        for (std::size_t r = 0; r < remap.size(); ++r)
            remap[r] = static_cast<std::uint32_t>(
                std::lower_bound(merged->begin(), merged->end(), sp.scale()[r]) - merged->begin());
        parts->push_back({sp, std::move(remap), strides[k], sp.size()});
    }
    auto rank = [parts](std::size_t i, std::size_t j) {
        std::uint32_t best = 0;
        for (const auto& p : *parts) {
            const std::size_t a = (i / p.stride) % p.size, b = (j / p.stride) % p.size;
            best = std::max(best, p.remap[p.space.rank(a, b)]);
        }
        return best;
    };
    std::vector<std::string> labels(total);
    SystemMap::Table table(total);
    std::vector<SystemMap::Table> powered;
    for (const auto& [f, e] : factors) powered.push_back(iterate(f, e).table());
    for (std::size_t i = 0; i < total; ++i) {
        std::string label = "(";
        std::size_t image = 0;
        for (std::size_t k = 0; k < factors.size(); ++k) {
            const std::size_t c = (i / strides[k]) % factors[k].first.size();
            label += (k ? "," : "") + factors[k].first.space().label(c);
            image += powered[k][c] * strides[k];
        }
        labels[i] = label + ")";
        table[i] = static_cast<std::uint32_t>(image);
    }
    Provenance prov{"product", {}, nullptr};
    for (const auto& [f, e] : factors) prov.params.emplace_back(f.provenance().summary(), std::to_string(e));
    std::uint32_t diameter = 0;
    for (const auto& p : *parts) diameter = std::max(diameter, p.remap[p.space.diameter_rank()]);
    auto space = MetricSpace::from_ranks(std::move(labels), std::move(merged), std::move(rank),
                                         MetricSpace::Kind::product, diameter);
    return SystemMap(std::move(space), std::move(table), std::move(prov));
}

/// Coordinates of a product point, first factor first.
inline std::vector<std::size_t> product_coordinates(std::size_t index, const std::vector<std::size_t>& sizes) {
    std::vector<std::size_t> coords(sizes.size());
    for (std::size_t k = sizes.size(); k-- > 0;) {
        coords[k] = index % sizes[k];
        index /= sizes[k];
    }
    return coords;
}

/// Restriction of a map to an invariant subset, with the induced metric.
inline SystemMap restrict_to(const SystemMap& sys, const PointSet& subset) {
    std::vector<std::size_t> members;
    std::vector<std::int64_t> position(sys.size(), -1);
    for (auto i = subset.find_first(); i != PointSet::npos; i = subset.find_next(i)) {
        position[i] = static_cast<std::int64_t>(members.size());
        members.push_back(i);
    }
    if (members.empty()) throw InputError("restriction to an empty set");
    std::vector<std::string> labels;
    std::vector<std::vector<Rational>> dist(members.size(), std::vector<Rational>(members.size()));
    SystemMap::Table t(members.size());
    for (std::size_t a = 0; a < members.size(); ++a) {
        labels.push_back(sys.space().label(members[a]));
        for (std::size_t b = 0; b < members.size(); ++b) dist[a][b] = sys.space().distance(members[a], members[b]);
        const auto img = position[sys(members[a])];
        if (img < 0) throw InputError("restriction target is not invariant");
        t[a] = static_cast<std::uint32_t>(img);
    }
    return SystemMap(MetricSpace::from_table(std::move(labels), dist), std::move(t),
                     {"restriction", {}, sys.shared_provenance()});
}

}  // namespace fuzzdyn
