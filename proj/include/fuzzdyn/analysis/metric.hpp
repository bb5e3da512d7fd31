#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuzzdyn/analysis/verdict.hpp"
#include "fuzzdyn/errors.hpp"
#include "fuzzdyn/families.hpp"
#include "fuzzdyn/hyperspace.hpp"
#include "fuzzdyn/limits.hpp"
#include "fuzzdyn/spaces.hpp"

namespace fuzzdyn {

namespace detail {

/// Orbit table orbit[n * size + x] = T^n(x) for n < steps.
inline std::vector<std::uint32_t> orbit_table(const SystemMap& sys, std::size_t steps) {
    const std::size_t n = sys.size();
    std::vector<std::uint32_t> out(steps * n);
    for (std::size_t x = 0; x < n; ++x) out[x] = static_cast<std::uint32_t>(x);
    for (std::size_t k = 1; k < steps; ++k)
        for (std::size_t x = 0; x < n; ++x) out[k * n + x] = sys(out[(k - 1) * n + x]);
    return out;
}

inline void require_positive(const Rational& eps) {
    if (eps <= 0) throw InputError("epsilon must be positive, got " + to_string(eps));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Equicontinuity
// ---------------------------------------------------------------------------

struct EquicontinuityModulus {
    Rational epsilon;
    std::optional<Rational> delta;      // min(epsilon, sup_delta); none if no delta works
    std::optional<Rational> sup_delta;  // least distance of a bad pair; none = every delta works
    std::size_t horizon = 0;
    // the bad pair realizing sup_delta: d(x, y) = sup_delta and d(T^n x, T^n y) >= epsilon
    std::optional<std::size_t> x, y, n;
    Verdict verdict;
};

/// Largest admissible delta for epsilon: pairs with d(x, y) < delta stay
/// epsilon-close under every iterate. Exact on finite tables because only
/// T^0..T^{preperiod+period-1} are distinct.
inline EquicontinuityModulus equicontinuity_modulus(const SystemMap& sys, const Rational& eps,
                                                    const Limits& limits = default_limits()) {
    detail::require_positive(eps);
    const auto& space = sys.space();
    const auto ep = eventual_period(sys, limits);
    const std::size_t size = sys.size();
    const std::uint32_t e = space.ranks_below(eps);  // rank < e  <=>  d < eps
    EquicontinuityModulus out;
    out.epsilon = eps;
    out.horizon = ep.horizon();
    std::uint32_t best = UINT32_MAX;
    const bool tabulate = ep.horizon() * size <= (std::size_t{1} << 26);
    const auto orbit = tabulate ? detail::orbit_table(sys, ep.horizon()) : std::vector<std::uint32_t>{};
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t y = x + 1; y < size; ++y) {
            const auto r = space.rank(x, y);
            if (r >= best) continue;
            if (r >= e) {
                best = r;
                out.x = x, out.y = y, out.n = 0;
                continue;
            }
            std::size_t a = x, b = y;
            for (std::size_t k = 1; k < ep.horizon(); ++k) {
                if (tabulate) {
                    a = orbit[k * size + x];
                    b = orbit[k * size + y];
                } else {
                    a = sys(a);
                    b = sys(b);
                }
                if (space.rank(a, b) >= e) {
                    best = r;
                    out.x = x, out.y = y, out.n = k;
                    break;
                }
            }
        }
    auto& v = out.verdict;
    v.property = "equicontinuity";
    v.level = "base";
    v.horizon = ep.horizon();
    v.with("epsilon", to_string(eps));
    if (best == UINT32_MAX) {
        out.delta = eps;
        v.with("sup_delta", "unbounded");
    } else {
        out.sup_delta = space.value_of_rank(best);
        if (*out.sup_delta > 0) out.delta = std::min(eps, *out.sup_delta);
        v.with("sup_delta", to_string(*out.sup_delta));
        v.with("bad_pair", "(" + space.label(*out.x) + "," + space.label(*out.y) + ")").with("at_n", std::to_string(*out.n));
    }
    if (out.delta) {
        v.status = Status::holds;
        v.with("delta", to_string(*out.delta));
    } else {
        v.status = Status::fails;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Uniform rigidity
// ---------------------------------------------------------------------------

struct UniformRigidity {
    Rational epsilon;
    std::optional<std::size_t> least;    // least n >= 1 with max_x d(T^n x, x) < epsilon
    IndexSet witnesses;                  // all such n, exactly (0 excluded)
    std::vector<Rational> displacement;  // max_x d(T^n x, x) for n = 0..preperiod+period
    Verdict verdict;
};

inline UniformRigidity uniform_rigidity(const SystemMap& sys, const Rational& eps,
                                        const Limits& limits = default_limits()) {
    detail::require_positive(eps);
    const auto& space = sys.space();
    const auto ep = eventual_period(sys, limits);
    const std::uint32_t e = space.ranks_below(eps);
    // n ranges over 0..preperiod+period; keep n = 0 in the preperiod so it can be excluded
    const std::size_t rho = std::max<std::size_t>(ep.preperiod, 1);
    const std::size_t last = rho + ep.period;
    std::vector<std::uint32_t> worst(last, 0);
    std::vector<std::uint32_t> current(sys.size());
    for (std::size_t x = 0; x < sys.size(); ++x) current[x] = static_cast<std::uint32_t>(x);
    for (std::size_t n = 0; n < last; ++n) {
        std::uint32_t w = 0;
        for (std::size_t x = 0; x < sys.size(); ++x) w = std::max(w, space.rank(current[x], x));
        worst[n] = w;
        for (auto& c : current) c = sys(c);
    }
    UniformRigidity out;
    out.epsilon = eps;
    IndexSet::Bits bits(last);
    for (std::size_t n = 1; n < last; ++n) bits[n] = worst[n] < e;
    out.witnesses = IndexSet::eventually_periodic(std::move(bits), ep.period);
    out.least = out.witnesses.first();
    for (auto w : worst) out.displacement.push_back(space.value_of_rank(w));
    auto& v = out.verdict;
    v.property = "uniform-rigidity";
    v.level = "base";
    v.horizon = last;
    v.with("epsilon", to_string(eps));
    if (out.least) {
        v.status = Status::holds;
        v.with("least_n", std::to_string(*out.least));
    } else {
        v.status = Status::fails;
        const auto it = std::min_element(worst.begin() + 1, worst.end());
        v.with("least_displacement", to_string(space.value_of_rank(*it)));
    }
    return out;
}

/// Convenience: least witness n, or none.
inline std::optional<std::size_t> is_uniformly_rigid(const SystemMap& sys, const Rational& eps,
                                                     const Limits& limits = default_limits()) {
    return uniform_rigidity(sys, eps, limits).least;
}

// ---------------------------------------------------------------------------
// Proximality and decay
// ---------------------------------------------------------------------------

/// liminf d(T^n x, T^n y) = 0, i.e. the distance vanishes somewhere on the
/// periodic part of the pair's orbit.
inline Verdict is_proximal_pair(const SystemMap& sys, std::size_t x, std::size_t y,
                                const Limits& limits = default_limits()) {
    if (x >= sys.size() || y >= sys.size()) throw InputError("point index out of range");
    const auto& space = sys.space();
    const auto ep = eventual_period(sys, limits);
    std::size_t a = x, b = y;
    for (std::size_t n = 0; n < ep.preperiod; ++n) a = sys(a), b = sys(b);
    Verdict v;
    v.property = "proximal-pair";
    v.horizon = ep.horizon();
    v.with("pair", "(" + space.label(x) + "," + space.label(y) + ")");
    std::uint32_t least = UINT32_MAX;
    for (std::size_t n = 0; n < ep.period; ++n, a = sys(a), b = sys(b)) least = std::min(least, space.rank(a, b));
    const bool zero = space.value_of_rank(least) == Rational(0);
    v.status = zero ? Status::holds : Status::fails;
    v.with("liminf", to_string(space.value_of_rank(least)));
    return v;
}

/// Every pair proximal. Orbits that meet stay merged, so a pair is proximal
/// iff T^preperiod identifies it; the system is proximal iff T^preperiod is
/// constant.
inline Verdict is_proximal(const SystemMap& sys, const Limits& limits = default_limits()) {
    const auto ep = eventual_period(sys, limits);
    const auto power = iterate(sys, ep.preperiod);
    Verdict v;
    v.property = "proximality";
    v.horizon = ep.horizon();
    for (std::size_t x = 1; x < sys.size(); ++x)
        if (power(x) != power(0)) {
            auto pair = is_proximal_pair(sys, 0, x, limits);
            v.status = Status::fails;
            v.witnesses = pair.witnesses;
            return v;
        }
    v.status = Status::holds;
    v.with("merge_time", std::to_string(ep.preperiod));
    return v;
}

/// diam(T^n(X)) for n < horizon; nonincreasing since the images decrease.
inline std::vector<Rational> diam_decay(const SystemMap& sys, std::size_t horizon) {
    const auto& space = sys.space();
    std::vector<Rational> out;
    PointSet image(sys.size());
    image.set();
    for (std::size_t n = 0; n < horizon; ++n) {
        if (image.all()) {
            out.push_back(space.diameter());
        } else {
            std::uint32_t worst = space.rank(0, 0);
            for (auto x = image.find_first(); x != PointSet::npos; x = image.find_next(x))
                for (auto y = image.find_next(x); y != PointSet::npos; y = image.find_next(y))
                    worst = std::max(worst, space.rank(x, y));
            out.push_back(space.value_of_rank(worst));
        }
        image = sys.image(image);
    }
    return out;
}

/// lim diam(T^n X) = 0: the decay reaches 0 within the eventual period.
inline Verdict diam_vanishes(const SystemMap& sys, const Limits& limits = default_limits()) {
    const auto ep = eventual_period(sys, limits);
    const auto decay = diam_decay(sys, ep.horizon() + 1);
    Verdict v;
    v.property = "diam-decay";
    v.horizon = decay.size();
    const auto it = std::find(decay.begin(), decay.end(), Rational(0));
    if (it != decay.end()) {
        v.status = Status::holds;
        v.with("zero_at", std::to_string(it - decay.begin()));
    } else {
        v.status = Status::fails;
        v.with("limit", to_string(decay.back()));
    }
    return v;
}

// ---------------------------------------------------------------------------
// Sensitivity and periodic points
// ---------------------------------------------------------------------------

/// Every ball B(x, r) holds some y with d(T^n x, T^n y) > eps for some n.
/// Radii range over the distance scale; on a finite space the smallest ball
/// is {x}, so a counterexample is always available.
inline Verdict is_sensitive(const SystemMap& sys, const Rational& eps, const Limits& limits = default_limits()) {
    detail::require_positive(eps);
    const auto& space = sys.space();
    const auto ep = eventual_period(sys, limits);
    Verdict v;
    v.property = "sensitivity";
    v.horizon = ep.horizon();
    v.with("epsilon", to_string(eps));
    std::vector<Rational> radii;
    for (const auto& d : space.scale())
        if (d > 0) radii.push_back(d);
    if (radii.empty()) radii.push_back(Rational(1));
    for (std::size_t x = 0; x < sys.size(); ++x)
        for (const auto& r : radii) {
            const auto below = space.ranks_below(r);
            bool spreads = false;
            for (std::size_t y = 0; y < sys.size() && !spreads; ++y) {
                if (space.rank(x, y) >= below) continue;
                std::size_t a = x, b = y;
                for (std::size_t n = 0; n < ep.horizon() && !spreads; ++n, a = sys(a), b = sys(b))
                    spreads = space.distance(a, b) > eps;
            }
            if (!spreads) {
                v.status = Status::fails;
                v.with("x", space.label(x)).with("radius", to_string(r));
                return v;
            }
        }
    v.status = Status::holds;
    return v;
}

}  // namespace fuzzdyn
