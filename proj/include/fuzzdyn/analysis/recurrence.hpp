#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/analysis/verdict.hpp"
#include "fuzzdyn/hyperspace.hpp"
#include "fuzzdyn/limits.hpp"
#include "fuzzdyn/spaces.hpp"

namespace fuzzdyn {

/// omega(x) on a finite table: the cycle the orbit of x falls into.
inline CompactSet omega_limit(const SystemMap& sys, std::size_t x, const Limits& limits = default_limits()) {
    if (x >= sys.size()) throw InputError("point index out of range");
    const auto ep = eventual_period(sys, limits);
    std::size_t y = x;
    for (std::size_t n = 0; n < ep.preperiod; ++n) y = sys(y);
    PointSet members(sys.size());
    for (std::size_t n = 0; n < ep.period; ++n, y = sys(y)) members.set(y);
    return CompactSet(sys.space(), std::move(members));
}

/// x in omega(x): on a finite table exactly the periodic points.
inline PointSet recurrent_points(const SystemMap& sys) { return periodic_points(sys); }

/// Every n-tuple is recurrent under the n-fold product.
inline Verdict is_n_rigid(const SystemMap& sys, std::size_t n, const Limits& limits = default_limits()) {
    if (n == 0) throw InputError("rigidity order must be positive");
    Verdict v;
    v.property = "n-rigidity";
    v.with("n", std::to_string(n));
    std::vector<std::pair<SystemMap, std::size_t>> factors(n, {sys, 1});
    const auto product = product_system(factors, limits);
    const auto recurrent = recurrent_points(product);
    v.horizon = eventual_period(product, limits).horizon();
    if (!recurrent.all()) {
        for (std::size_t t = 0; t < product.size(); ++t)
            if (!recurrent.test(t)) {
                v.status = Status::fails;
                v.with("tuple", product.space().label(t));
                return v;
            }
    }
    v.status = Status::holds;
    return v;
}

/// n-rigidity for n = 1..n_max, stopping at the first failure. On a finite
/// table 1-rigidity already forces a bijection and hence n-rigidity for all
/// n; the scan checks that rather than assuming it.
inline Verdict is_weakly_rigid_upto(const SystemMap& sys, std::size_t n_max, const Limits& limits = default_limits()) {
    Verdict v;
    v.property = "weak-rigidity";
    v.with("n_max", std::to_string(n_max));
    for (std::size_t n = 1; n <= n_max; ++n) {
        auto r = is_n_rigid(sys, n, limits);
        v.horizon = std::max(v.horizon, r.horizon);
        if (r.fails()) {
            v.status = Status::fails;
            v.witnesses.insert(v.witnesses.end(), r.witnesses.begin(), r.witnesses.end());
            return v;
        }
    }
    v.status = Status::holds;
    if (sys.surjective()) {
        v.note = "bijection: every tuple is periodic, so all orders hold";
    } else {
        v.exactness = Exactness::horizon;
        v.note = "checked up to n_max";
    }
    return v;
}

}  // namespace fuzzdyn
