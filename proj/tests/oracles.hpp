#pragma once

// Brute-force reference implementations. Each works straight from the
// definitions, on plain vectors, with none of the library's shortcuts.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "fuzzdyn/fuzzdyn.hpp"

namespace oracle {

using fuzzdyn::Rational;
using Table = std::vector<std::uint32_t>;
using Dist = std::vector<std::vector<Rational>>;

inline Dist distances(const fuzzdyn::MetricSpace& s) {
    Dist d(s.size(), std::vector<Rational>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) d[i][j] = s.distance(i, j);
    return d;
}

inline Rational diameter(const Dist& d) {
    Rational best(0);
    for (const auto& row : d)
        for (const auto& x : row) best = std::max(best, x);
    return best;
}

// Sets are sorted vectors of point indices.
using Set = std::vector<std::size_t>;

inline Set image(const Table& t, const Set& a) {
    std::set<std::size_t> out;
    for (auto x : a) out.insert(t[x]);
    return {out.begin(), out.end()};
}

inline Set iterate_set(const Table& t, Set a, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) a = image(t, a);
    return a;
}

inline std::size_t iterate_point(const Table& t, std::size_t x, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) x = t[x];
    return x;
}

/// Hausdorff distance from the sup-inf formula; empty-set convention included.
inline Rational hausdorff(const Dist& d, const Set& a, const Set& b) {
    if (a.empty() && b.empty()) return Rational(0);
    if (a.empty() || b.empty()) return diameter(d);
    Rational h(0);
    for (auto x : a) {
        Rational best = d[x][b.front()];
        for (auto y : b) best = std::min(best, d[x][y]);
        h = std::max(h, best);
    }
    for (auto y : b) {
        Rational best = d[a.front()][y];
        for (auto x : a) best = std::min(best, d[x][y]);
        h = std::max(h, best);
    }
    return h;
}

/// Grades as integers 0..m.
using Grades = std::vector<std::size_t>;

inline Set cut(const Grades& a, std::size_t level) {
    Set out;
    for (std::size_t x = 0; x < a.size(); ++x)
        if (a[x] >= level) out.push_back(x);
    return out;
}

/// sup over alpha in (0, 1]: the cut only changes at grid levels.
inline Rational levelwise(const Dist& d, const Grades& a, const Grades& b, std::size_t m) {
    Rational best(0);
    for (std::size_t k = 1; k <= m; ++k) best = std::max(best, hausdorff(d, cut(a, k), cut(b, k)));
    return best;
}

/// T_F^g(A)(x) = sup { g(A(y)) : T(y) = x }, identity g when empty.
inline Grades zadeh(const Table& t, const Grades& a, const std::vector<std::size_t>& g = {}) {
    Grades out(a.size(), 0);
    for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t y = 0; y < a.size(); ++y)
            if (t[y] == x) out[x] = std::max(out[x], g.empty() ? a[y] : g[a[y]]);
    return out;
}

/// Least (rho, pi) with T^{rho+pi} = T^rho, by comparing iterate tables.
inline std::pair<std::size_t, std::size_t> eventual_period(const Table& t) {
    std::vector<Table> powers{Table(t.size())};
    for (std::size_t i = 0; i < t.size(); ++i) powers[0][i] = static_cast<std::uint32_t>(i);
    while (true) {
        Table next(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) next[i] = t[powers.back()[i]];
        for (std::size_t r = 0; r < powers.size(); ++r)
            if (powers[r] == next) return {r, powers.size() - r};
        powers.push_back(next);
    }
}

/// N(U, V) on [0, H).
inline std::vector<bool> returns(const Table& t, const Set& u, const Set& v, std::size_t horizon) {
    std::vector<bool> out(horizon);
    Set cur = u;
    for (std::size_t n = 0; n < horizon; ++n) {
        for (auto x : cur) out[n] = out[n] || std::binary_search(v.begin(), v.end(), x);
        cur = image(t, cur);
    }
    return out;
}

/// Transitive on singletons: every y is reached from every x.
inline bool transitive(const Table& t) {
    const auto [rho, pi] = eventual_period(t);
    for (std::size_t x = 0; x < t.size(); ++x)
        for (std::size_t y = 0; y < t.size(); ++y) {
            bool hit = false;
            for (std::size_t n = 0; n < rho + pi && !hit; ++n) hit = iterate_point(t, x, n) == y;
            if (!hit) return false;
        }
    return true;
}

/// T x T transitive, computed on the product table itself.
inline bool weakly_mixing(const Table& t) {
    const std::size_t n = t.size();
    Table prod(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) prod[a * n + b] = static_cast<std::uint32_t>(t[a] * n + t[b]);
    return transitive(prod);
}

inline Table random_table(std::mt19937_64& rng, std::size_t n) {
    Table t(n);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
    for (auto& x : t) x = pick(rng);
    return t;
}

/// Every set with all 2^depth - 1 finite sums of some generators inside S.
inline bool has_ip(const std::vector<bool>& s, std::size_t depth) {
    const std::size_t h = s.size();
    std::vector<std::size_t> gens;
    auto rec = [&](auto&& self, std::size_t from) -> bool {
        if (gens.size() == depth) {
            for (std::uint32_t mask = 1; mask < (1u << depth); ++mask) {
                std::size_t sum = 0;
                for (std::size_t i = 0; i < depth; ++i)
                    if (mask >> i & 1u) sum += gens[i];
                if (sum >= h || !s[sum]) return false;
            }
            return true;
        }
        for (std::size_t p = from; p < h; ++p) {
            gens.push_back(p);
            if (self(self, p)) return true;
            gens.pop_back();
        }
        return false;
    };
    return rec(rec, 1);
}

}  // namespace oracle
