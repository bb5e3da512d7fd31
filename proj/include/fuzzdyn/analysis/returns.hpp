#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fuzzdyn/analysis/verdict.hpp"
#include "fuzzdyn/errors.hpp"
#include "fuzzdyn/families.hpp"
#include "fuzzdyn/fuzzy.hpp"
#include "fuzzdyn/limits.hpp"
#include "fuzzdyn/spaces.hpp"
#include "fuzzdyn/symbolic.hpp"

namespace fuzzdyn {

// ---------------------------------------------------------------------------
// Return-time sets on finite tables
// ---------------------------------------------------------------------------

/// N(U, V) = {n : T^n(U) meets V}, exactly: T^{n+period} = T^n for
/// n >= preperiod, so the first preperiod + period terms determine the set.
inline IndexSet return_time_set(const SystemMap& sys, const PointSet& u, const PointSet& v,
                                const Limits& limits = default_limits()) {
    if (u.size() != sys.size() || v.size() != sys.size()) throw InputError("open set does not match the space");
    if (u.none() || v.none()) throw InputError("return times need nonempty opens");
    const auto ep = eventual_period(sys, limits);
    IndexSet::Bits bits(ep.horizon());
    PointSet current = u;
    for (std::size_t n = 0; n < bits.size(); ++n) {
        bits[n] = current.intersects(v);
        current = sys.image(current);
    }
    return IndexSet::eventually_periodic(std::move(bits), ep.period);
}

/// N(U, V) observed on [0, H): exact whenever H reaches the eventual period.
inline IndexSet return_time_set(const SystemMap& sys, const PointSet& u, const PointSet& v, std::size_t horizon,
                                const Limits& limits = default_limits()) {
    const auto exact = return_time_set(sys, u, v, limits);
    return horizon >= exact.horizon() ? exact.extended(horizon) : exact.truncated(horizon);
}

/// N(x, V) = {n : T^n(x) in V}.
inline IndexSet point_return_set(const SystemMap& sys, std::size_t x, const PointSet& v,
                                 const Limits& limits = default_limits()) {
    if (x >= sys.size()) throw InputError("point index out of range");
    if (v.size() != sys.size()) throw InputError("open set does not match the space");
    const auto ep = eventual_period(sys, limits);
    IndexSet::Bits bits(ep.horizon());
    std::size_t y = x;
    for (std::size_t n = 0; n < bits.size(); ++n, y = sys(y)) bits[n] = v.test(y);
    return IndexSet::eventually_periodic(std::move(bits), ep.period);
}

inline IndexSet point_return_set(const SystemMap& sys, std::size_t x, const PointSet& v, std::size_t horizon,
                                 const Limits& limits = default_limits()) {
    const auto exact = point_return_set(sys, x, v, limits);
    return horizon >= exact.horizon() ? exact.extended(horizon) : exact.truncated(horizon);
}

// ---------------------------------------------------------------------------
// Return models
// ---------------------------------------------------------------------------

/// A system seen through a basis of opens: enough to decide every property
/// phrased through N(U, V). Finite tables, symbolic cylinders and the
/// symbolic hyperspace and fuzzy lifts all provide one.
struct ReturnModel {
    std::string name;
    std::string level = "base";
    Exactness exactness = Exactness::exact;
    std::string basis_note;
    std::size_t size = 0;
    std::function<std::string(std::size_t)> label;
    std::function<IndexSet(std::size_t, std::size_t)> returns;
    std::function<bool(std::size_t)> contains_periodic;
};

inline ReturnModel finite_model(const SystemMap& sys, std::string level = "base",
                                std::optional<OpenBasis> basis = std::nullopt,
                                const Limits& limits = default_limits()) {
    ReturnModel model;
    model.name = sys.provenance().summary();
    model.level = std::move(level);
    const auto ep = eventual_period(sys, limits);
    auto periodic = std::make_shared<const PointSet>(periodic_points(sys));
    if (!basis || basis->all_singletons) {
        const auto& space = sys.space();
        model.basis_note = "singletons";
        model.size = sys.size();
        model.label = [space](std::size_t i) { return "{" + space.label(i) + "}"; };
        model.returns = [sys, ep](std::size_t i, std::size_t j) {
            IndexSet::Bits bits(ep.horizon());
            std::size_t x = i;
            for (std::size_t n = 0; n < bits.size(); ++n, x = sys(x)) bits[n] = x == j;
            return IndexSet::eventually_periodic(std::move(bits), ep.period);
        };
        model.contains_periodic = [periodic](std::size_t i) { return periodic->test(i); };
        return model;
    }
    basis->check(sys.space());
    auto b = std::make_shared<const OpenBasis>(std::move(*basis));
    model.basis_note = b->provenance;
    model.size = b->size();
    model.label = [b](std::size_t i) { return b->labels[i]; };
    model.returns = [sys, ep, b](std::size_t i, std::size_t j) {
        IndexSet::Bits bits(ep.horizon());
        PointSet current = b->opens[i];
        for (std::size_t n = 0; n < bits.size(); ++n) {
            bits[n] = current.intersects(b->opens[j]);
            current = sys.image(current);
        }
        return IndexSet::eventually_periodic(std::move(bits), ep.period);
    };
    model.contains_periodic = [b, periodic](std::size_t i) { return b->opens[i].intersects(*periodic); };
    return model;
}

/// Shift with the basis of all cylinders [u], 1 <= |u| <= max_length.
inline ReturnModel cylinder_model(const SymbolicSystem& sys, std::size_t max_length) {
    if (max_length == 0 || max_length > sys.resolution())
        throw InputError("cylinder length must lie in [1, resolution]");
    auto words = std::make_shared<std::vector<SymbolicSystem::Word>>();
    for (std::size_t len = 1; len <= max_length; ++len) {
        auto w = sys.words(len);
        words->insert(words->end(), w.begin(), w.end());
    }
    ReturnModel model;
    model.name = "shift(" + std::to_string(sys.alphabet().size()) + " symbols)";
    model.level = "base";
    model.exactness = Exactness::resolution;
    model.basis_note = "cylinders of length <= " + std::to_string(max_length);
    model.size = words->size();
    model.label = [sys, words](std::size_t i) { return "[" + sys.label((*words)[i]) + "]"; };
    model.returns = [sys, words](std::size_t i, std::size_t j) {
        return sys.cylinder_returns((*words)[i], (*words)[j]);
    };
    model.contains_periodic = [sys, words](std::size_t i) {
        const auto r = sys.cylinder_returns((*words)[i], (*words)[i]);
        for (std::size_t n = 1; n < r.horizon(); ++n)
            if (r.contains(n)) return true;
        return false;
    };
    return model;
}

namespace detail {

/// Transition relations between length-k words at every time step of one
/// eventual-period window: rel[n][u] is the mask of v with n in N([u], [v]).
struct WordRelations {
    std::vector<SymbolicSystem::Word> words;
    std::vector<std::vector<std::uint32_t>> forward;   // [n][u] -> mask of v
    std::vector<std::vector<std::uint32_t>> backward;  // [n][v] -> mask of u
    std::vector<bool> periodic;                        // [u] holds a periodic point
    std::size_t period = 1;

    WordRelations(const SymbolicSystem& sys, std::size_t k) : words(sys.words(k)) {
        const std::size_t w = words.size();
        if (w > 16) throw BoundError("max_base_points", std::to_string(w) + " words of length " +
                                                            std::to_string(k) + " exceed 16");
        std::size_t horizon = 0;
        std::vector<IndexSet> sets;
        for (std::size_t u = 0; u < w; ++u)
            for (std::size_t v = 0; v < w; ++v) {
                sets.push_back(sys.cylinder_returns(words[u], words[v]));
                horizon = std::max(horizon, sets.back().horizon());
                period = sets.back().period();
            }
        forward.assign(horizon, std::vector<std::uint32_t>(w, 0));
        backward.assign(horizon, std::vector<std::uint32_t>(w, 0));
        for (std::size_t u = 0; u < w; ++u)
            for (std::size_t v = 0; v < w; ++v) {
                const auto& s = sets[u * w + v];
                for (std::size_t n = 0; n < horizon; ++n)
                    if (*s.at(n)) {
                        forward[n][u] |= std::uint32_t{1} << v;
                        backward[n][v] |= std::uint32_t{1} << u;
                    }
            }
        periodic.assign(w, false);
        for (std::size_t u = 0; u < w; ++u)
            for (std::size_t n = 1; n < horizon; ++n)
                if (forward[n][u] >> u & 1u) periodic[u] = true;
    }
};

inline std::string word_mask_label(const SymbolicSystem& sys, const std::vector<SymbolicSystem::Word>& words,
                                   std::uint32_t mask) {
    std::string s = "<";
    bool first = true;
    for (std::uint32_t m = mask; m; m &= m - 1) {
        s += (first ? "" : ",") + sys.label(words[__builtin_ctz(m)]);
        first = false;
    }
    return s + ">";
}

}  // namespace detail

/// K(shift) through prefix classes at resolution k: element S (a nonempty
/// set of k-words) is the clopen set of compacta whose k-prefixes are
/// exactly S, i.e. a d_H-ball of radius 2^{-(k-1)}. n is in N(S, S') iff the
/// relation "n in N([u],[v])" restricted to S x S' is total on both sides.
inline ReturnModel vietoris_model(const SymbolicSystem& sys, std::size_t k,
                                  const Limits& limits = default_limits()) {
    auto rel = std::make_shared<const detail::WordRelations>(sys, k);
    const std::size_t w = rel->words.size();
    const std::size_t count = (std::size_t{1} << w) - 1;
    if (count * count > limits.max_basis_pairs)
        throw BoundError("max_basis_pairs", "hyperspace basis of " + std::to_string(count) + " classes too large");
    ReturnModel model;
    model.name = "shift(" + std::to_string(sys.alphabet().size()) + " symbols)";
    model.level = "hyperspace";
    model.exactness = Exactness::resolution;
    model.basis_note = "prefix classes of " + std::to_string(k) + "-words";
    model.size = count;
    model.label = [sys, rel](std::size_t i) {
        return detail::word_mask_label(sys, rel->words, static_cast<std::uint32_t>(i + 1));
    };
    model.returns = [rel](std::size_t i, std::size_t j) {
        const auto s = static_cast<std::uint32_t>(i + 1), t = static_cast<std::uint32_t>(j + 1);
        IndexSet::Bits bits(rel->forward.size());
        for (std::size_t n = 0; n < bits.size(); ++n) {
            bool ok = true;
            for (std::uint32_t m = s; ok && m; m &= m - 1) ok = (rel->forward[n][__builtin_ctz(m)] & t) != 0;
            for (std::uint32_t m = t; ok && m; m &= m - 1) ok = (rel->backward[n][__builtin_ctz(m)] & s) != 0;
            bits[n] = ok;
        }
        return IndexSet::eventually_periodic(std::move(bits), rel->period);
    };
    model.contains_periodic = [rel](std::size_t i) {
        for (std::uint32_t m = static_cast<std::uint32_t>(i + 1); m; m &= m - 1)
            if (!rel->periodic[__builtin_ctz(m)]) return false;
        return true;
    };
    return model;
}

/// F^{=lambda}(shift) through grade classes at resolution k: element g maps
/// each k-word to the top grade a fuzzy set attains on its cylinder.
/// n is in N(g, g') iff every u with g(u) > 0 reaches some v with
/// g'(v) >= g(u), and every v with g'(v) > 0 is reached from some u with
/// g(u) >= g'(v).
inline ReturnModel fuzzy_symbolic_model(const SymbolicSystem& sys, std::size_t k, const LevelGrid& grid,
                                        std::size_t height_level, const Limits& limits = default_limits()) {
    if (height_level == 0 || height_level > grid.m) throw InputError("height level must lie in [1, m]");
    auto rel = std::make_shared<const detail::WordRelations>(sys, k);
    const std::size_t w = rel->words.size();
    const std::size_t radix = height_level + 1;
    std::size_t total = 1;
    for (std::size_t i = 0; i < w; ++i) {
        if (total > limits.max_fuzzy_states / radix)
            throw BoundError("max_fuzzy_states", "fuzzy basis exceeds " + std::to_string(limits.max_fuzzy_states));
        total *= radix;
    }
    // grades[i * w + u], and ge[i * (m+1) + l] = mask of words graded >= l
    auto grades = std::make_shared<std::vector<std::uint8_t>>();
    auto ge = std::make_shared<std::vector<std::uint32_t>>();
    std::size_t count = 0;
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::uint8_t> g(w);
        std::size_t c = code, top = 0;
        for (std::size_t u = 0; u < w; ++u, c /= radix) {
            g[u] = static_cast<std::uint8_t>(c % radix);
            top = std::max<std::size_t>(top, g[u]);
        }
        if (top != height_level) continue;
        grades->insert(grades->end(), g.begin(), g.end());
        for (std::size_t l = 0; l <= grid.m; ++l) {
            std::uint32_t mask = 0;
            for (std::size_t u = 0; u < w; ++u)
                if (g[u] >= l) mask |= std::uint32_t{1} << u;
            ge->push_back(mask);
        }
        ++count;
    }
    if (count * count > limits.max_basis_pairs)
        throw BoundError("max_basis_pairs", "fuzzy basis of " + std::to_string(count) + " classes too large");
    const std::size_t stride = grid.m + 1;
    ReturnModel model;
    model.name = "shift(" + std::to_string(sys.alphabet().size()) + " symbols)";
    model.level = "fuzzy(=" + to_string(grid.value(height_level)) + ")";
    model.exactness = Exactness::resolution;
    model.basis_note = "grade classes of " + std::to_string(k) + "-words, m=" + std::to_string(grid.m);
    model.size = count;
    model.label = [sys, rel, grades, grid, w](std::size_t i) {
        std::string s = "(";
        for (std::size_t u = 0; u < w; ++u)
            s += (u ? "," : "") + sys.label(rel->words[u]) + ":" + to_string(grid.value((*grades)[i * w + u]));
        return s + ")";
    };
    model.returns = [rel, grades, ge, w, stride](std::size_t i, std::size_t j) {
        IndexSet::Bits bits(rel->forward.size());
        const auto* gi = &(*grades)[i * w];
        const auto* gj = &(*grades)[j * w];
        const auto* gei = &(*ge)[i * stride];
        const auto* gej = &(*ge)[j * stride];
        for (std::size_t n = 0; n < bits.size(); ++n) {
            bool ok = true;
            for (std::size_t u = 0; ok && u < w; ++u)
                if (gi[u] > 0) ok = (rel->forward[n][u] & gej[gi[u]]) != 0;
            for (std::size_t v = 0; ok && v < w; ++v)
                if (gj[v] > 0) ok = (rel->backward[n][v] & gei[gj[v]]) != 0;
            bits[n] = ok;
        }
        return IndexSet::eventually_periodic(std::move(bits), rel->period);
    };
    model.contains_periodic = [rel, grades, w](std::size_t i) {
        for (std::size_t u = 0; u < w; ++u)
            if ((*grades)[i * w + u] > 0 && !rel->periodic[u]) return false;
        return true;
    };
    return model;
}

}  // namespace fuzzdyn
