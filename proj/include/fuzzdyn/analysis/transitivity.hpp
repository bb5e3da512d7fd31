#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/analysis/returns.hpp"
#include "fuzzdyn/analysis/verdict.hpp"
#include "fuzzdyn/families.hpp"

namespace fuzzdyn {

namespace detail {

/// Nonempty intersection of two exactly known sets, without materializing it.
inline std::optional<std::size_t> first_common(const IndexSet& a, const IndexSet& b) {
    if (!a.exact() || !b.exact()) {
        const std::size_t h = std::min(a.horizon(), b.horizon());
        for (std::size_t n = 0; n < h; ++n)
            if (a.contains(n) && b.contains(n)) return n;
        return std::nullopt;
    }
    const std::size_t end = std::max(a.preperiod(), b.preperiod()) + std::lcm(a.period(), b.period());
    for (std::size_t n = 0; n < end; ++n)
        if (*a.at(n) && *b.at(n)) return n;
    return std::nullopt;
}

inline std::string set_label(const IndexSet& s, std::size_t show = 12) {
    std::string out = "{";
    std::size_t shown = 0;
    // exact sets are unrolled over three periods
    const std::size_t end = s.exact() ? s.preperiod() + 3 * s.period() : s.horizon();
    for (std::size_t n = 0; n < end && shown < show; ++n)
        if (*s.at(n)) out += (shown++ ? "," : "") + std::to_string(n);
    if (s.exact() && !s.empty()) out += ",...";
    out += "}";
    if (s.exact()) out += " (preperiod " + std::to_string(s.preperiod()) + ", period " + std::to_string(s.period()) + ")";
    return out;
}

struct Origin {
    std::size_t u, v;
};

/// Distinct return sets of a model, each with one basis pair realizing it.
/// `visit` sees each new set and may stop the scan by returning false.
template <class Visit>
void for_each_distinct_return(const ReturnModel& model, Visit&& visit) {
    std::set<IndexSet> seen;
    for (std::size_t i = 0; i < model.size; ++i)
        for (std::size_t j = 0; j < model.size; ++j) {
            auto s = model.returns(i, j).normalized();
            if (seen.count(s)) continue;
            if (!visit(s, Origin{i, j})) return;
            seen.insert(std::move(s));
        }
}

inline Verdict start(const ReturnModel& model, std::string property) {
    Verdict v;
    v.property = std::move(property);
    v.level = model.level;
    v.exactness = model.exactness;
    return v;
}

}  // namespace detail

/// Every N(U, V) over basis pairs is nonempty.
inline Verdict is_transitive(const ReturnModel& model) {
    auto v = detail::start(model, "transitivity");
    for (std::size_t i = 0; i < model.size; ++i)
        for (std::size_t j = 0; j < model.size; ++j) {
            const auto s = model.returns(i, j);
            v.horizon = std::max(v.horizon, s.horizon());
            if (s.empty()) {
                v.status = Status::fails;
                v.with("U", model.label(i)).with("V", model.label(j)).with("N(U,V)", "{}");
                return v;
            }
        }
    v.status = Status::holds;
    v.with("basis", model.basis_note).with("pairs", std::to_string(model.size * model.size));
    return v;
}

enum class WeakMixingMethod { product, lemma22 };

inline std::string to_string(WeakMixingMethod m) { return m == WeakMixingMethod::product ? "product" : "lemma22"; }

/// Weak mixing. `product`: T x T is transitive on the product basis, i.e.
/// N(U1,V1) meets N(U2,V2) for all basis pairs; checked over the distinct
/// return sets. `lemma22`: N(U,U) meets N(U,V) for all U, V.
inline Verdict is_weakly_mixing(const ReturnModel& model, WeakMixingMethod method = WeakMixingMethod::product) {
    auto v = detail::start(model, "weak-mixing");
    v.with("method", to_string(method));
    if (method == WeakMixingMethod::product) {
        std::vector<std::pair<IndexSet, detail::Origin>> distinct;
        bool ok = true;
        detail::for_each_distinct_return(model, [&](const IndexSet& s, detail::Origin o) {
            v.horizon = std::max(v.horizon, s.horizon());
            if (s.empty()) {
                v.with("U1", model.label(o.u)).with("V1", model.label(o.v));
                v.with("U2", model.label(o.u)).with("V2", model.label(o.v));
                ok = false;
                return false;
            }
            for (const auto& [t, p] : distinct)
                if (!detail::first_common(s, t)) {
                    v.with("U1", model.label(o.u)).with("V1", model.label(o.v));
                    v.with("U2", model.label(p.u)).with("V2", model.label(p.v));
                    ok = false;
                    return false;
                }
            distinct.emplace_back(s, o);
            return true;
        });
        v.status = ok ? Status::holds : Status::fails;
        if (ok) v.with("distinct_return_sets", std::to_string(distinct.size()));
        return v;
    }
    for (std::size_t i = 0; i < model.size; ++i) {
        const auto self = model.returns(i, i);
        for (std::size_t j = 0; j < model.size; ++j) {
            const auto other = model.returns(i, j);
            v.horizon = std::max(v.horizon, other.horizon());
            if (!detail::first_common(self, other)) {
                v.status = Status::fails;
                v.with("U", model.label(i)).with("V", model.label(j));
                v.with("N(U,U)", detail::set_label(self)).with("N(U,V)", detail::set_label(other));
                return v;
            }
        }
    }
    v.status = Status::holds;
    return v;
}

/// Every N(U, V) is cofinite.
inline Verdict is_mixing(const ReturnModel& model) {
    auto v = detail::start(model, "mixing");
    std::int64_t worst_tail = 0;
    for (std::size_t i = 0; i < model.size; ++i)
        for (std::size_t j = 0; j < model.size; ++j) {
            const auto s = model.returns(i, j);
            v.horizon = std::max(v.horizon, s.horizon());
            const auto c = classify_cofinite(s);
            if (!c.exact) v.exactness = weaker(v.exactness, Exactness::horizon);
            if (!c.holds) {
                v.status = Status::fails;
                v.with("U", model.label(i)).with("V", model.label(j)).with("N(U,V)", detail::set_label(s));
                return v;
            }
            worst_tail = std::max(worst_tail, c.witness);
        }
    v.status = Status::holds;
    v.with("tail_start", std::to_string(worst_tail));
    return v;
}

/// N(U, V) in F for all basis pairs.
inline Verdict is_F_transitive(const ReturnModel& model, const FamilyClassifier& family) {
    auto v = detail::start(model, "F-transitivity");
    v.with("family", family.name);
    for (std::size_t i = 0; i < model.size; ++i)
        for (std::size_t j = 0; j < model.size; ++j) {
            const auto s = model.returns(i, j);
            v.horizon = std::max(v.horizon, s.horizon());
            const auto c = classify(s, family);
            if (!c.exact) v.exactness = weaker(v.exactness, Exactness::horizon);
            if (!c.holds) {
                v.status = Status::fails;
                v.with("U", model.label(i)).with("V", model.label(j)).with("N(U,V)", detail::set_label(s));
                return v;
            }
        }
    v.status = Status::holds;
    return v;
}

/// T x T is F-transitive: N(U1,V1) cap N(U2,V2) in F for all basis pairs.
inline Verdict is_F_mixing(const ReturnModel& model, const FamilyClassifier& family) {
    auto v = detail::start(model, "F-mixing");
    v.with("family", family.name);
    std::vector<std::pair<IndexSet, detail::Origin>> distinct;
    bool ok = true;
    detail::for_each_distinct_return(model, [&](const IndexSet& s, detail::Origin o) {
        distinct.emplace_back(s, o);
        for (const auto& [t, p] : distinct) {
            const auto both = intersect(s, t);
            v.horizon = std::max(v.horizon, both.horizon());
            const auto c = classify(both, family);
            if (!c.exact) v.exactness = weaker(v.exactness, Exactness::horizon);
            if (!c.holds) {
                v.with("U1", model.label(o.u)).with("V1", model.label(o.v));
                v.with("U2", model.label(p.u)).with("V2", model.label(p.v));
                v.with("intersection", detail::set_label(both));
                ok = false;
                return false;
            }
        }
        return true;
    });
    v.status = ok ? Status::holds : Status::fails;
    return v;
}

/// T^{a_1} x ... x T^{a_k} is transitive: for every choice of basis pairs
/// the dilated sets {n : a_i n in N(U_i, V_i)} share a member.
inline Verdict is_a_transitive(const ReturnModel& model, const std::vector<std::size_t>& a,
                               const Limits& limits = default_limits()) {
    if (a.empty()) throw InputError("exponent vector must be nonempty");
    for (auto e : a)
        if (e == 0) throw InputError("exponents must be positive");
    auto v = detail::start(model, "a-transitivity");
    std::string av;
    for (std::size_t i = 0; i < a.size(); ++i) av += (i ? "," : "") + std::to_string(a[i]);
    v.with("a", "(" + av + ")");
    std::vector<std::pair<IndexSet, detail::Origin>> distinct;
    detail::for_each_distinct_return(model, [&](const IndexSet& s, detail::Origin o) {
        distinct.emplace_back(s, o);
        return true;
    });
    // per exponent: dilated sets, deduplicated
    std::map<std::size_t, std::vector<std::pair<IndexSet, std::size_t>>> dilated;
    for (auto e : a) {
        if (dilated.count(e)) continue;
        std::set<IndexSet> seen;
        auto& out = dilated[e];
        for (std::size_t d = 0; d < distinct.size(); ++d) {
            auto s = distinct[d].first.dilated(e).normalized();
            if (seen.insert(s).second) out.emplace_back(std::move(s), d);
        }
    }
    double tuples = 1;
    for (auto e : a) tuples *= static_cast<double>(dilated[e].size());
    if (tuples > static_cast<double>(limits.max_basis_pairs))
        throw BoundError("max_basis_pairs", "a-transitivity search over too many tuples");
    std::vector<std::size_t> choice(a.size());
    std::optional<std::vector<std::size_t>> bad;
    std::function<void(std::size_t, const IndexSet*)> search = [&](std::size_t depth, const IndexSet* acc) {
        if (bad) return;
        if (depth == a.size()) return;
        const auto& options = dilated[a[depth]];
        for (std::size_t c = 0; c < options.size() && !bad; ++c) {
            choice[depth] = c;
            IndexSet next = acc ? intersect(*acc, options[c].first) : options[c].first;
            v.horizon = std::max(v.horizon, next.horizon());
            if (next.empty()) {
                bad = std::vector<std::size_t>(choice.begin(), choice.begin() + static_cast<std::ptrdiff_t>(depth) + 1);
                return;
            }
            search(depth + 1, &next);
        }
    };
    search(0, nullptr);
    if (bad) {
        v.status = Status::fails;
        for (std::size_t i = 0; i < bad->size(); ++i) {
            const auto& o = distinct[dilated[a[i]][(*bad)[i]].second].second;
            v.with("U" + std::to_string(i + 1), model.label(o.u)).with("V" + std::to_string(i + 1), model.label(o.v));
        }
        return v;
    }
    v.status = Status::holds;
    return v;
}

/// X x Y transitive: every N_X(U,V) meets every N_Y(U',V').
inline Verdict weakly_disjoint(const ReturnModel& x, const ReturnModel& y) {
    Verdict v;
    v.property = "weak-disjointness";
    v.level = x.level;
    v.exactness = weaker(x.exactness, y.exactness);
    v.with("partner", y.name + "[" + y.level + "]");
    std::vector<std::pair<IndexSet, detail::Origin>> ys;
    detail::for_each_distinct_return(y, [&](const IndexSet& s, detail::Origin o) {
        ys.emplace_back(s, o);
        return true;
    });
    bool ok = true;
    detail::for_each_distinct_return(x, [&](const IndexSet& s, detail::Origin o) {
        for (const auto& [t, p] : ys) {
            v.horizon = std::max({v.horizon, s.horizon(), t.horizon()});
            if (!detail::first_common(s, t)) {
                v.with("U", x.label(o.u)).with("V", x.label(o.v));
                v.with("U'", y.label(p.u)).with("V'", y.label(p.v));
                ok = false;
                return false;
            }
        }
        return true;
    });
    v.status = ok ? Status::holds : Status::fails;
    return v;
}

/// Weak disjointness against every catalog member (and against the system
/// itself when it is transitive). A failure is an exact refutation since the
/// partner is transitive; a pass only speaks for the catalog. Also records
/// whether every N(U, V) meets the positive differences of the bounded IP
/// sets FS(p_1..p_depth), p_i <= max_generator.
inline Verdict is_mildly_mixing_bounded(const ReturnModel& model, const std::vector<ReturnModel>& catalog,
                                        std::size_t depth = 2, std::size_t max_generator = 6) {
    if (catalog.empty()) throw InputError("mild mixing needs a nonempty catalog");
    auto v = detail::start(model, "mild-mixing");
    std::vector<const ReturnModel*> partners;
    for (const auto& c : catalog) partners.push_back(&c);
    const bool self_transitive = is_transitive(model).holds();
    if (self_transitive) partners.push_back(&model);
    for (const auto* partner : partners) {
        auto d = weakly_disjoint(model, *partner);
        v.horizon = std::max(v.horizon, d.horizon);
        if (d.fails()) {
            v.status = Status::fails;
            v.exactness = weaker(model.exactness, partner->exactness);
            v.witnesses.insert(v.witnesses.end(), d.witnesses.begin(), d.witnesses.end());
            return v;
        }
    }
    v.status = Status::holds;
    v.exactness = Exactness::catalog;
    v.with("catalog_size", std::to_string(partners.size()));
    v.with("self_included", self_transitive ? "true" : "false");

    // IP-difference evidence on the distinct return sets
    std::vector<std::vector<std::size_t>> tuples;
    std::vector<std::size_t> current;
    std::function<void(std::size_t)> gen = [&](std::size_t from) {
        if (current.size() == depth) {
            tuples.push_back(current);
            return;
        }
        for (std::size_t p = from; p <= max_generator; ++p) {
            current.push_back(p);
            gen(p);
            current.pop_back();
        }
    };
    gen(1);
    std::size_t checked = 0, missed = 0;
    detail::for_each_distinct_return(model, [&](const IndexSet& s, detail::Origin) {
        for (const auto& t : tuples) {
            std::size_t total = 0;
            for (auto p : t) total += p;
            const auto diffs = difference_set(fs_set(t, total + 1));
            bool meets = false;
            for (std::size_t n = 1; n < diffs.horizon() && !meets; ++n)
                meets = diffs.contains(n) && s.at(n).value_or(false);
            ++checked;
            if (!meets) ++missed;
        }
        return true;
    });
    v.with("ip_difference_checks", std::to_string(checked)).with("ip_difference_misses", std::to_string(missed));
    v.note = "holds against the catalog only";
    return v;
}

/// Every basis open contains a periodic point.
inline Verdict is_periodically_dense(const ReturnModel& model) {
    auto v = detail::start(model, "periodic-density");
    for (std::size_t i = 0; i < model.size; ++i)
        if (!model.contains_periodic(i)) {
            v.status = Status::fails;
            v.with("U", model.label(i));
            return v;
        }
    v.status = Status::holds;
    return v;
}

/// Transitive and periodically dense; sensitivity follows for nontrivial
/// spaces and is not checked separately.
inline Verdict is_devaney_chaotic(const ReturnModel& model) {
    auto v = detail::start(model, "devaney");
    const auto t = is_transitive(model);
    const auto p = is_periodically_dense(model);
    v.horizon = t.horizon;
    v.status = t.holds() && p.holds() ? Status::holds : Status::fails;
    v.with("transitive", to_string(t.status)).with("periodically_dense", to_string(p.status));
    for (const auto* part : {&t, &p})
        if (part->fails()) v.witnesses.insert(v.witnesses.end(), part->witnesses.begin(), part->witnesses.end());
    return v;
}

// Convenience forms on finite tables.

inline Verdict is_transitive(const SystemMap& sys, std::optional<OpenBasis> basis = std::nullopt) {
    return is_transitive(finite_model(sys, "base", std::move(basis)));
}
inline Verdict is_weakly_mixing(const SystemMap& sys, WeakMixingMethod method = WeakMixingMethod::product,
                                std::optional<OpenBasis> basis = std::nullopt) {
    return is_weakly_mixing(finite_model(sys, "base", std::move(basis)), method);
}
inline Verdict is_mixing(const SystemMap& sys, std::optional<OpenBasis> basis = std::nullopt) {
    return is_mixing(finite_model(sys, "base", std::move(basis)));
}
inline Verdict is_periodically_dense(const SystemMap& sys, std::optional<OpenBasis> basis = std::nullopt) {
    return is_periodically_dense(finite_model(sys, "base", std::move(basis)));
}

}  // namespace fuzzdyn
