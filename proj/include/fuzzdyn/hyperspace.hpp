#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fuzzdyn/errors.hpp"
#include "fuzzdyn/limits.hpp"
#include "fuzzdyn/spaces.hpp"

namespace fuzzdyn {

/// Subset of a finite space. The empty set is representable (the levelwise
/// metric needs it) but is not an element of K(X).
class CompactSet {
public:
    CompactSet(MetricSpace base, PointSet members) : base_(std::move(base)), members_(std::move(members)) {
        if (members_.size() != base_.size()) throw InputError("compact set does not match its base space");
    }
    static CompactSet empty(const MetricSpace& base) { return CompactSet(base, PointSet(base.size())); }
    static CompactSet of(const MetricSpace& base, const std::vector<std::size_t>& points) {
        PointSet m(base.size());
        for (auto p : points) {
            if (p >= base.size()) throw InputError("point index out of range");
            m.set(p);
        }
        return CompactSet(base, std::move(m));
    }
    static CompactSet whole(const MetricSpace& base) {
        PointSet m(base.size());
        m.set();
        return CompactSet(base, std::move(m));
    }

    const MetricSpace& base() const noexcept { return base_; }
    const PointSet& members() const noexcept { return members_; }
    bool is_empty() const noexcept { return members_.none(); }
    bool contains(std::size_t p) const { return members_.test(p); }
    std::vector<std::size_t> points() const {
        std::vector<std::size_t> out;
        for (auto i = members_.find_first(); i != PointSet::npos; i = members_.find_next(i)) out.push_back(i);
        return out;
    }
    bool subset_of(const CompactSet& other) const { return members_.is_subset_of(other.members_); }

    std::string label() const {
        std::string s = "{";
        bool first = true;
        for (auto p : points()) {
            s += (first ? "" : ",") + base_.label(p);
            first = false;
        }
        return s + "}";
    }

    friend bool operator==(const CompactSet& a, const CompactSet& b) { return a.members_ == b.members_; }

private:
    MetricSpace base_;
    PointSet members_;
};

namespace detail {
inline void require_same_base(const MetricSpace& a, const MetricSpace& b) {
    if (!a.same_as(b)) throw InputError("sets live on different base spaces");
}
}  // namespace detail

/// d_H with d_H(empty, empty) = 0 and d_H(empty, A) = diam(X); evaluated as
/// the max of both directed sup-inf distances.
inline Rational hausdorff_distance(const CompactSet& a, const CompactSet& b) {
    detail::require_same_base(a.base(), b.base());
    const auto& space = a.base();
    if (a.is_empty() && b.is_empty()) return Rational(0);
    if (a.is_empty() || b.is_empty()) return space.diameter();
    auto directed = [&](const CompactSet& from, const CompactSet& to) {
        std::uint32_t worst = 0;
        for (auto x : from.points()) {
            std::uint32_t best = UINT32_MAX;
            for (auto y : to.points()) best = std::min(best, space.rank(x, y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return space.value_of_rank(std::max(directed(a, b), directed(b, a)));
}

/// T_K(A) = T(A), defined on K(X) only.
inline CompactSet induced_apply(const SystemMap& sys, const CompactSet& a) {
    detail::require_same_base(sys.space(), a.base());
    if (a.is_empty()) throw InputError("the induced map is defined on nonempty sets only");
    return CompactSet(a.base(), sys.image(a.members()));
}

/// Open ball {y : d(x, y) < r}.
inline PointSet open_ball(const MetricSpace& space, std::size_t center, const Rational& radius) {
    PointSet out(space.size());
    const auto below = space.ranks_below(radius);
    for (std::size_t y = 0; y < space.size(); ++y)
        if (space.rank(center, y) < below) out.set(y);
    return out;
}

/// <U_1, ..., U_n>: compacta inside the union that meet every U_i.
struct VietorisBasisElement {
    std::vector<PointSet> opens;

    void check() const {
        if (opens.empty()) throw InputError("Vietoris element needs at least one open set");
        for (const auto& u : opens)
            if (u.none()) throw InputError("Vietoris element contains an empty open set");
    }
};

inline bool in_vietoris(const CompactSet& a, const VietorisBasisElement& v) {
    v.check();
    if (a.is_empty()) return false;
    PointSet uni(a.base().size());
    for (const auto& u : v.opens) {
        if (u.size() != uni.size()) throw InputError("open set does not match the base space");
        if (!a.members().intersects(u)) return false;
        uni |= u;
    }
    return a.members().is_subset_of(uni);
}

inline void check_enumeration_bound(const MetricSpace& space, const Limits& limits) {
    if (space.size() > limits.max_base_points || space.size() > 24)
        throw BoundError("max_base_points", "hyperspace enumeration over " + std::to_string(space.size()) +
                                                " points exceeds " + std::to_string(limits.max_base_points));
}

/// Calls `fn` on each of the 2^n - 1 nonempty subsets, in bitmask order.
template <class Fn>
void for_each_compact(const MetricSpace& space, Fn&& fn, const Limits& limits = default_limits()) {
    check_enumeration_bound(space, limits);
    const std::uint64_t count = std::uint64_t{1} << space.size();
    for (std::uint64_t mask = 1; mask < count; ++mask)
        fn(CompactSet(space, PointSet(space.size(), mask)));
}

inline std::vector<CompactSet> enumerate_compacts(const MetricSpace& space, const Limits& limits = default_limits()) {
    std::vector<CompactSet> out;
    for_each_compact(space, [&](CompactSet c) { out.push_back(std::move(c)); }, limits);
    return out;
}

/// Fast Hausdorff ranks on bitmask-encoded subsets of a small base space.
/// Holds min_{y in B} rank(x, y) for every point x and mask B.
class HausdorffKernel {
public:
    explicit HausdorffKernel(const MetricSpace& base, const Limits& limits = default_limits())
        : n_(base.size()), zero_rank_(base.rank(0, 0)), diam_rank_(base.diameter_rank()) {
        check_enumeration_bound(base, limits);
        const std::size_t masks = std::size_t{1} << n_;
        min_rank_.assign(n_ * masks, UINT32_MAX);
        for (std::size_t x = 0; x < n_; ++x) {
            auto* row = &min_rank_[x * masks];
            for (std::size_t mask = 1; mask < masks; ++mask) {
                const auto low = static_cast<std::size_t>(__builtin_ctzll(mask));
                const auto rest = mask & (mask - 1);
                const auto r = base.rank(x, low);
                row[mask] = rest ? std::min(r, row[rest]) : r;
            }
        }
    }

    std::size_t points() const noexcept { return n_; }

    /// Rank of d_H between masks, with the empty-set convention.
    std::uint32_t rank(std::uint32_t a, std::uint32_t b) const {
        if (a == 0 && b == 0) return zero_rank_;
        if (a == 0 || b == 0) return diam_rank_;
        const std::size_t masks = std::size_t{1} << n_;
        std::uint32_t worst = 0;
        for (std::uint32_t m = a; m; m &= m - 1) worst = std::max(worst, min_rank_[__builtin_ctz(m) * masks + b]);
        for (std::uint32_t m = b; m; m &= m - 1) worst = std::max(worst, min_rank_[__builtin_ctz(m) * masks + a]);
        return worst;
    }

private:
    std::size_t n_;
    std::uint32_t zero_rank_;
    std::uint32_t diam_rank_;
    std::vector<std::uint32_t> min_rank_;
};

/// Image of a bitmask under a table.
inline std::uint32_t image_mask(const SystemMap::Table& t, std::uint32_t mask) {
    std::uint32_t out = 0;
    for (std::uint32_t m = mask; m; m &= m - 1) out |= std::uint32_t{1} << t[__builtin_ctz(m)];
    return out;
}

inline std::string mask_label(const MetricSpace& base, std::uint32_t mask) {
    std::string s = "{";
    bool first = true;
    for (std::uint32_t m = mask; m; m &= m - 1) {
        s += (first ? "" : ",") + base.label(__builtin_ctz(m));
        first = false;
    }
    return s + "}";
}

/// (K(X), T_K) as a finite system. Point i is the subset with bitmask i + 1;
/// distances are Hausdorff distances on the base scale.
inline SystemMap lift_system(const SystemMap& sys, const Limits& limits = default_limits()) {
    const auto& base = sys.space();
    auto kernel = std::make_shared<const HausdorffKernel>(base, limits);
    const std::size_t count = (std::size_t{1} << base.size()) - 1;
    std::vector<std::string> labels(count);
    SystemMap::Table table(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto mask = static_cast<std::uint32_t>(i + 1);
        labels[i] = mask_label(base, mask);
        table[i] = image_mask(sys.table(), mask) - 1;
    }
    auto rank = [kernel](std::size_t i, std::size_t j) {
        return kernel->rank(static_cast<std::uint32_t>(i + 1), static_cast<std::uint32_t>(j + 1));
    };
    auto space = MetricSpace::from_ranks(std::move(labels), base.shared_scale(), std::move(rank),
                                         MetricSpace::Kind::hyperspace, base.diameter_rank());
    return SystemMap(std::move(space), std::move(table), {"hyperspace_lift", {}, sys.shared_provenance()});
}

/// Index of a nonempty subset inside lift_system's point list.
inline std::size_t lift_index(const CompactSet& a) {
    if (a.is_empty()) throw InputError("the empty set is not a point of K(X)");
    return a.members().to_ulong() - 1;
}

}  // namespace fuzzdyn
