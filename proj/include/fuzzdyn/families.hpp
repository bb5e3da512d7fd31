#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "fuzzdyn/errors.hpp"

namespace fuzzdyn {

// ---------------------------------------------------------------------------
// IndexSet
// ---------------------------------------------------------------------------

/// Subset of Z+ observed on [0, horizon). When `period() > 0` the set is known
/// exactly: membership on [horizon - period, horizon) repeats forever. Return
/// time sets of finite-table and symbolic systems are always of that form.
class IndexSet {
public:
    using Bits = boost::dynamic_bitset<>;

    IndexSet() : bits_(1) {}
    explicit IndexSet(std::size_t horizon) : bits_(horizon) {
        if (horizon == 0) throw InputError("index set horizon must be positive");
    }
    IndexSet(std::size_t horizon, const std::vector<std::size_t>& members) : IndexSet(horizon) {
        for (auto m : members) insert(m);
    }

    /// Exactly known eventually periodic set: `bits` covers preperiod + period.
    static IndexSet eventually_periodic(Bits bits, std::size_t period) {
        if (period == 0 || period > bits.size())
            throw InputError("period must lie in [1, horizon]");
        IndexSet s;
        s.bits_ = std::move(bits);
        s.period_ = period;
        return s;
    }

    std::size_t horizon() const noexcept { return bits_.size(); }
    bool exact() const noexcept { return period_ > 0; }
    std::size_t period() const noexcept { return period_; }
    std::size_t preperiod() const noexcept { return exact() ? bits_.size() - period_ : bits_.size(); }
    const Bits& bits() const noexcept { return bits_; }

    void insert(std::size_t n) {
        if (n >= horizon()) throw InputError("index " + std::to_string(n) + " beyond horizon " + std::to_string(horizon()));
        bits_.set(n);
    }

    /// Membership inside the horizon.
    bool contains(std::size_t n) const { return n < horizon() && bits_.test(n); }

    /// Membership anywhere in Z+, when determinable.
    std::optional<bool> at(std::size_t n) const {
        if (n < horizon()) return bits_.test(n);
        if (!exact()) return std::nullopt;
        const std::size_t rho = preperiod();
        return bits_.test(rho + (n - rho) % period_);
    }

    /// Empty on all of Z+ for exact sets; empty inside the horizon otherwise.
    bool empty() const noexcept { return bits_.none(); }
    std::size_t count() const noexcept { return bits_.count(); }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) out.push_back(i);
        return out;
    }
    std::optional<std::size_t> first() const {
        const auto i = bits_.find_first();
        if (i == Bits::npos) return std::nullopt;
        return i;
    }

    /// Same set observed on a longer horizon (exact sets only).
    IndexSet extended(std::size_t new_horizon) const {
        if (!exact()) throw InputError("cannot extend a horizon-limited index set");
        if (new_horizon < horizon()) throw InputError("extension must not shrink the horizon");
        Bits b(new_horizon);
        for (std::size_t n = 0; n < new_horizon; ++n) b[n] = *at(n);
        return eventually_periodic(std::move(b), period_);
    }

    /// Same set on a shorter window, forgetting the periodic tail.
    IndexSet truncated(std::size_t new_horizon) const {
        if (new_horizon == 0) throw InputError("index set horizon must be positive");
        IndexSet out(new_horizon);
        for (std::size_t n = 0; n < new_horizon; ++n)
            if (auto v = at(n); v && *v) out.bits_.set(n);
        return out;
    }

    IndexSet complement() const {
        IndexSet out = *this;
        out.bits_.flip();
        return out;
    }

    /// {n : k*n in S}. Exact sets stay exact.
    IndexSet dilated(std::size_t k) const {
        if (k == 0) throw InputError("dilation factor must be positive");
        if (k == 1) return *this;
        if (exact()) {
            const std::size_t rho = (preperiod() + k - 1) / k;
            Bits b(rho + period_);
            for (std::size_t n = 0; n < b.size(); ++n) b[n] = *at(k * n);
            return eventually_periodic(std::move(b), period_);
        }
        IndexSet out((horizon() + k - 1) / k);
        for (std::size_t n = 0; n < out.horizon(); ++n) out.bits_[n] = bits_[k * n];
        return out;
    }

    friend bool operator==(const IndexSet& a, const IndexSet& b) {
        return a.period_ == b.period_ && a.bits_ == b.bits_;
    }
    friend bool operator<(const IndexSet& a, const IndexSet& b) {
        if (a.period_ != b.period_) return a.period_ < b.period_;
        if (a.bits_.size() != b.bits_.size()) return a.bits_.size() < b.bits_.size();
        return a.bits_ < b.bits_;
    }

    /// Canonical form of an exact set: shortest preperiod and period.
    IndexSet normalized() const {
        if (!exact()) return *this;
        std::size_t period = period_;
        for (std::size_t d = 1; d < period_; ++d) {
            if (period_ % d) continue;
            bool ok = true;
            for (std::size_t n = preperiod(); ok && n < horizon(); ++n) ok = bits_[n] == *at(n + d);
            if (ok) {
                period = d;
                break;
            }
        }
        std::size_t rho = preperiod();
        while (rho > 0 && bits_[rho - 1] == *at(rho - 1 + period)) --rho;
        Bits b(rho + period);
        for (std::size_t n = 0; n < b.size(); ++n) b[n] = *at(n);
        return eventually_periodic(std::move(b), period);
    }

private:
    Bits bits_;
    std::size_t period_ = 0;
};

namespace detail {
template <class Op>
IndexSet combine(const IndexSet& a, const IndexSet& b, Op op) {
    if (a.exact() && b.exact()) {
        const std::size_t rho = std::max(a.preperiod(), b.preperiod());
        const std::size_t period = std::lcm(a.period(), b.period());
        IndexSet::Bits bits(rho + period);
        for (std::size_t n = 0; n < bits.size(); ++n) bits[n] = op(*a.at(n), *b.at(n));
        return IndexSet::eventually_periodic(std::move(bits), period);
    }
    std::size_t h = 0;
    if (a.exact()) h = b.horizon();
    else if (b.exact()) h = a.horizon();
    else h = std::min(a.horizon(), b.horizon());
    IndexSet out(h);
    for (std::size_t n = 0; n < h; ++n)
        if (op(*a.at(n), *b.at(n))) out.insert(n);
    return out;
}
}  // namespace detail

inline IndexSet intersect(const IndexSet& a, const IndexSet& b) {
    return detail::combine(a, b, [](bool x, bool y) { return x && y; });
}
inline IndexSet unite(const IndexSet& a, const IndexSet& b) {
    return detail::combine(a, b, [](bool x, bool y) { return x || y; });
}

// ---------------------------------------------------------------------------
// Verdicts about single index sets
// ---------------------------------------------------------------------------

/// Outcome of a family-membership test. `witness` is the gap, run length,
/// tail start or generator count depending on the family; -1 encodes
/// "unbounded".
struct FamilyVerdict {
    std::string kind;
    bool holds = false;
    bool exact = false;
    std::size_t horizon = 0;
    std::int64_t witness = 0;
    std::vector<std::size_t> generators;  // contains_ip only
    std::vector<std::pair<std::string, std::int64_t>> thresholds;
};

namespace detail {
inline std::size_t longest_run(const IndexSet& s, bool value, std::size_t upto) {
    std::size_t best = 0, current = 0;
    for (std::size_t n = 0; n < upto; ++n) {
        if (*s.at(n) == value) best = std::max(best, ++current);
        else current = 0;
    }
    return best;
}
inline bool periodic_block_all(const IndexSet& s, bool value) {
    for (std::size_t n = s.preperiod(); n < s.horizon(); ++n)
        if (s.bits()[n] != value) return false;
    return true;
}
inline std::size_t default_quarter(std::size_t h) { return std::max<std::size_t>(1, h / 4); }
}  // namespace detail

/// Bounded gaps. The gap is 1 + the longest run of non-members, i.e. the
/// largest spacing; holds at horizon when gap <= gap_bound (default H/4).
/// Exact sets: syndetic iff their periodic block is nonempty.
inline FamilyVerdict classify_syndetic(const IndexSet& s, std::optional<std::size_t> gap_bound = std::nullopt) {
    FamilyVerdict v;
    v.kind = "syndetic";
    v.horizon = s.horizon();
    const std::size_t bound = gap_bound.value_or(detail::default_quarter(s.horizon()));
    v.thresholds = {{"gap_bound", static_cast<std::int64_t>(bound)}};
    if (s.exact()) {
        v.exact = true;
        v.holds = !detail::periodic_block_all(s, false);
        v.witness = v.holds ? static_cast<std::int64_t>(
                                  1 + detail::longest_run(s, false, s.horizon() + s.period()))
                            : -1;
        return v;
    }
    v.witness = static_cast<std::int64_t>(1 + detail::longest_run(s, false, s.horizon()));
    v.holds = v.witness <= static_cast<std::int64_t>(bound);
    return v;
}

/// Long runs. Holds at horizon when some run reaches `run_threshold`
/// (default H/4). Exact sets: thick iff the periodic block is full.
inline FamilyVerdict classify_thick(const IndexSet& s, std::optional<std::size_t> run_threshold = std::nullopt) {
    FamilyVerdict v;
    v.kind = "thick";
    v.horizon = s.horizon();
    const std::size_t threshold = run_threshold.value_or(detail::default_quarter(s.horizon()));
    v.thresholds = {{"run_threshold", static_cast<std::int64_t>(threshold)}};
    if (s.exact()) {
        v.exact = true;
        v.holds = detail::periodic_block_all(s, true);
        v.witness = v.holds ? -1 : static_cast<std::int64_t>(detail::longest_run(s, true, s.horizon() + s.period()));
        return v;
    }
    v.witness = static_cast<std::int64_t>(detail::longest_run(s, true, s.horizon()));
    v.holds = v.witness >= static_cast<std::int64_t>(threshold);
    return v;
}

/// Tails. Holds at horizon when [t, H) is inside S for some t <= tail_limit
/// (default H/2); the witness is the least such t.
inline FamilyVerdict classify_cofinite(const IndexSet& s, std::optional<std::size_t> tail_limit = std::nullopt) {
    FamilyVerdict v;
    v.kind = "cofinite";
    v.horizon = s.horizon();
    const std::size_t limit = tail_limit.value_or(s.horizon() / 2);
    v.thresholds = {{"tail_limit", static_cast<std::int64_t>(limit)}};
    std::size_t t = s.horizon();
    while (t > 0 && s.bits()[t - 1]) --t;
    v.witness = static_cast<std::int64_t>(t);
    if (s.exact()) {
        v.exact = true;
        v.holds = detail::periodic_block_all(s, true);
        if (!v.holds) v.witness = -1;
        return v;
    }
    v.holds = t <= limit;
    return v;
}

/// Infinitude. Holds at horizon when S meets [tail_from, H) (default H/2),
/// which makes its dual exactly classify_cofinite with the same cut.
inline FamilyVerdict classify_infinite(const IndexSet& s, std::optional<std::size_t> tail_from = std::nullopt) {
    FamilyVerdict v;
    v.kind = "infinite";
    v.horizon = s.horizon();
    const std::size_t from = tail_from.value_or(s.horizon() / 2);
    v.thresholds = {{"tail_from", static_cast<std::int64_t>(from)}};
    if (s.exact()) {
        v.exact = true;
        v.holds = !detail::periodic_block_all(s, false);
        v.witness = v.holds ? -1 : static_cast<std::int64_t>(s.count());
        return v;
    }
    std::int64_t last = -1;
    for (std::size_t n = s.horizon(); n-- > 0;)
        if (s.bits()[n]) {
            last = static_cast<std::int64_t>(n);
            break;
        }
    v.witness = last;
    v.holds = last >= static_cast<std::int64_t>(from);
    return v;
}

// ---------------------------------------------------------------------------
// IP sets and difference sets
// ---------------------------------------------------------------------------

/// Finite sums of distinct generators, truncated to [0, H).
inline IndexSet fs_set(const std::vector<std::size_t>& generators, std::size_t horizon) {
    if (generators.empty()) throw InputError("fs_set needs at least one generator");
    IndexSet out(horizon);
    IndexSet::Bits sums(horizon);
    for (auto p : generators) {
        if (p == 0) throw InputError("generators must be positive");
        if (p >= horizon) continue;
        IndexSet::Bits shifted = sums << p;  // s + p for earlier sums
        sums |= shifted;
        sums.set(p);
    }
    for (auto i = sums.find_first(); i != IndexSet::Bits::npos; i = sums.find_next(i)) out.insert(i);
    return out;
}

inline constexpr std::size_t default_ip_depth_bound = 5;

/// Searches for `depth` positive generators p_1 <= ... <= p_depth, each at
/// most max(S), all of whose 2^depth - 1 finite sums lie in S. A positive
/// answer is exact; a negative one speaks only for the horizon and depth.
inline FamilyVerdict contains_ip(const IndexSet& s, std::size_t depth,
                                 std::size_t depth_bound = default_ip_depth_bound) {
    if (depth == 0 || depth > depth_bound)
        throw InputError("IP depth must lie in [1, " + std::to_string(depth_bound) + "]");
    FamilyVerdict v;
    v.kind = "ip";
    v.horizon = s.horizon();
    v.thresholds = {{"depth", static_cast<std::int64_t>(depth)}};
    const auto members = s.members();
    std::vector<std::size_t> positive;
    for (auto m : members)
        if (m > 0) positive.push_back(m);
    auto member = [&](std::size_t n) {
        const auto b = s.at(n);
        return b && *b;
    };
    std::vector<std::size_t> chosen;
    std::vector<std::size_t> sums;  // all finite sums of `chosen`
    std::function<bool(std::size_t)> search = [&](std::size_t from) -> bool {
        if (chosen.size() == depth) return true;
        for (std::size_t idx = from; idx < positive.size(); ++idx) {
            const std::size_t p = positive[idx];
            bool ok = true;
            for (auto x : sums)
                if (!member(x + p)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            const std::size_t old = sums.size();
            for (std::size_t k = 0; k < old; ++k) sums.push_back(sums[k] + p);
            sums.push_back(p);
            chosen.push_back(p);
            if (search(idx)) return true;
            chosen.pop_back();
            sums.resize(old);
        }
        return false;
    };
    v.holds = search(0);
    v.exact = v.holds;
    if (v.holds) v.generators = chosen;
    v.witness = static_cast<std::int64_t>(v.generators.size());
    return v;
}

/// {i - j >= 0 : i, j in S} on the same horizon. Tails are not propagated.
inline IndexSet difference_set(const IndexSet& s) {
    IndexSet out(s.horizon());
    const auto m = s.members();
    for (std::size_t a = 0; a < m.size(); ++a)
        for (std::size_t b = 0; b <= a; ++b) out.insert(m[a] - m[b]);
    return out;
}

// ---------------------------------------------------------------------------
// Families and duals
// ---------------------------------------------------------------------------

/// A Furstenberg family evaluated at bounded horizon. `parameter` is the gap
/// bound, run threshold, tail cut or IP depth; when unset the horizon-relative
/// default applies.
struct FamilyClassifier {
    enum class Kind { infinite, cofinite, syndetic, thick, ip, custom };
    Kind kind = Kind::infinite;
    std::optional<std::size_t> parameter;
    std::function<bool(const IndexSet&)> predicate;  // custom only
    std::string name;

    static FamilyClassifier infinite(std::optional<std::size_t> p = {}) { return {Kind::infinite, p, {}, "infinite"}; }
    static FamilyClassifier cofinite(std::optional<std::size_t> p = {}) { return {Kind::cofinite, p, {}, "cofinite"}; }
    static FamilyClassifier syndetic(std::optional<std::size_t> p = {}) { return {Kind::syndetic, p, {}, "syndetic"}; }
    static FamilyClassifier thick(std::optional<std::size_t> p = {}) { return {Kind::thick, p, {}, "thick"}; }
    static FamilyClassifier ip(std::size_t depth = 3) { return {Kind::ip, depth, {}, "ip"}; }
    static FamilyClassifier custom(std::string name, std::function<bool(const IndexSet&)> pred) {
        return {Kind::custom, std::nullopt, std::move(pred), std::move(name)};
    }
};

inline std::string to_string(FamilyClassifier::Kind k) {
    switch (k) {
        case FamilyClassifier::Kind::infinite: return "infinite";
        case FamilyClassifier::Kind::cofinite: return "cofinite";
        case FamilyClassifier::Kind::syndetic: return "syndetic";
        case FamilyClassifier::Kind::thick: return "thick";
        case FamilyClassifier::Kind::ip: return "ip";
        case FamilyClassifier::Kind::custom: return "custom";
    }
    return "unknown";
}

inline FamilyClassifier parse_family(const std::string& name) {
    if (name == "infinite" || name == "inf") return FamilyClassifier::infinite();
    if (name == "cofinite") return FamilyClassifier::cofinite();
    if (name == "syndetic") return FamilyClassifier::syndetic();
    if (name == "thick") return FamilyClassifier::thick();
    if (name == "ip") return FamilyClassifier::ip();
    throw InputError("unknown family '" + name + "'");
}

inline FamilyVerdict classify(const IndexSet& s, const FamilyClassifier& family) {
    switch (family.kind) {
        case FamilyClassifier::Kind::infinite: return classify_infinite(s, family.parameter);
        case FamilyClassifier::Kind::cofinite: return classify_cofinite(s, family.parameter);
        case FamilyClassifier::Kind::syndetic: return classify_syndetic(s, family.parameter);
        case FamilyClassifier::Kind::thick: return classify_thick(s, family.parameter);
        case FamilyClassifier::Kind::ip: return contains_ip(s, family.parameter.value_or(3));
        case FamilyClassifier::Kind::custom: {
            FamilyVerdict v;
            v.kind = family.name;
            v.horizon = s.horizon();
            v.holds = family.predicate(s);
            return v;
        }
    }
    throw InputError("unknown family kind");
}

/// Dual family membership via the complement form: S in kF iff Z+ \ S is not in F.
inline FamilyVerdict dual_contains(const IndexSet& s, const FamilyClassifier& family) {
    if (family.kind == FamilyClassifier::Kind::custom)
        throw InputError("dual of a custom family needs complement logic");
    auto inner = classify(s.complement(), family);
    FamilyVerdict v = inner;
    v.kind = "dual(" + inner.kind + ")";
    v.holds = !inner.holds;
    // a negative IP search is not exact, so neither is the dual's positive answer
    v.exact = family.kind == FamilyClassifier::Kind::ip ? inner.holds : inner.exact;
    return v;
}

}  // namespace fuzzdyn
