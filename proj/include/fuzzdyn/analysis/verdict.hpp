#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/errors.hpp"
#include "fuzzdyn/rational.hpp"
#include "fuzzdyn/spaces.hpp"

namespace fuzzdyn {

enum class Status { holds, fails, inconclusive };

/// How far a verdict can be trusted.
///   exact      quantifiers exhausted on a finite table past its eventual period
///   resolution exact for a truncated basis (symbolic cylinders of bounded length)
///   horizon    bounded evidence about a tail property
///   catalog    holds against a finite catalog of systems only
enum class Exactness { exact, resolution, horizon, catalog };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::holds: return "holds";
        case Status::fails: return "fails";
        case Status::inconclusive: return "inconclusive";
    }
    return "?";
}

inline std::string to_string(Exactness e) {
    switch (e) {
        case Exactness::exact: return "exact";
        case Exactness::resolution: return "resolution";
        case Exactness::horizon: return "horizon";
        case Exactness::catalog: return "catalog";
    }
    return "?";
}

/// The weaker of two exactness grades.
inline Exactness weaker(Exactness a, Exactness b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

struct Verdict {
    std::string property;
    std::string level = "base";
    Status status = Status::inconclusive;
    Exactness exactness = Exactness::exact;
    std::size_t horizon = 0;
    std::vector<std::pair<std::string, std::string>> witnesses;
    std::string note;

    bool holds() const noexcept { return status == Status::holds; }
    bool fails() const noexcept { return status == Status::fails; }

    Verdict& with(std::string key, std::string value) {
        witnesses.emplace_back(std::move(key), std::move(value));
        return *this;
    }
    const std::string* witness(const std::string& key) const {
        for (const auto& [k, v] : witnesses)
            if (k == key) return &v;
        return nullptr;
    }
};

inline std::string describe(const Verdict& v) {
    std::string s = v.property + "[" + v.level + "] " + to_string(v.status) + " (" + to_string(v.exactness) + ")";
    for (const auto& [k, w] : v.witnesses) s += " " + k + "=" + w;
    return s;
}

/// Opens that checkers quantify over. Every open is nonempty and together
/// they cover the space.
struct OpenBasis {
    std::vector<PointSet> opens;
    std::vector<std::string> labels;
    std::string provenance;
    bool all_singletons = false;

    std::size_t size() const noexcept { return opens.size(); }

    /// {x} for every point; these are the balls of radius below the least
    /// positive distance, so on a finite space they form a basis.
    static OpenBasis singletons(const MetricSpace& space) {
        OpenBasis b;
        b.provenance = "singletons";
        b.all_singletons = true;
        for (std::size_t x = 0; x < space.size(); ++x) {
            PointSet s(space.size());
            s.set(x);
            b.opens.push_back(std::move(s));
            b.labels.push_back("{" + space.label(x) + "}");
        }
        return b;
    }

    /// Open balls B(x, r) around every point.
    static OpenBasis balls(const MetricSpace& space, const Rational& radius) {
        if (radius <= 0) throw InputError("ball radius must be positive");
        OpenBasis b;
        b.provenance = "balls(r=" + to_string(radius) + ")";
        const auto below = space.ranks_below(radius);
        bool singles = true;
        for (std::size_t x = 0; x < space.size(); ++x) {
            PointSet s(space.size());
            for (std::size_t y = 0; y < space.size(); ++y)
                if (space.rank(x, y) < below) s.set(y);
            singles = singles && s.count() == 1;
            b.opens.push_back(std::move(s));
            b.labels.push_back("B(" + space.label(x) + "," + to_string(radius) + ")");
        }
        b.all_singletons = singles;
        return b;
    }

    void check(const MetricSpace& space) const {
        if (opens.empty()) throw InputError("basis has no opens");
        if (labels.size() != opens.size()) throw InputError("basis labels do not match its opens");
        PointSet cover(space.size());
        for (const auto& u : opens) {
            if (u.size() != space.size()) throw InputError("basis open does not match the space");
            if (u.none()) throw InputError("basis contains an empty open");
            cover |= u;
        }
        if (!cover.all()) throw InputError("basis does not cover the space");
    }
};

}  // namespace fuzzdyn
