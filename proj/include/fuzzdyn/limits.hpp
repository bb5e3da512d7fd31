#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>

namespace fuzzdyn {

/// Resource bounds for exhaustive enumeration. Every operation that would
/// materialize more than these throws BoundError naming the bound.
struct Limits {
    std::size_t max_base_points = 16;         // hyperspace enumeration: 2^n - 1 sets
    std::size_t max_fuzzy_states = 19683;     // 3^9
    std::size_t max_product_points = 1u << 20;
    std::size_t max_horizon = 1u << 20;       // preperiod + period of any analysed map
    std::size_t max_basis_pairs = 1u << 26;

    /// Defaults, with FUZZDYN_MAX_POINTS overriding the base-point cap.
    static Limits from_environment() {
        Limits limits;
        if (const char* env = std::getenv("FUZZDYN_MAX_POINTS")) {
            try {
                const auto value = std::stoul(env);
                if (value > 0 && value <= 24) limits.max_base_points = value;
            } catch (...) {
                // unparsable values leave the default in place
            }
        }
        if (const char* env = std::getenv("FUZZDYN_MAX_FUZZY_STATES")) {
            try {
                const auto value = std::stoul(env);
                if (value > 0) limits.max_fuzzy_states = value;
            } catch (...) {
            }
        }
        return limits;
    }
};

inline const Limits& default_limits() {
    static const Limits limits = Limits::from_environment();
    return limits;
}

}  // namespace fuzzdyn
