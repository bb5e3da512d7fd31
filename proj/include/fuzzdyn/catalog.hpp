#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fuzzdyn/analysis/returns.hpp"
#include "fuzzdyn/errors.hpp"
#include "fuzzdyn/spaces.hpp"
#include "fuzzdyn/symbolic.hpp"

namespace fuzzdyn {

/// A system the harness can analyse: a finite table or a symbolic shift.
using AnySystem = std::variant<SystemMap, SymbolicSystem>;

/// The one-point system.
inline SystemMap make_point() {
    return SystemMap(discrete_space(1), SystemMap::Table{0}, {"point", {}, nullptr});
}

/// i -> -i (mod n) on the circle grid; an isometric involution.
inline SystemMap make_reflection(std::size_t n) {
    if (n == 0) throw InputError("reflection needs n >= 1");
    SystemMap::Table t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<std::uint32_t>((n - i) % n);
    return SystemMap(circle_space(n), std::move(t), {"reflection", {{"n", std::to_string(n)}}, nullptr});
}

inline SystemMap make_named_grid_map(const std::string& name, std::size_t m, Snap snap = Snap::down) {
    if (name == "half") return make_grid_interval_map(PiecewiseLinear::halving(), m, snap, "half");
    if (name == "tent") return make_grid_interval_map(PiecewiseLinear::tent(), m, snap, "tent");
    if (name == "identity") return make_grid_interval_map(PiecewiseLinear::identity(), m, snap, "identity");
    throw InputError("unknown interval map '" + name + "' (known: half, tent, identity)");
}

struct CatalogEntry {
    std::string name;
    std::string syntax;
    std::string description;
};

inline const std::vector<CatalogEntry>& generator_entries() {
    static const std::vector<CatalogEntry> entries{
        {"point", "point", "the one-point system"},
        {"rotation", "rotation:n,s", "i -> i+s mod n on the circle grid Z_n"},
        {"multiply", "multiply:n,a", "i -> a*i mod n on the circle grid Z_n"},
        {"reflection", "reflection:n", "i -> -i mod n on the circle grid Z_n"},
        {"constant", "constant:n[,t]", "constant map onto t on the discrete space of n points"},
        {"odometer", "odometer:k", "adding machine on Z_{2^k} with the 2-adic metric"},
        {"gridmap", "gridmap:name,m[,down|nearest]", "half, tent or identity restricted to {i/m}"},
        {"fullshift", "fullshift:s,k", "full shift on s symbols observed at word length k"},
        {"file", "file:path", "system description in JSON"},
    };
    return entries;
}

inline const std::vector<CatalogEntry>& theorem_entries() {
    static const std::vector<CatalogEntry> entries{
        {"transitivity", "", "T weakly mixing <=> T_K transitive <=> T_K weakly mixing <=> T_F on every F^{=l} transitive / weakly mixing"},
        {"mixing", "", "T mixing <=> T_K mixing <=> T_F on F^{=l} mixing"},
        {"f-mixing", "", "T F-mixing <=> T_K F-transitive / F-mixing <=> T_F on F^{=l} F-transitive / F-mixing (all or some l)"},
        {"devaney", "", "T_K Devaney chaotic <=> T_F on F^{=l} Devaney chaotic (all or some l)"},
        {"mild-mixing", "", "T mildly mixing <=> T_K <=> T_F on F^{=l} (all or some l), against a catalog"},
        {"a-transitivity", "", "T weakly mixing and a-transitive <=> T_K a-transitive <=> T_F on F^{=l} a-transitive"},
        {"equicontinuity", "", "T equicontinuous <=> T_K <=> T_F on F_0"},
        {"uniform-rigidity", "", "T uniformly rigid <=> T_K <=> T_F on F_0, F^{=l}, F^{>=l}"},
        {"proximality", "", "T_K proximal <=> diam T^n(X) -> 0 <=> T_F on F^{=l} proximal; T_F on F_0 never proximal"},
        {"height-invariance", "", "T_F preserves height; sets of different height stay diam(X) apart"},
        {"cut-lemma", "", "[(T_F^g)^n A]_a = T^n([A]_{xi_g^n(a)})"},
        {"periodic-density", "", "T_K periodically dense <=> T_F on F^{=l} periodically dense"},
        {"conjugacy", "", "l*chi_A intertwines T_K with T_F isometrically"},
    };
    return entries;
}

inline bool known_theorem(const std::string& id) {
    for (const auto& e : theorem_entries())
        if (e.name == id) return true;
    return false;
}

/// Finite systems on at most five points: rotations, reflections,
/// multiplications, the odometer on Z_4, constants and interval maps.
inline std::vector<SystemMap> small_catalog() {
    return {
        make_point(),
        make_rotation(2, 1),
        make_rotation(3, 1),
        make_rotation(4, 1),
        make_rotation(5, 1),
        make_rotation(5, 2),
        make_reflection(3),
        make_reflection(4),
        make_reflection(5),
        make_multiply(5, 2),
        make_multiply(4, 2),
        make_multiply(5, 1),
        make_odometer(2),
        make_constant(3),
        make_constant(5, 2),
        make_named_grid_map("half", 4),
        make_named_grid_map("tent", 4, Snap::nearest),
        make_named_grid_map("tent", 3),
    };
}

/// Bijections of the small catalog other than the one-point system.
inline std::vector<SystemMap> small_bijections() {
    std::vector<SystemMap> out;
    for (auto& s : small_catalog())
        if (s.surjective() && s.size() > 1) out.push_back(std::move(s));
    return out;
}

/// Isometries of the small catalog.
inline std::vector<SystemMap> small_isometries() {
    std::vector<SystemMap> out;
    for (auto& s : small_catalog()) {
        bool iso = true;
        for (std::size_t x = 0; x < s.size() && iso; ++x)
            for (std::size_t y = x + 1; y < s.size() && iso; ++y) iso = s.space().rank(x, y) == s.space().rank(s(x), s(y));
        if (iso) out.push_back(std::move(s));
    }
    return out;
}

/// Transitive partners for mild mixing: the point, cycles of length 2..6,
/// a product of cycles, the odometer on Z_8 and the full shift on two
/// symbols through cylinders of length <= 2.
inline std::vector<ReturnModel> default_transitive_catalog() {
    std::vector<ReturnModel> out;
    out.push_back(finite_model(make_point()));
    for (std::size_t n = 2; n <= 6; ++n) out.push_back(finite_model(make_rotation(n, 1)));
    out.push_back(finite_model(product_system({{make_rotation(2, 1), 1}, {make_rotation(3, 1), 1}})));
    out.push_back(finite_model(make_odometer(3)));
    out.push_back(cylinder_model(SymbolicSystem::full_shift(2, 2), 2));
    return out;
}

}  // namespace fuzzdyn
