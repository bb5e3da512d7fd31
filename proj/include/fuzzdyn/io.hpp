#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fuzzdyn/analysis/theorems.hpp"
#include "fuzzdyn/analysis/verdict.hpp"
#include "fuzzdyn/catalog.hpp"
#include "fuzzdyn/families.hpp"
#include "fuzzdyn/fuzzy.hpp"
#include "fuzzdyn/spaces.hpp"
#include "fuzzdyn/symbolic.hpp"

namespace fuzzdyn {

// nlohmann::json keeps object keys sorted, which is the canonical order.
using Json = nlohmann::json;

namespace detail {

inline const Json& require(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) throw InputError(std::string("missing field '") + key + "'");
    return doc.at(key);
}

inline std::size_t require_count(const Json& doc, const char* key) {
    const auto& v = require(doc, key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw InputError(std::string("field '") + key + "' must be a nonnegative integer");
    return v.get<std::size_t>();
}

inline Rational rational_from(const Json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    throw InputError("rationals are written as \"p/q\" strings");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string part;
    std::istringstream in(s);
    while (std::getline(in, part, sep)) out.push_back(part);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

inline std::uint64_t parse_count(const std::string& s, const std::string& what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw InputError(what + " must be a nonnegative integer, got '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw InputError(what + " is out of range: '" + s + "'");
    }
}

inline std::int64_t parse_signed(const std::string& s, const std::string& what) {
    if (!s.empty() && s[0] == '-') return -static_cast<std::int64_t>(parse_count(s.substr(1), what));
    return static_cast<std::int64_t>(parse_count(s, what));
}

inline Snap parse_snap(const std::string& s) {
    if (s == "down") return Snap::down;
    if (s == "nearest") return Snap::nearest;
    throw InputError("snap must be 'down' or 'nearest', got '" + s + "'");
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError("malformed JSON in " + origin + ": " + e.what());
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Systems
// ---------------------------------------------------------------------------

inline SystemMap finite_system_from_json(const Json& doc) {
    const auto& points = detail::require(doc, "points");
    const auto& dist = detail::require(doc, "distances");
    const auto& map = detail::require(doc, "map");
    if (!points.is_array() || !dist.is_array() || !map.is_array())
        throw InputError("points, distances and map must be arrays");
    std::vector<std::string> labels;
    for (const auto& p : points) labels.push_back(p.is_string() ? p.get<std::string>() : p.dump());
    std::vector<std::vector<Rational>> table;
    for (const auto& row : dist) {
        if (!row.is_array()) throw InputError("each distance row must be an array");
        std::vector<Rational> r;
        for (const auto& d : row) r.push_back(detail::rational_from(d));
        table.push_back(std::move(r));
    }
    auto space = MetricSpace::from_table(labels, table);
    const auto violations = validate_metric(space);
    if (!violations.empty()) {
        std::string where;
        for (auto p : violations.front().points) where += (where.empty() ? "" : ",") + labels[p];
        throw InputError("distance table violates the metric axioms: " + to_string(violations.front().kind) + " at (" +
                         where + "), " + std::to_string(violations.size()) + " violation(s) in total");
    }
    if (map.size() != labels.size()) throw InputError("map must list one image per point");
    SystemMap::Table t;
    for (const auto& m : map) {
        if (m.is_number_integer()) {
            const auto v = m.get<std::int64_t>();
            if (v < 0 || static_cast<std::size_t>(v) >= labels.size()) throw InputError("map image out of range");
            t.push_back(static_cast<std::uint32_t>(v));
        } else if (m.is_string()) {
            const auto it = std::find(labels.begin(), labels.end(), m.get<std::string>());
            if (it == labels.end()) throw InputError("map names unknown point '" + m.get<std::string>() + "'");
            t.push_back(static_cast<std::uint32_t>(it - labels.begin()));
        } else {
            throw InputError("map entries are point indices or point ids");
        }
    }
    std::string kind = doc.value("kind", std::string("finite"));
    return SystemMap(std::move(space), std::move(t), {kind, {}, nullptr});
}

inline SymbolicSystem symbolic_from_json(const Json& doc) {
    const auto resolution = detail::require_count(doc, "resolution");
    if (doc.contains("symbols") && !doc.contains("alphabet"))
        return SymbolicSystem::full_shift(detail::require_count(doc, "symbols"), resolution);
    const auto& alphabet = detail::require(doc, "alphabet");
    const auto& adjacency = detail::require(doc, "adjacency");
    if (!alphabet.is_array() || !adjacency.is_array()) throw InputError("alphabet and adjacency must be arrays");
    std::vector<std::string> names;
    for (const auto& a : alphabet) names.push_back(a.is_string() ? a.get<std::string>() : a.dump());
    SymbolicSystem::Matrix m;
    for (const auto& row : adjacency) {
        if (!row.is_array()) throw InputError("adjacency rows must be arrays");
        std::vector<bool> r;
        for (const auto& b : row) {
            if (b.is_boolean()) r.push_back(b.get<bool>());
            else if (b.is_number_integer()) r.push_back(b.get<std::int64_t>() != 0);
            else throw InputError("adjacency entries are 0/1 or booleans");
        }
        m.push_back(std::move(r));
    }
    return SymbolicSystem(std::move(names), std::move(m), resolution);
}

/// {"kind": ..., parameters}; see the README for the accepted kinds.
inline AnySystem system_from_json(const Json& doc) {
    if (!doc.is_object()) throw InputError("system description must be a JSON object");
    const auto& kind_field = detail::require(doc, "kind");
    if (!kind_field.is_string()) throw InputError("field 'kind' must be a string");
    const auto kind = kind_field.get<std::string>();
    if (kind == "finite" || kind == "hyperspace_lift" || kind == "fuzzy_lift") return finite_system_from_json(doc);
    if (kind == "point") return make_point();
    if (kind == "rotation")
        return make_rotation(detail::require_count(doc, "n"), detail::require(doc, "step").get<std::int64_t>());
    if (kind == "multiply") return make_multiply(detail::require_count(doc, "n"), detail::require_count(doc, "a"));
    if (kind == "reflection") return make_reflection(detail::require_count(doc, "n"));
    if (kind == "constant") return make_constant(detail::require_count(doc, "n"), doc.value("target", std::size_t{0}));
    if (kind == "odometer") {
        const auto k = detail::require_count(doc, "k");
        if (k > 20) throw InputError("odometer needs k <= 20");
        return make_odometer(k);
    }
    if (kind == "grid_map") {
        const auto m = detail::require_count(doc, "m");
        const auto snap = detail::parse_snap(doc.value("snap", std::string("down")));
        if (doc.contains("breakpoints")) {
            PiecewiseLinear f;
            for (const auto& bp : doc.at("breakpoints")) {
                if (!bp.is_array() || bp.size() != 2) throw InputError("breakpoints are [x, y] pairs");
                f.breakpoints.emplace_back(detail::rational_from(bp[0]), detail::rational_from(bp[1]));
            }
            return make_grid_interval_map(f, m, snap);
        }
        return make_named_grid_map(detail::require(doc, "map").get<std::string>(), m, snap);
    }
    if (kind == "sft" || kind == "fullshift") return symbolic_from_json(doc);
    throw InputError("unknown system kind '" + kind + "'");
}

inline Json space_to_json(const MetricSpace& space) {
    Json points = space.labels();
    Json dist = Json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < space.size(); ++j) row.push_back(to_string(space.distance(i, j)));
        dist.push_back(std::move(row));
    }
    return {{"points", std::move(points)}, {"distances", std::move(dist)}};
}

inline Json provenance_to_json(const Provenance& p) {
    Json params = Json::object();
    for (const auto& [k, v] : p.params) {
        if (params.contains(k)) {
            if (!params[k].is_array()) params[k] = Json::array({params[k]});
            params[k].push_back(v);
        } else {
            params[k] = v;
        }
    }
    Json out{{"kind", p.kind}, {"params", std::move(params)}};
    if (p.base) out["base"] = provenance_to_json(*p.base);
    return out;
}

/// Generated systems are written as their generator parameters; everything
/// else as a full table with its provenance.
inline Json system_to_json(const SystemMap& sys) {
    const auto& p = sys.provenance();
    auto param = [&](const std::string& key) -> std::string {
        for (const auto& [k, v] : p.params)
            if (k == key) return v;
        return {};
    };
    if (!p.base) {
        if (p.kind == "point") return {{"kind", "point"}};
        if (p.kind == "rotation")
            return {{"kind", "rotation"}, {"n", std::stoull(param("n"))}, {"step", std::stoll(param("step"))}};
        if (p.kind == "multiply") return {{"kind", "multiply"}, {"n", std::stoull(param("n"))}, {"a", std::stoull(param("a"))}};
        if (p.kind == "reflection") return {{"kind", "reflection"}, {"n", std::stoull(param("n"))}};
        if (p.kind == "constant")
            return {{"kind", "constant"}, {"n", std::stoull(param("n"))}, {"target", std::stoull(param("target"))}};
        if (p.kind == "odometer") return {{"kind", "odometer"}, {"k", std::stoull(param("k"))}};
        if (p.kind == "grid_map" && param("map") != "custom")
            return {{"kind", "grid_map"}, {"map", param("map")}, {"m", std::stoull(param("m"))}, {"snap", param("snap")}};
    }
    Json out = space_to_json(sys.space());
    const bool lifted = p.kind == "hyperspace_lift" || p.kind == "fuzzy_lift";
    out["kind"] = lifted ? p.kind : std::string("finite");
    out["map"] = sys.table();
    out["provenance"] = provenance_to_json(p);
    return out;
}

inline Json system_to_json(const SymbolicSystem& sys) {
    if (sys.is_full_shift())
        return {{"kind", "fullshift"}, {"symbols", sys.alphabet().size()}, {"resolution", sys.resolution()}};
    Json adj = Json::array();
    for (const auto& row : sys.adjacency()) {
        Json r = Json::array();
        for (bool b : row) r.push_back(b ? 1 : 0);
        adj.push_back(std::move(r));
    }
    return {{"kind", "sft"}, {"alphabet", sys.alphabet()}, {"adjacency", std::move(adj)}, {"resolution", sys.resolution()}};
}

inline Json system_to_json(const AnySystem& sys) {
    return std::visit([](const auto& s) { return system_to_json(s); }, sys);
}

/// Command-line system spec: "rotation:12,1", "gridmap:half,8", "file:sys.json",
/// inline JSON, ...
inline AnySystem parse_system_spec(const std::string& spec) {
    if (spec.empty()) throw InputError("empty system spec");
    if (spec.front() == '{') return system_from_json(detail::parse_json_text(spec, "inline system"));
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "file") {
        if (rest.empty()) throw InputError("file: needs a path");
        return system_from_json(detail::parse_json_text(detail::read_file(rest), "'" + rest + "'"));
    }
    const auto args = rest.empty() ? std::vector<std::string>{} : detail::split(rest, ',');
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (args.size() < lo || args.size() > hi)
            throw InputError("'" + name + "' takes " + std::to_string(lo) + (lo == hi ? "" : "-" + std::to_string(hi)) +
                             " argument(s), got '" + spec + "'");
    };
    auto count = [&](std::size_t i, const char* what) { return detail::parse_count(args[i], what); };
    if (name == "point") {
        need(0, 0);
        return make_point();
    }
    if (name == "rotation") {
        need(2, 2);
        return make_rotation(count(0, "n"), detail::parse_signed(args[1], "step"));
    }
    if (name == "multiply") {
        need(2, 2);
        return make_multiply(count(0, "n"), count(1, "a"));
    }
    if (name == "reflection") {
        need(1, 1);
        return make_reflection(count(0, "n"));
    }
    if (name == "constant") {
        need(1, 2);
        return make_constant(count(0, "n"), args.size() > 1 ? count(1, "target") : 0);
    }
    if (name == "odometer") {
        need(1, 1);
        const auto k = count(0, "k");
        if (k > 20) throw InputError("odometer needs k <= 20");
        return make_odometer(k);
    }
    if (name == "gridmap") {
        need(2, 3);
        return make_named_grid_map(args[0], count(1, "m"), args.size() > 2 ? detail::parse_snap(args[2]) : Snap::down);
    }
    if (name == "fullshift") {
        need(2, 2);
        return SymbolicSystem::full_shift(count(0, "symbols"), count(1, "k"));
    }
    throw InputError("unknown system '" + name + "'");
}

// ---------------------------------------------------------------------------
// Fuzzy sets and g
// ---------------------------------------------------------------------------

/// {"grid_m": m, "grades": {point id: "p/q"}}; unlisted points have grade 0.
inline Json fuzzy_to_json(const FuzzySet& a) {
    Json grades = Json::object();
    for (std::size_t x = 0; x < a.levels().size(); ++x) grades[a.base().label(x)] = to_string(a.grade(x));
    return {{"grid_m", a.grid().m}, {"grades", std::move(grades)}};
}

inline FuzzySet fuzzy_from_json(const Json& doc, const MetricSpace& base) {
    const LevelGrid grid(detail::require_count(doc, "grid_m"));
    const auto& grades = detail::require(doc, "grades");
    if (!grades.is_object()) throw InputError("grades must map point ids to grades");
    FuzzySet::Levels levels(base.size(), 0);
    const auto& labels = base.labels();
    for (const auto& [id, g] : grades.items()) {
        const auto it = std::find(labels.begin(), labels.end(), id);
        if (it == labels.end()) throw InputError("grade for unknown point '" + id + "'");
        levels[static_cast<std::size_t>(it - labels.begin())] = static_cast<std::uint8_t>(grid.index_of(detail::rational_from(g)));
    }
    return FuzzySet(base, grid, std::move(levels));
}

/// {"grid_m": m, "table": {"level": "g(level)"}} over all of {0, 1/m, ..., 1},
/// or "table" as an array of m+1 values.
inline Json gfunction_to_json(const GFunction& g) {
    Json table = Json::object();
    for (std::size_t k = 0; k < g.table().size(); ++k) table[to_string(g.grid().value(k))] = to_string(g.grid().value(g(k)));
    return {{"grid_m", g.grid().m}, {"table", std::move(table)}};
}

inline GFunction gfunction_from_json(const Json& doc) {
    const LevelGrid grid(detail::require_count(doc, "grid_m"));
    const auto& table = detail::require(doc, "table");
    std::vector<std::uint8_t> t(grid.m + 1, 0);
    std::vector<bool> seen(grid.m + 1, false);
    auto put = [&](std::size_t k, const Json& v) {
        t[k] = static_cast<std::uint8_t>(grid.index_of(detail::rational_from(v)));
        seen[k] = true;
    };
    if (table.is_array()) {
        if (table.size() != grid.m + 1) throw InputError("g table must list m + 1 values");
        for (std::size_t k = 0; k <= grid.m; ++k) put(k, table[k]);
    } else if (table.is_object()) {
        for (const auto& [level, v] : table.items()) put(grid.index_of(parse_rational(level)), v);
    } else {
        throw InputError("g table must be an object or an array");
    }
    for (std::size_t k = 0; k <= grid.m; ++k)
        if (!seen[k]) throw InputError("g table misses level " + to_string(grid.value(k)));
    return GFunction(grid, std::move(t));
}

inline GFunction parse_g_spec(const std::string& spec) {
    if (spec.rfind("file:", 0) == 0) {
        const auto path = spec.substr(5);
        return gfunction_from_json(detail::parse_json_text(detail::read_file(path), "'" + path + "'"));
    }
    return gfunction_from_json(detail::parse_json_text(spec, "inline g"));
}

// ---------------------------------------------------------------------------
// Index sets, verdicts, reports
// ---------------------------------------------------------------------------

inline Json index_set_to_json(const IndexSet& s) {
    Json out{{"horizon", s.horizon()}, {"members", s.members()}};
    if (s.exact()) {
        out["preperiod"] = s.preperiod();
        out["period"] = s.period();
    }
    return out;
}

inline IndexSet index_set_from_json(const Json& doc) {
    const auto h = detail::require_count(doc, "horizon");
    const auto& members = detail::require(doc, "members");
    if (!members.is_array()) throw InputError("members must be an array");
    IndexSet s(h);
    for (const auto& m : members) {
        if (!m.is_number_integer() || m.get<std::int64_t>() < 0) throw InputError("members are nonnegative integers");
        s.insert(m.get<std::size_t>());
    }
    if (doc.contains("period")) {
        const auto p = detail::require_count(doc, "period");
        return IndexSet::eventually_periodic(s.bits(), p);
    }
    return s;
}

inline Json family_verdict_to_json(const FamilyVerdict& v) {
    Json thresholds = Json::object();
    for (const auto& [k, t] : v.thresholds) thresholds[k] = t;
    return {{"kind", v.kind}, {"verdict", v.holds}, {"exact", v.exact}, {"witness", v.witness},
            {"horizon", v.horizon}, {"thresholds", std::move(thresholds)}};
}

inline Json verdict_to_json(const Verdict& v) {
    Json w = Json::array();
    for (const auto& [k, x] : v.witnesses) w.push_back({k, x});
    Json out{{"property", v.property}, {"level", v.level},           {"verdict", to_string(v.status)},
             {"exactness", to_string(v.exactness)}, {"horizon", v.horizon}, {"witnesses", std::move(w)}};
    if (!v.note.empty()) out["note"] = v.note;
    return out;
}

inline Json report_to_json(const EquivalenceReport& r) {
    Json items = Json::array();
    for (const auto& it : r.items) {
        Json j = verdict_to_json(it.verdict);
        j["item"] = it.item;
        j["statement"] = it.statement;
        j["in_equivalence"] = it.in_equivalence;
        j["expected"] = it.expected ? Json(*it.expected) : Json(nullptr);
        items.push_back(std::move(j));
    }
    Json out{{"theorem", r.theorem}, {"system", r.system},       {"items", std::move(items)},
             {"matrix", r.matrix},   {"consistent", r.consistent}, {"red_alert", r.red_alert},
             {"detail", r.detail}};
    if (!r.table_header.empty()) out["table"] = {{"header", r.table_header}, {"rows", r.table}};
    return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
    return out + "\n";
}

inline std::string verdicts_csv(const std::vector<Verdict>& verdicts) {
    std::string out = csv_row({"property", "level", "verdict", "exactness", "horizon"});
    for (const auto& v : verdicts)
        out += csv_row({v.property, v.level, to_string(v.status), to_string(v.exactness), std::to_string(v.horizon)});
    return out;
}

inline std::string report_csv(const EquivalenceReport& r) {
    std::string out = csv_row({"item", "statement", "property", "level", "verdict", "exactness", "in_equivalence", "expected"});
    for (const auto& it : r.items)
        out += csv_row({it.item, it.statement, it.verdict.property, it.verdict.level, to_string(it.verdict.status),
                        to_string(it.verdict.exactness), it.in_equivalence ? "true" : "false",
                        it.expected ? (*it.expected ? "true" : "false") : ""});
    return out;
}

/// Write through a temporary file and rename, so readers never see a
/// partial file.
inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw InputError("failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace fuzzdyn
