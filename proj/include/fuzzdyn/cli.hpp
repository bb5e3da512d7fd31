#pragma once

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fuzzdyn/analysis/metric.hpp"
#include "fuzzdyn/analysis/recurrence.hpp"
#include "fuzzdyn/analysis/theorems.hpp"
#include "fuzzdyn/analysis/transitivity.hpp"
#include "fuzzdyn/catalog.hpp"
#include "fuzzdyn/io.hpp"

namespace fuzzdyn {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { exit_ok = 0, exit_malformed = 2, exit_bound = 3, exit_red_alert = 4 };

struct RunConfig {
    std::string command;
    std::string system = "point";
    std::size_t m = 2;
    std::size_t horizon = 0;  // 0: derived from the eventual period
    std::optional<std::string> eps;
    std::vector<std::string> props{"transitivity"};
    std::string theorem = "transitivity";
    std::optional<std::string> g;
    std::vector<std::size_t> a{1, 2};
    std::string family = "thick";
    std::string level = "base";
    std::string lambda = "1";
    std::size_t cylinder = 2;
    std::size_t samples = 40;
    std::optional<std::string> out;
    std::uint64_t seed = 1;
    bool json = false;
};

inline Json config_to_json(const RunConfig& c) {
    Json j{{"command", c.command}, {"system", c.system},   {"m", c.m},           {"horizon", c.horizon},
           {"props", c.props},     {"theorem", c.theorem}, {"a", c.a},           {"family", c.family},
           {"level", c.level},     {"lambda", c.lambda},   {"cylinder", c.cylinder}, {"samples", c.samples},
           {"seed", c.seed}};
    j["eps"] = c.eps ? Json(*c.eps) : Json(nullptr);
    j["g"] = c.g ? Json(*c.g) : Json(nullptr);
    return j;
}

inline const std::vector<std::string>& check_properties() {
    static const std::vector<std::string> props{
        "transitivity", "weak-mixing",      "weak-mixing-lemma", "mixing",         "f-transitivity",
        "f-mixing",     "a-transitivity",   "mild-mixing",       "periodic-density", "devaney",
        "equicontinuity", "uniform-rigidity", "proximality",     "diam-decay",     "sensitivity",
        "weak-rigidity"};
    return props;
}

namespace detail {

inline bool model_property(const std::string& p) {
    return p == "transitivity" || p == "weak-mixing" || p == "weak-mixing-lemma" || p == "mixing" ||
           p == "f-transitivity" || p == "f-mixing" || p == "a-transitivity" || p == "mild-mixing" ||
           p == "periodic-density" || p == "devaney";
}

inline Json envelope(const RunConfig& cfg) {
    return {{"tool", "fuzzdyn"}, {"version", kVersion}, {"config", config_to_json(cfg)}};
}

inline std::filesystem::path out_dir(const RunConfig& cfg) {
    return cfg.out ? std::filesystem::path(*cfg.out) : std::filesystem::path(".");
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// The system the check runs on: the base, its hyperspace, or a fuzzy slice.
inline SystemMap level_system(const SystemMap& base, const RunConfig& cfg, const Limits& limits) {
    if (cfg.level == "base") return base;
    if (cfg.level == "hyperspace") return lift_system(base, limits);
    const LevelGrid grid(cfg.m);
    if (cfg.level == "fuzzy-all") return fuzzy_lift_system(base, grid, FuzzyConstraint::all(), std::nullopt, limits);
    if (cfg.level == "fuzzy-f0") return fuzzy_lift_system(base, grid, FuzzyConstraint::nonempty(), std::nullopt, limits);
    const auto k = grid.index_of(parse_rational(cfg.lambda));
    if (k == 0) throw InputError("lambda must be positive");
    if (cfg.level == "fuzzy-eq") return fuzzy_lift_system(base, grid, FuzzyConstraint::height_equal(k), std::nullopt, limits);
    if (cfg.level == "fuzzy-geq")
        return fuzzy_lift_system(base, grid, FuzzyConstraint::height_at_least(k), std::nullopt, limits);
    throw InputError("unknown level '" + cfg.level + "' (base, hyperspace, fuzzy-eq, fuzzy-geq, fuzzy-f0, fuzzy-all)");
}

inline ReturnModel symbolic_level_model(const SymbolicSystem& sys, const RunConfig& cfg, const Limits& limits) {
    if (cfg.level == "base") return cylinder_model(sys, cfg.cylinder);
    if (cfg.level == "hyperspace") return vietoris_model(sys, cfg.cylinder, limits);
    if (cfg.level == "fuzzy-eq") {
        const LevelGrid grid(cfg.m);
        const auto k = grid.index_of(parse_rational(cfg.lambda));
        return fuzzy_symbolic_model(sys, cfg.cylinder, grid, k, limits);
    }
    throw InputError("symbolic systems support the levels base, hyperspace and fuzzy-eq");
}

inline Verdict run_model_property(const std::string& p, const ReturnModel& model, const RunConfig& cfg,
                                  const Limits& limits) {
    if (p == "transitivity") return is_transitive(model);
    if (p == "weak-mixing") return is_weakly_mixing(model, WeakMixingMethod::product);
    if (p == "weak-mixing-lemma") return is_weakly_mixing(model, WeakMixingMethod::lemma22);
    if (p == "mixing") return is_mixing(model);
    if (p == "f-transitivity") return is_F_transitive(model, parse_family(cfg.family));
    if (p == "f-mixing") return is_F_mixing(model, parse_family(cfg.family));
    if (p == "a-transitivity") return is_a_transitive(model, cfg.a, limits);
    if (p == "mild-mixing") return is_mildly_mixing_bounded(model, default_transitive_catalog());
    if (p == "periodic-density") return is_periodically_dense(model);
    return is_devaney_chaotic(model);
}

inline Verdict run_metric_property(const std::string& p, const SystemMap& sys, const RunConfig& cfg,
                                   const Limits& limits) {
    const Rational eps = cfg.eps ? parse_rational(*cfg.eps) : default_epsilon(sys.space());
    if (eps <= 0) throw InputError("epsilon must be positive");
    if (p == "equicontinuity") return equicontinuity_modulus(sys, eps, limits).verdict;
    if (p == "uniform-rigidity") return uniform_rigidity(sys, eps, limits).verdict;
    if (p == "proximality") return is_proximal(sys, limits);
    if (p == "diam-decay") return diam_vanishes(sys, limits);
    if (p == "sensitivity") return is_sensitive(sys, eps, limits);
    if (p == "weak-rigidity") {
        return is_weakly_rigid_upto(sys, cfg.horizon ? cfg.horizon : 3, limits);
    }
    throw InputError("unknown property '" + p + "'");
}

inline void require_known_properties(const std::vector<std::string>& props) {
    if (props.empty()) throw InputError("no properties requested");
    const auto& known = check_properties();
    for (const auto& p : props)
        if (std::find(known.begin(), known.end(), p) == known.end()) throw InputError("unknown property '" + p + "'");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

inline int cmd_check(const RunConfig& cfg, std::ostream& out) {
    detail::require_known_properties(cfg.props);
    const auto& limits = default_limits();
    const auto system = parse_system_spec(cfg.system);
    std::vector<Verdict> verdicts;
    if (const auto* base = std::get_if<SystemMap>(&system)) {
        const auto sys = detail::level_system(*base, cfg, limits);
        std::optional<ReturnModel> model;
        for (const auto& p : cfg.props) {
            if (detail::model_property(p)) {
                if (!model) {
                    model = finite_model(sys, cfg.level, std::nullopt, limits);
                    detail::require_pairs(*model, limits);
                }
                verdicts.push_back(detail::run_model_property(p, *model, cfg, limits));
            } else {
                verdicts.push_back(detail::run_metric_property(p, sys, cfg, limits));
            }
            verdicts.back().level = cfg.level;
        }
    } else {
        const auto& sym = std::get<SymbolicSystem>(system);
        const auto model = detail::symbolic_level_model(sym, cfg, limits);
        for (const auto& p : cfg.props) {
            if (!detail::model_property(p)) throw InputError("property '" + p + "' needs a finite system");
            verdicts.push_back(detail::run_model_property(p, model, cfg, limits));
        }
    }

    Json report = detail::envelope(cfg);
    report["system"] = system_to_json(system);
    report["verdicts"] = Json::array();
    for (const auto& v : verdicts) report["verdicts"].push_back(verdict_to_json(v));
    if (cfg.out) {
        const auto dir = detail::out_dir(cfg);
        write_atomically(dir / "check.json", detail::dump(report));
        write_atomically(dir / "check.csv", verdicts_csv(verdicts));
    }
    if (cfg.json) {
        out << detail::dump(report);
    } else {
        out << system_summary(system) << "\n";
        for (const auto& v : verdicts) out << "  " << describe(v) << "\n";
    }
    return exit_ok;
}

inline TheoremConfig theorem_config(const RunConfig& cfg) {
    TheoremConfig tc;
    tc.system = parse_system_spec(cfg.system);
    tc.m = cfg.m;
    if (cfg.g) {
        tc.g = parse_g_spec(*cfg.g);
        if (tc.g->grid().m != cfg.m)
            throw InputError("g is defined on grid m = " + std::to_string(tc.g->grid().m) + " but --m is " +
                             std::to_string(cfg.m));
    }
    if (cfg.eps) tc.epsilon = parse_rational(*cfg.eps);
    tc.a = cfg.a;
    tc.family = parse_family(cfg.family);
    tc.cylinder_length = cfg.cylinder;
    tc.samples = cfg.samples;
    if (cfg.horizon) tc.max_n = cfg.horizon;
    tc.seed = cfg.seed;
    tc.limits = default_limits();
    return tc;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    if (!known_theorem(cfg.theorem)) throw InputError("unknown theorem id '" + cfg.theorem + "'");
    const auto tc = theorem_config(cfg);
    const auto report = verify_theorem(cfg.theorem, tc);

    Json doc = detail::envelope(cfg);
    doc["system"] = system_to_json(tc.system);
    doc["report"] = report_to_json(report);
    const auto dir = detail::out_dir(cfg);
    if (cfg.out) {
        write_atomically(dir / ("verify-" + cfg.theorem + ".json"), detail::dump(doc));
        write_atomically(dir / ("verify-" + cfg.theorem + ".csv"), report_csv(report));
    }
    if (report.red_alert) write_atomically(dir / ("replay-" + cfg.theorem + ".json"), detail::dump(doc));

    if (cfg.json) {
        out << detail::dump(doc);
    } else {
        out << report.theorem << " on " << report.system << "\n";
        for (const auto& it : report.items) {
            out << "  " << it.item << " " << it.statement << ": " << describe(it.verdict);
            if (!it.in_equivalence) out << " [side]";
            out << "\n";
        }
        if (!report.matrix.empty()) {
            out << "  matrix:\n";
            for (const auto& row : report.matrix) out << "    " << row << "\n";
        }
        if (!report.table_header.empty()) {
            out << "  " << csv_row(report.table_header);
            for (const auto& row : report.table) out << "  " << csv_row(row);
        }
        out << (report.red_alert ? "RED ALERT: " : report.consistent ? "consistent: " : "inconsistent: ")
            << report.detail << "\n";
        if (report.red_alert) out << "replay written to " << (dir / ("replay-" + cfg.theorem + ".json")).string() << "\n";
    }
    return report.red_alert ? exit_red_alert : exit_ok;
}

struct PlotData {
    std::vector<std::pair<std::size_t, Rational>> diam;
    std::vector<std::pair<std::size_t, Rational>> displacement;
    std::vector<std::pair<Rational, Rational>> modulus;  // delta = 0 where no delta works
};

/// n runs over 0..H with H = preperiod + 2*period unless a horizon is given.
inline PlotData plot_data(const SystemMap& sys, std::size_t horizon, const Limits& limits = default_limits()) {
    const auto ep = eventual_period(sys, limits);
    const std::size_t last = horizon ? horizon : ep.preperiod + 2 * ep.period;
    if (last > limits.max_horizon) throw BoundError("max_horizon", "plot horizon " + std::to_string(last));
    PlotData out;
    const auto decay = diam_decay(sys, last + 1);
    for (std::size_t n = 0; n <= last; ++n) out.diam.emplace_back(n, decay[n]);
    std::vector<std::uint32_t> current(sys.size());
    for (std::size_t x = 0; x < sys.size(); ++x) current[x] = static_cast<std::uint32_t>(x);
    for (std::size_t n = 0; n <= last; ++n) {
        std::uint32_t worst = 0;
        for (std::size_t x = 0; x < sys.size(); ++x) worst = std::max(worst, sys.space().rank(current[x], x));
        out.displacement.emplace_back(n, sys.space().value_of_rank(worst));
        for (auto& c : current) c = sys(c);
    }
    for (const auto& eps : sys.space().scale()) {
        if (eps <= 0) continue;
        const auto mod = equicontinuity_modulus(sys, eps, limits);
        out.modulus.emplace_back(eps, mod.delta.value_or(Rational(0)));
    }
    return out;
}

inline int cmd_plotdata(const RunConfig& cfg, std::ostream& out) {
    const auto system = parse_system_spec(cfg.system);
    const auto* sys = std::get_if<SystemMap>(&system);
    if (!sys) throw InputError("plotdata needs a finite system");
    const auto data = plot_data(*sys, cfg.horizon);
    std::string diam = csv_row({"n", "diam"}), disp = csv_row({"n", "max_displacement"}),
                modulus = csv_row({"epsilon", "delta"});
    for (const auto& [n, d] : data.diam) diam += csv_row({std::to_string(n), to_string(d)});
    for (const auto& [n, d] : data.displacement) disp += csv_row({std::to_string(n), to_string(d)});
    for (const auto& [e, d] : data.modulus) modulus += csv_row({to_string(e), to_string(d)});
    const auto dir = detail::out_dir(cfg);
    const std::vector<std::pair<std::string, const std::string*>> files{
        {"diam.csv", &diam}, {"displacement.csv", &disp}, {"modulus.csv", &modulus}};
    for (const auto& [name, content] : files) write_atomically(dir / name, *content);
    if (cfg.json) {
        Json doc = detail::envelope(cfg);
        doc["system"] = system_to_json(system);
        doc["files"] = Json::array();
        for (const auto& [name, content] : files) doc["files"].push_back((dir / name).string());
        out << detail::dump(doc);
    } else {
        for (const auto& [name, content] : files) out << (dir / name).string() << "\n";
    }
    return exit_ok;
}

inline int cmd_catalog(const RunConfig& cfg, std::ostream& out) {
    if (cfg.json) {
        Json doc{{"tool", "fuzzdyn"}, {"version", kVersion}, {"generators", Json::array()}, {"theorems", Json::array()},
                 {"properties", check_properties()}};
        for (const auto& e : generator_entries())
            doc["generators"].push_back({{"name", e.name}, {"syntax", e.syntax}, {"description", e.description}});
        for (const auto& e : theorem_entries()) doc["theorems"].push_back({{"id", e.name}, {"statement", e.description}});
        out << detail::dump(doc);
        return exit_ok;
    }
    out << "generators:\n";
    for (const auto& e : generator_entries()) out << "  " << e.syntax << "  " << e.description << "\n";
    out << "theorems:\n";
    for (const auto& e : theorem_entries()) out << "  " << e.name << "  " << e.description << "\n";
    out << "properties:\n ";
    for (const auto& p : check_properties()) out << " " << p;
    out << "\n";
    return exit_ok;
}

inline int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.eps && parse_rational(*cfg.eps) <= 0) throw InputError("epsilon must be positive");
        if (cfg.command == "check") return cmd_check(cfg, out);
        if (cfg.command == "verify") return cmd_verify(cfg, out);
        if (cfg.command == "plotdata") return cmd_plotdata(cfg, out);
        if (cfg.command == "catalog") return cmd_catalog(cfg, out);
        throw InputError("unknown command '" + cfg.command + "'");
    } catch (const BoundError& e) {
        err << "bound exceeded: " << e.what() << "\n";
        return exit_bound;
    } catch (const InputError& e) {
        err << "malformed input: " << e.what() << "\n";
        return exit_malformed;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "cannot write output: " << e.what() << "\n";
        return exit_malformed;
    }
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    for (auto& part : detail::split(s, ','))
        if (!part.empty()) out.push_back(part);
    return out;
}

/// Parse argv and run. Output goes to the given streams so tests can capture it.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Dynamics of finite systems, their hyperspace and fuzzy lifts", "fuzzdyn"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    RunConfig cfg;
    std::string props, a;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--system", cfg.system, "system spec, file:path or inline JSON");
        sub->add_option("--m", cfg.m, "fuzzy grid size");
        sub->add_option("--eps", cfg.eps, "epsilon as p/q");
        sub->add_option("--horizon", cfg.horizon, "iterate horizon");
        sub->add_option("--out", cfg.out, "output directory");
        sub->add_option("--seed", cfg.seed, "seed for randomized checks");
        sub->add_option("--family", cfg.family, "infinite, cofinite, syndetic, thick or ip");
        sub->add_option("--a", a, "exponents for a-transitivity, comma separated");
        sub->add_option("--cylinder", cfg.cylinder, "cylinder length for symbolic systems");
        sub->add_flag("--json", cfg.json, "machine-readable stdout");
    };
    auto* check = app.add_subcommand("check", "run property checkers");
    common(check);
    check->add_option("--props", props, "comma separated properties");
    check->add_option("--level", cfg.level, "base, hyperspace, fuzzy-eq, fuzzy-geq, fuzzy-f0 or fuzzy-all");
    check->add_option("--lambda", cfg.lambda, "height for fuzzy-eq and fuzzy-geq");
    auto* verify = app.add_subcommand("verify", "verify a theorem's equivalences");
    common(verify);
    verify->add_option("--theorem", cfg.theorem, "theorem id")->required();
    verify->add_option("--g", cfg.g, "g function as file:path or inline JSON");
    verify->add_option("--samples", cfg.samples, "random samples for cut-lemma");
    auto* plot = app.add_subcommand("plotdata", "write diam, displacement and modulus CSVs");
    common(plot);
    auto* catalog = app.add_subcommand("catalog", "list generators, theorems and properties");
    catalog->add_flag("--json", cfg.json, "machine-readable stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "malformed input: " << e.what() << "\n";
        return exit_malformed;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    if (!props.empty()) cfg.props = split_list(props);
    if (!a.empty()) {
        cfg.a.clear();
        try {
            for (const auto& e : split_list(a)) cfg.a.push_back(detail::parse_count(e, "exponent"));
        } catch (const InputError& e) {
            err << "malformed input: " << e.what() << "\n";
            return exit_malformed;
        }
    }
    return dispatch(cfg, out, err);
}

}  // namespace fuzzdyn
