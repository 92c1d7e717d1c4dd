#include "agodd/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "agodd/dsl.hpp"
#include "agodd/process.hpp"
#include "agodd/verify.hpp"

namespace agodd {

namespace {

// Thrown by helpers to unwind with the right process exit code.
struct ExitWith {
    int code;
};

std::string slurp(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "error: cannot read " << path << "\n";
        throw ExitWith{3};
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void print_diagnostics(const std::string& file,
                       const std::vector<Diagnostic>& diagnostics,
                       std::ostream& err) {
    for (const auto& d : diagnostics) {
        err << file << ": " << severity_name(d.severity) << " [" << d.code
            << "] " << d.message << "\n";
    }
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics)
        if (d.severity == Severity::error) return true;
    return false;
}

AgOdd load_odd(const std::string& path, std::ostream& err) {
    std::string text = slurp(path, err);
    auto result = parse_odd(text, path);
    if (!result) {
        err << result.error().message() << "\n";
        throw ExitWith{3};
    }
    return result.take();
}

// Parses, validates and gates on errors; warnings only get printed.
AgOdd load_valid_odd(const std::string& path, std::ostream& err) {
    AgOdd odd = load_odd(path, err);
    auto diagnostics = validate_model(odd);
    print_diagnostics(path, diagnostics, err);
    if (has_errors(diagnostics)) throw ExitWith{3};
    return odd;
}

std::vector<Scenario> load_scenarios(const std::vector<std::string>& paths,
                                     const AgOdd& odd, std::ostream& err) {
    std::vector<Scenario> all;
    bool bad = false;
    for (const auto& path : paths) {
        std::string text = slurp(path, err);
        auto result = parse_scenarios(text, path);
        if (!result) {
            err << result.error().message() << "\n";
            throw ExitWith{3};
        }
        for (auto& s : result.take()) {
            auto diagnostics = validate_scenario(s, odd);
            print_diagnostics(path, diagnostics, err);
            bad = bad || has_errors(diagnostics);
            all.push_back(std::move(s));
        }
    }
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j)
            if (all[i].name == all[j].name) {
                err << "error [duplicate-scenario] two scenarios are named \""
                    << all[i].name << "\"\n";
                bad = true;
            }
    if (bad) throw ExitWith{3};
    return all;
}

int default_grid(std::ostream& err) {
    const char* env = std::getenv("AGODD_GRID");
    if (!env) return 100;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 1000000) {
        err << "error: AGODD_GRID must be a positive integer, got '" << env
            << "'\n";
        throw ExitWith{4};
    }
    return static_cast<int>(v);
}

std::string render_state(const WorldState& state) {
    std::string out;
    for (const auto& [dim, value] : state.values) {
        if (!out.empty()) out += ", ";
        if (const auto* q = std::get_if<Quantity>(&value)) {
            out += dim + " = " + format_number(q->value);
            if (!q->unit.empty()) out += " " + q->unit;
        } else {
            out += dim + " = " + quote(std::get<std::string>(value));
        }
    }
    for (const auto& [unit, total] : state.elapsed) {
        if (!out.empty()) out += ", ";
        out += "elapsed(" + unit + ") = " + format_number(total);
    }
    return out.empty() ? "(empty)" : out;
}

std::string render_tag_set(const std::set<CdvTag>& tags) {
    std::string out;
    for (const auto& t : tags) {
        if (!out.empty()) out += ", ";
        out += render_tag(t);
    }
    return out.empty() ? "(none)" : out;
}

nlohmann::ordered_json coverage_json(const CoverageReport& coverage,
                                     const std::vector<GapRegion>& gaps) {
    nlohmann::ordered_json j;
    j["schema"] = "agodd-coverage/1";
    nlohmann::ordered_json cov;
    cov["overall"] = coverage.overall;
    cov["grid"] = coverage.grid;
    cov["per_dimension"] = nlohmann::ordered_json::object();
    for (const auto& [name, ratio] : coverage.per_dimension)
        cov["per_dimension"][name] = ratio;
    j["coverage"] = std::move(cov);
    j["gaps"] = nlohmann::ordered_json::array();
    for (const auto& gap : gaps) {
        nlohmann::ordered_json g;
        for (const auto& e : gap.extents) {
            if (e.numeric)
                g[e.dimension] = {e.range.lo, e.range.hi};
            else
                g[e.dimension] = e.labels;
        }
        j["gaps"].push_back(std::move(g));
    }
    return j;
}

int cmd_check(const std::string& odd_path,
              const std::vector<std::string>& scenario_paths, std::ostream& out,
              std::ostream& err) {
    AgOdd odd = load_odd(odd_path, err);
    auto diagnostics = validate_model(odd);
    auto process_diags = check_processes(odd);
    diagnostics.insert(diagnostics.end(), process_diags.begin(),
                       process_diags.end());
    print_diagnostics(odd_path, diagnostics, err);
    bool bad = has_errors(diagnostics);
    if (!bad && !scenario_paths.empty()) {
        try {
            load_scenarios(scenario_paths, odd, err);
        } catch (const ExitWith&) {
            bad = true;
        }
    }
    if (bad) return 3;
    out << "ok: " << odd_path << "\n";
    return 0;
}

int cmd_verify(const std::string& odd_path,
               const std::vector<std::string>& scenario_paths,
               const VerifyConfig& config, bool json, std::ostream& out,
               std::ostream& err) {
    AgOdd odd = load_valid_odd(odd_path, err);
    auto scenarios = load_scenarios(scenario_paths, odd, err);
    IterationReport report = verify_iteration(odd, scenarios, config);
    out << (json ? report_json(report) : report_text(report));
    switch (report.verdict) {
        case Verdict::verified: return 0;
        case Verdict::needs_odd_revision: return 1;
        case Verdict::needs_scenarios: return 2;
    }
    return 0;
}

int cmd_coverage(const std::string& odd_path,
                 const std::vector<std::string>& scenario_paths, int grid,
                 bool json, std::ostream& out, std::ostream& err) {
    AgOdd odd = load_valid_odd(odd_path, err);
    auto scenarios = load_scenarios(scenario_paths, odd, err);
    CoverageReport report = coverage(odd, scenarios, grid);
    auto gaps = find_gaps(odd, scenarios, grid);
    if (json) {
        out << coverage_json(report, gaps).dump(2) << "\n";
    } else {
        out << "coverage: " << format_number(report.overall) << " (grid "
            << report.grid << ")\n";
        for (const auto& [name, ratio] : report.per_dimension)
            out << "  " << name << ": " << format_number(ratio) << "\n";
        for (const auto& gap : gaps) out << "gap: " << render_gap(gap) << "\n";
    }
    return report.overall >= 1.0 ? 0 : 2;
}

int cmd_diff(const std::string& before_path, const std::string& after_path,
             std::ostream& out, std::ostream& err) {
    AgOdd before = load_odd(before_path, err);
    AgOdd after = load_odd(after_path, err);
    OddDiff diff = diff_odds(before, after);
    if (diff.empty()) {
        out << "(no differences)\n";
        return 0;
    }
    for (const auto& r : diff.removals)
        out << "removed: " << render_path(r.path) << "\n";
    for (const auto& a : diff.additions) {
        AttrPath path = a.parent;
        path.push_back(a.node.name);
        out << "added: " << render_path(path);
        if (a.node.iteration) out << " (iter " << *a.node.iteration << ")";
        out << "\n";
    }
    for (const auto& c : diff.mode_changes)
        out << "mode: " << render_path(c.path) << ": " << mode_name(c.from)
            << " -> " << mode_name(c.to) << "\n";
    for (const auto& c : diff.constraint_changes)
        out << "constraints: " << render_path(c.path) << "\n";
    for (const auto& c : diff.tag_changes)
        out << "tags: " << render_path(c.path) << "\n";
    for (const auto& c : diff.iteration_changes)
        out << "iter: " << render_path(c.path) << "\n";
    for (const auto& c : diff.other_changes) out << "other: " << c << "\n";
    return 0;
}

int cmd_simulate(const std::string& odd_path, const std::string& events_path,
                 const std::vector<std::string>& state_args, std::ostream& out,
                 std::ostream& err) {
    AgOdd odd = load_valid_odd(odd_path, err);
    std::string text = slurp(events_path, err);
    auto result = parse_events(text, events_path);
    if (!result) {
        err << result.error().message() << "\n";
        throw ExitWith{3};
    }
    WorldState state;
    for (const auto& arg : state_args) {
        size_t eq = arg.find('=');
        if (eq == std::string::npos || eq == 0) {
            err << "error: --state expects dim=value, got '" << arg << "'\n";
            throw ExitWith{4};
        }
        std::string dim_name = arg.substr(0, eq);
        std::string value = arg.substr(eq + 1);
        const DimensionDecl* dim = odd.find_dimension(dim_name);
        if (!dim) {
            err << "error [unknown-dimension] '" << dim_name
                << "' is not declared\n";
            throw ExitWith{3};
        }
        if (dim->is_numeric()) {
            char* end = nullptr;
            double v = std::strtod(value.c_str(), &end);
            if (end == value.c_str() || *end != '\0') {
                err << "error: '" << value << "' is not a number for '"
                    << dim_name << "'\n";
                throw ExitWith{3};
            }
            state.values[dim_name] = Quantity{v, dim->unit};
        } else {
            state.values[dim_name] = value;
        }
    }
    SimulationTrace trace = simulate(state, odd, result.value());
    out << "state: " << render_state(trace.initial) << "\n";
    for (const auto& step : trace.steps) {
        out << "event: " << render_event(step.event) << "\n";
        for (const auto& name : step.fired) out << "  fired: " << quote(name)
                                                << "\n";
        out << "  state: " << render_state(step.state) << "\n";
        out << "  satisfied: " << render_tag_set(satisfied_tags(step.state, odd))
            << "\n";
    }
    return 0;
}

int cmd_table(const std::string& odd_path, std::ostream& out,
              std::ostream& err) {
    AgOdd odd = load_valid_odd(odd_path, err);
    out << render_odd_table(odd);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Toolkit for agricultural operational design domains"};
    app.name("agodd");
    app.require_subcommand(1);

    std::string odd_path, second_path;
    std::vector<std::string> scenario_paths;
    std::vector<std::string> state_args;
    int grid = -1;
    double threshold = 1.0;
    int iteration = 1;
    bool json = false;

    CLI::App* check = app.add_subcommand(
        "check", "Validate an ODD file (and scenario files against it)");
    check->add_option("odd", odd_path, "ODD file")->required();
    check->add_option("scenarios", scenario_paths, "scenario files");

    CLI::App* verify = app.add_subcommand(
        "verify", "Run one verification iteration of scenarios against an ODD");
    verify->add_option("odd", odd_path, "ODD file")->required();
    verify->add_option("scenarios", scenario_paths, "scenario files")
        ->required();
    verify->add_option("--grid", grid, "grid resolution per dimension");
    verify->add_option("--threshold", threshold,
                       "coverage needed for a verified verdict");
    verify->add_option("--iteration", iteration, "iteration number to report");
    verify->add_flag("--json", json, "emit the report as JSON");

    CLI::App* cover = app.add_subcommand(
        "coverage", "Report scenario coverage of the ODD and remaining gaps");
    cover->add_option("odd", odd_path, "ODD file")->required();
    cover->add_option("scenarios", scenario_paths, "scenario files")->required();
    cover->add_option("--grid", grid, "grid resolution per dimension");
    cover->add_flag("--json", json, "emit coverage as JSON");

    CLI::App* diff = app.add_subcommand(
        "diff", "Show attribute changes between two ODD revisions");
    diff->add_option("before", odd_path, "earlier ODD file")->required();
    diff->add_option("after", second_path, "later ODD file")->required();

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Run an event script through the process definitions");
    simulate->add_option("odd", odd_path, "ODD file")->required();
    simulate->add_option("events", second_path, "event script")->required();
    simulate->add_option("--state", state_args,
                         "initial world value as dim=value");

    CLI::App* table = app.add_subcommand(
        "table", "Render an ODD as a table, deepest refinements first");
    table->add_option("odd", odd_path, "ODD file")->required();

    try {
        std::vector<const char*> argv;
        argv.push_back("agodd");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << app.help();
        return 4;
    }

    try {
        if (grid != -1 && grid < 1) {
            err << "error: --grid must be at least 1\n";
            return 4;
        }
        int grid_value = grid != -1 ? grid : default_grid(err);
        if (app.got_subcommand(check))
            return cmd_check(odd_path, scenario_paths, out, err);
        if (app.got_subcommand(verify)) {
            VerifyConfig config;
            config.grid = grid_value;
            config.coverage_threshold = threshold;
            config.iteration = iteration;
            return cmd_verify(odd_path, scenario_paths, config, json, out, err);
        }
        if (app.got_subcommand(cover))
            return cmd_coverage(odd_path, scenario_paths, grid_value, json, out,
                                err);
        if (app.got_subcommand(diff))
            return cmd_diff(odd_path, second_path, out, err);
        if (app.got_subcommand(simulate))
            return cmd_simulate(odd_path, second_path, state_args, out, err);
        if (app.got_subcommand(table)) return cmd_table(odd_path, out, err);
    } catch (const ExitWith& e) {
        return e.code;
    } catch (const Error& e) {
        err << "error [" << e.code() << "] " << e.what() << "\n";
        return 3;
    }
    return 4;
}

}  // namespace agodd
