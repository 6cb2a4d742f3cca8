#include "bcconf/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcconf/csv.hpp"
#include "bcconf/dpos_sim.hpp"
#include "bcconf/errors.hpp"
#include "bcconf/metrics.hpp"
#include "bcconf/model.hpp"
#include "bcconf/optimizer.hpp"
#include "bcconf/qos.hpp"

#ifndef BCCONF_VERSION
#define BCCONF_VERSION "0.0.0"
#endif

namespace bcconf::cli {

namespace fs = std::filesystem;

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string scenario_path;
    std::string out_dir;
    std::string weights;
    std::string qos_class;
    std::int64_t grid_cap = kDefaultGridCap;
    std::uint64_t seed = 0;

    std::string solver = "greedy";

    std::optional<int> m;
    std::optional<int> theta;
    std::string result_path;
    int rounds = 1;
    std::string jitter = "none";
    bool rotate_bm = false;
    bool all_configs = false;
};

/// Output files are staged in memory and only written once the whole
/// command has succeeded.
using Outputs = std::map<std::string, std::string>;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

QosWeights parse_weights_flag(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw ValidationError("--weights expects three comma-separated numbers");
    double v[3];
    for (int i = 0; i < 3; ++i) {
        try {
            std::size_t used = 0;
            v[i] = std::stod(parts[std::size_t(i)], &used);
            if (used != parts[std::size_t(i)].size()) throw std::invalid_argument("trailing text");
        } catch (const std::logic_error&) {
            throw ValidationError("--weights: '" + parts[std::size_t(i)] + "' is not a number");
        }
    }
    QosWeights w{v[0], v[1], v[2]};
    try {
        validate(w);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("--weights: ") + e.what());
    }
    return w;
}

DataClass parse_class_flag(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw ValidationError("--qos-class expects 'priority,security' e.g. high,low");
    try {
        return {parse_level(parts[0]), parse_level(parts[1]), ""};
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("--qos-class: ") + e.what());
    }
}

Scenario load(const Options& o) {
    try {
        return load_scenario_file(o.scenario_path);
    } catch (const std::ios_base::failure& e) {
        throw IoError(e.what());
    }
}

struct Resolved {
    QosWeights weights;
    SearchBox box;
    std::optional<ModeDirective> directive;
};

// Precedence: --weights > scenario `weights` > mode table > built-in defaults.
Resolved resolve(const Scenario& s, const Options& o) {
    Resolved r;
    r.box = full_box(s.params);
    std::optional<DataClass> cls = s.qos_class;
    if (!o.qos_class.empty()) cls = parse_class_flag(o.qos_class);
    if (cls) {
        r.directive = map_class(*cls, s);
        r.weights = r.directive->weights;
        r.box = directive_box(s.params, *r.directive);
    } else if (s.weights) {
        r.weights = *s.weights;
    }
    if (!o.weights.empty()) r.weights = parse_weights_flag(o.weights);
    return r;
}

fs::path output_dir(const Options& o) {
    if (!o.out_dir.empty()) return o.out_dir;
    if (const char* env = std::getenv("BCCONF_OUT"); env && *env) return env;
    return ".";
}

void commit(const fs::path& dir, const Outputs& files) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    for (const auto& [name, body] : files) {
        const fs::path tmp = dir / (name + ".tmp");
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            f << body;
            f.flush();
            if (!f) throw IoError("cannot write '" + tmp.string() + "'");
        }
        fs::rename(tmp, dir / name, ec);
        if (ec) throw IoError("cannot move '" + tmp.string() + "' into place: " + ec.message());
    }
}

std::string manifest(const std::string& command, const Options& o, const fs::path& dir, double wall) {
    nlohmann::json j = {
        {"command", command},
        {"scenario_path", o.scenario_path},
        {"output_dir", dir.string()},
        {"seed", o.seed},
        {"tool_version", BCCONF_VERSION},
        {"wall_time_s", wall},
    };
    return j.dump(2) + "\n";
}

void result_csv(std::ostream& out, const SolverResult& r, const MetricBreakdown& b,
                const std::optional<ModeDirective>& d) {
    csv::row(out, "solver", "m", "theta", "utility", "latency_s", "downlink_s", "verify_s", "broadcast_s",
             "feedback_s", "security", "cost", "latency_ratio", "security_ratio", "cost_ratio", "evaluations",
             "mode");
    csv::row(out, to_string(r.solver), b.config.num_verifiers, b.config.txns_per_block, b.utility, b.latency_s,
             b.latency_terms.downlink_s, b.latency_terms.verify_s, b.latency_terms.broadcast_s,
             b.latency_terms.feedback_s, b.security, b.cost, b.normalized.latency_ratio,
             b.normalized.security_ratio, b.normalized.cost_ratio, r.trace.evaluations,
             d ? to_string(d->mode_name) : std::string_view("none"));
}

Outputs cmd_optimize(const Options& o) {
    const Scenario s = load(o);
    const Resolved r = resolve(s, o);
    const UtilityModel model(s.params);

    SolverResult result;
    if (o.solver == "greedy") {
        result = solve_greedy(model, r.weights, r.box);
    } else if (o.solver == "exhaustive") {
        result = solve_exhaustive(model, r.weights, r.box, o.grid_cap);
    } else {
        throw ValidationError("--solver must be 'greedy' or 'exhaustive'");
    }
    const MetricBreakdown b = model.evaluate(r.weights, result.best_config);

    Outputs files;
    std::ostringstream res, trace;
    result_csv(res, result, b, r.directive);
    write_trace_csv(trace, result.trace);
    files["result.csv"] = res.str();
    files["trace.csv"] = trace.str();
    return files;
}

Outputs cmd_sweep(const Options& o) {
    const Scenario s = load(o);
    const Resolved r = resolve(s, o);
    if (r.box.size() > o.grid_cap) {
        throw RefusalError("grid of " + std::to_string(r.box.size()) + " configurations exceeds the cap of " +
                           std::to_string(o.grid_cap));
    }
    const UtilityModel model(s.params);

    std::ostringstream out;
    csv::row(out, "m", "theta", "latency_s", "security", "cost", "latency_ratio", "security_ratio", "cost_ratio",
             "utility");
    for (int m = r.box.min_verifiers; m <= r.box.max_verifiers; ++m) {
        for (int theta = r.box.min_txn_per_block; theta <= r.box.max_txn_per_block; ++theta) {
            const auto b = model.evaluate(r.weights, {m, theta});
            csv::row(out, m, theta, b.latency_s, b.security, b.cost, b.normalized.latency_ratio,
                     b.normalized.security_ratio, b.normalized.cost_ratio, b.utility);
        }
    }
    return {{"surface.csv", out.str()}};
}

Outputs cmd_compare(const Options& o) {
    const Scenario s = load(o);
    const Resolved r = resolve(s, o);
    const UtilityModel model(s.params);
    const ComparisonReport rep = compare(model, r.weights, r.box, o.grid_cap);

    std::ostringstream series, summary;
    csv::row(series, "solver", "iteration", "m", "theta", "utility", "best_so_far");
    const auto emit = [&](const SolverResult& sr, const std::vector<double>& best) {
        for (std::size_t i = 0; i < sr.trace.entries.size(); ++i) {
            const auto& e = sr.trace.entries[i];
            csv::row(series, to_string(sr.solver), e.iteration, e.config.num_verifiers, e.config.txns_per_block,
                     e.utility, best[i]);
        }
    };
    emit(rep.greedy, rep.greedy_best_so_far);
    emit(rep.exhaustive, rep.exhaustive_best_so_far);

    csv::row(summary, "grid_size", "greedy_evaluations", "exhaustive_evaluations", "greedy_m", "greedy_theta",
             "greedy_utility", "exhaustive_m", "exhaustive_theta", "exhaustive_utility", "utility_gap",
             "greedy_suboptimal", "coordinatewise_unimodal");
    csv::row(summary, r.box.size(), rep.greedy.trace.evaluations, rep.exhaustive.trace.evaluations,
             rep.greedy.best_config.num_verifiers, rep.greedy.best_config.txns_per_block, rep.greedy.best_utility,
             rep.exhaustive.best_config.num_verifiers, rep.exhaustive.best_config.txns_per_block,
             rep.exhaustive.best_utility, rep.utility_gap, rep.greedy_suboptimal, rep.coordinatewise_unimodal);
    return {{"compare.csv", series.str()}, {"summary.csv", summary.str()}};
}

BlockchainConfig config_from_result(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open result file '" + path + "'");
    std::string header, values;
    std::getline(in, header);
    std::getline(in, values);
    const auto names = split(header, ',');
    const auto cells = split(values, ',');
    std::optional<int> m, theta;
    for (std::size_t i = 0; i < names.size() && i < cells.size(); ++i) {
        try {
            if (names[i] == "m") m = std::stoi(cells[i]);
            if (names[i] == "theta") theta = std::stoi(cells[i]);
        } catch (const std::logic_error&) {
            throw ValidationError("result file '" + path + "': column " + names[i] + " is not an integer");
        }
    }
    if (!m || !theta) throw ValidationError("result file '" + path + "' lacks m/theta columns");
    return {*m, *theta};
}

Outputs cmd_simulate(const Options& o) {
    const Scenario s = load(o);
    const sim::Jitter jitter = sim::parse_jitter(o.jitter);
    if (o.rounds < 1) throw ValidationError("--rounds must be positive");

    Outputs files;
    if (o.all_configs) {
        const auto rep = sim::sweep_sim(s.params, o.rounds, o.seed, jitter, o.grid_cap);
        std::ostringstream out;
        csv::row(out, "m", "theta", "analytic_latency_s", "mean_latency_s", "mean_rel_deviation",
                 "max_abs_rel_deviation");
        for (const auto& c : rep.cells) {
            csv::row(out, c.config.num_verifiers, c.config.txns_per_block, c.analytic_latency_s, c.mean_latency_s,
                     c.mean_rel_deviation, c.max_abs_rel_deviation);
        }
        files["deviation.csv"] = out.str();
        return files;
    }

    BlockchainConfig config;
    if (o.m && o.theta) {
        config = {*o.m, *o.theta};
    } else if (!o.result_path.empty()) {
        config = config_from_result(o.result_path);
    } else {
        throw ValidationError("simulate needs --m and --theta, --result, or --all-configs");
    }
    if (!validate_config(s.params, config)) {
        throw ConstraintError("configuration (m=" + std::to_string(config.num_verifiers) +
                              ", theta=" + std::to_string(config.txns_per_block) + ") is outside the feasible box");
    }

    sim::SimConfig cfg;
    cfg.scenario = s.params;
    cfg.config = config;
    cfg.rounds = o.rounds;
    cfg.jitter = jitter;
    cfg.rng_seed = o.seed;
    cfg.rotate_bm = o.rotate_bm;
    const sim::SimReport rep = sim::run(cfg);

    std::ostringstream events, ndjson, report, summary;
    sim::write_events_csv(events, rep.events);
    sim::write_events_ndjson(ndjson, rep.events);

    const double analytic = rep.analytic_latency_s;
    csv::row(report, "round", "simulated_latency_s", "analytic_latency_s", "deviation_s", "rel_deviation");
    for (std::size_t k = 0; k < rep.per_round_latency_s.size(); ++k) {
        const double l = rep.per_round_latency_s[k];
        const double rel = (l - analytic) / analytic;
        if (jitter.distribution == sim::JitterKind::none && !(std::abs(rel) <= sim::kModelTolerance)) {
            throw ModelMismatchError("round " + std::to_string(k) + " deviates from the closed form by " +
                                     csv::number(rel));
        }
        csv::row(report, int(k), l, analytic, l - analytic, rel);
    }
    csv::row(summary, "m", "theta", "rounds", "committed_blocks", "mean_latency_s", "analytic_latency_s",
             "mean_rel_deviation", "jitter", "seed", "rotate_bm");
    csv::row(summary, config.num_verifiers, config.txns_per_block, o.rounds, rep.committed_blocks,
             rep.mean_latency_s, analytic, (rep.mean_latency_s - analytic) / analytic, o.jitter, o.seed,
             o.rotate_bm);

    files["events.csv"] = events.str();
    files["events.ndjson"] = ndjson.str();
    files["sim_report.csv"] = report.str();
    files["sim_summary.csv"] = summary.str();
    return files;
}

void add_common(CLI::App& sub, Options& o) {
    sub.add_option("--scenario", o.scenario_path, "Scenario file (JSON)")->required();
    sub.add_option("--out", o.out_dir, "Output directory (default: $BCCONF_OUT, else .)");
    sub.add_option("--grid-cap", o.grid_cap, "Refuse grids larger than this")->capture_default_str();
    sub.add_option("--seed", o.seed, "Seed recorded in the manifest and used by the simulator")
        ->capture_default_str();
}

void add_weights(CLI::App& sub, Options& o) {
    sub.add_option("--weights", o.weights,
                   "Latency,security,cost weights summing to 1. Overrides the scenario's `weights`, "
                   "which overrides the QoS mode table");
    sub.add_option("--qos-class", o.qos_class,
                   "Data class as priority,security (high|low each); overrides the scenario's qos_class");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Blockchain configuration optimizer and DPoS verification simulator", "bcconf"};
    app.require_subcommand(1);
    app.set_version_flag("--version", BCCONF_VERSION);

    Options o;
    auto* optimize = app.add_subcommand("optimize", "Find the best (m, theta) and write result.csv, trace.csv");
    add_common(*optimize, o);
    add_weights(*optimize, o);
    optimize->add_option("--solver", o.solver, "greedy or exhaustive")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Evaluate every feasible (m, theta) into surface.csv");
    add_common(*sweep, o);
    add_weights(*sweep, o);

    auto* cmp = app.add_subcommand("compare", "Run greedy and exhaustive search; write compare.csv, summary.csv");
    add_common(*cmp, o);
    add_weights(*cmp, o);

    auto* simulate = app.add_subcommand("simulate", "Simulate verification rounds; write events and reports");
    add_common(*simulate, o);
    simulate->add_option("--m", o.m, "Number of verifiers");
    simulate->add_option("--theta", o.theta, "Transactions per block");
    simulate->add_option("--result", o.result_path, "Take m and theta from a result.csv");
    simulate->add_option("--rounds", o.rounds, "Rounds to simulate")->capture_default_str();
    simulate->add_option("--jitter", o.jitter, "none or uniform:<spread>")->capture_default_str();
    simulate->add_flag("--rotate-bm", o.rotate_bm, "Rotate the BM role through the selected verifiers");
    simulate->add_flag("--all-configs", o.all_configs, "Simulate every feasible config into deviation.csv");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion& e) {
        out << BCCONF_VERSION << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }

    const auto started = std::chrono::steady_clock::now();
    std::string command;
    try {
        Outputs files;
        if (optimize->parsed()) {
            command = "optimize";
            files = cmd_optimize(o);
        } else if (sweep->parsed()) {
            command = "sweep";
            files = cmd_sweep(o);
        } else if (cmp->parsed()) {
            command = "compare";
            files = cmd_compare(o);
        } else {
            command = "simulate";
            files = cmd_simulate(o);
        }
        const fs::path dir = output_dir(o);
        commit(dir, files);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        commit(dir, {{"manifest.json", manifest(command, o, dir, wall)}});
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const fs::filesystem_error& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const ParseError& e) {
        err << "invalid scenario: " << e.what() << '\n';
        return kValidation;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const ConstraintError& e) {
        err << "constraint error: " << e.what() << '\n';
        return kValidation;
    } catch (const RefusalError& e) {
        err << "refused: " << e.what() << '\n';
        return kValidation;
    } catch (const ModelMismatchError& e) {
        err << "model mismatch: " << e.what() << '\n';
        return kInternal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kOk;
}

}  // namespace bcconf::cli
