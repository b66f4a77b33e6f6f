// Copyright 2026 The qscatter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qscatter/cli.h"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "qscatter/errors.h"
#include "qscatter/montecarlo.h"

namespace qscatter::cli {

namespace {

using nlohmann::json;

constexpr double kSqrt3 = 1.7320508075688772;

class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

const char *kHelpFooter = R"(Subcommands and outputs:
  coeffs       CSV  kappa,a,a_prime,b,c   (probability coefficients of one channel
               on a log-spaced kappa grid; --range lo,hi default 0.05,20, --grid 256)
  optimize     JSON minimum of a scheme's figure of merit over kappa
               (--scheme parallel_t|parallel_r|frame_t|frame_r|strategy2)
  reconstruct  JSON v_raw, v_clipped, was_clipped, condition_number, scheme
               (--strategy frame|parallel|momentum, --probs p1,p2,p3)
  simulate     JSON error report for finite-shot experiments; --replica-csv writes
               replica,error,trace_distance,was_clipped; --sweep writes
               CSV kappa,mean_error,std_error,mean_trace_distance,clip_rate
  fig4         CSV  kappa1,kappa2,value   (|det N|^(1/3) of the momentum scheme,
               "inf" on the kappa1 = kappa2 pole; --flag-above X adds above_threshold)
Exit codes: 0 success, 1 runtime failure, 2 configuration error, 3 degenerate scheme.)";

// Flags accepted by each subcommand (besides --config and --help).
const std::map<std::string, std::set<std::string>> kAllowedFlags = {
    {"coeffs", {"--channel", "--range", "--grid", "--out", "--format"}},
    {"optimize", {"--scheme", "--range", "--box", "--grid", "--threads", "--out", "--format"}},
    {"reconstruct",
     {"--strategy", "--channel", "--kappa", "--kappa2", "--ni", "--nf", "--n1", "--axes", "--probs", "--out",
      "--format"}},
    {"simulate",
     {"--strategy", "--channel", "--kappa", "--kappa2", "--ni", "--nf", "--n1", "--axes", "--bloch", "--density",
      "--shots", "--replicas", "--seed", "--threads", "--sweep", "--kappas", "--out", "--format", "--replica-csv"}},
    {"fig4", {"--box", "--grid", "--threads", "--out", "--format", "--flag-above"}},
};

std::vector<double> parse_numbers(const std::string &text, const std::string &flag) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            size_t used = 0;
            double v = std::stod(item, &used);
            if (item.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument(item);
            }
            out.push_back(v);
        } catch (const std::exception &) {
            throw ConfigError(flag + ": '" + item + "' is not a number");
        }
    }
    return out;
}

std::vector<double> parse_fixed(const std::string &text, const std::string &flag, size_t count) {
    auto v = parse_numbers(text, flag);
    if (v.size() != count) {
        throw ConfigError(flag + " expects " + std::to_string(count) + " comma-separated numbers");
    }
    return v;
}

Vec3 to_vec3(const std::vector<double> &v) {
    return Vec3(v[0], v[1], v[2]);
}

// JSON accessors --------------------------------------------------------------

std::vector<double> json_numbers(const json &value, const std::string &key, size_t count) {
    if (!value.is_array() || value.size() != count) {
        throw ConfigError("config key '" + key + "' must be an array of " + std::to_string(count) + " numbers");
    }
    std::vector<double> out;
    for (const auto &x : value) {
        if (!x.is_number()) {
            throw ConfigError("config key '" + key + "' must contain numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

template <typename T>
T json_scalar(const json &value, const std::string &key) {
    try {
        return value.get<T>();
    } catch (const json::exception &) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

void apply_json(RunConfig &cfg, const json &doc) {
    if (!doc.is_object()) {
        throw ConfigError("config file must hold a JSON object");
    }
    for (const auto &[key, value] : doc.items()) {
        if (key == "command") {
            cfg.command = json_scalar<std::string>(value, key);
        } else if (key == "bloch") {
            cfg.bloch = to_vec3(json_numbers(value, key, 3));
        } else if (key == "density") {
            auto d = json_numbers(value, key, 8);
            cfg.density = std::array<Complex, 4>{
                Complex(d[0], d[1]), Complex(d[2], d[3]), Complex(d[4], d[5]), Complex(d[6], d[7])};
        } else if (key == "probs") {
            cfg.probs = to_vec3(json_numbers(value, key, 3));
        } else if (key == "ni") {
            cfg.incident = to_vec3(json_numbers(value, key, 3));
        } else if (key == "nf") {
            cfg.detected = to_vec3(json_numbers(value, key, 3));
        } else if (key == "n1") {
            cfg.first_axis = to_vec3(json_numbers(value, key, 3));
        } else if (key == "axes") {
            auto a = json_numbers(value, key, 9);
            cfg.axes = {Vec3(a[0], a[1], a[2]), Vec3(a[3], a[4], a[5]), Vec3(a[6], a[7], a[8])};
        } else if (key == "kappa") {
            cfg.kappa = json_scalar<double>(value, key);
        } else if (key == "kappa2") {
            cfg.kappa2 = json_scalar<double>(value, key);
        } else if (key == "channel") {
            cfg.channel = parse_channel(json_scalar<std::string>(value, key));
        } else if (key == "strategy") {
            cfg.strategy = parse_strategy(json_scalar<std::string>(value, key));
        } else if (key == "scheme") {
            cfg.scheme = json_scalar<std::string>(value, key);
        } else if (key == "shots") {
            cfg.shots = json_scalar<std::uint64_t>(value, key);
        } else if (key == "replicas") {
            cfg.replicas = json_scalar<int>(value, key);
        } else if (key == "seed") {
            cfg.seed = json_scalar<std::uint64_t>(value, key);
        } else if (key == "threads") {
            cfg.threads = json_scalar<int>(value, key);
        } else if (key == "grid") {
            cfg.grid = json_scalar<int>(value, key);
        } else if (key == "range") {
            auto r = json_numbers(value, key, 2);
            cfg.range = std::array<double, 2>{r[0], r[1]};
        } else if (key == "box") {
            auto b = json_numbers(value, key, 4);
            cfg.box = {b[0], b[1], b[2], b[3]};
        } else if (key == "kappas") {
            if (!value.is_array() || value.empty()) {
                throw ConfigError("config key 'kappas' must be a non-empty array");
            }
            cfg.kappas = json_numbers(value, key, value.size());
        } else if (key == "sweep") {
            cfg.sweep = json_scalar<bool>(value, key);
        } else if (key == "out") {
            cfg.out = json_scalar<std::string>(value, key);
        } else if (key == "format") {
            cfg.format = json_scalar<std::string>(value, key);
        } else if (key == "replica_csv") {
            cfg.replica_csv = json_scalar<std::string>(value, key);
        } else if (key == "flag_above") {
            cfg.flag_above = json_scalar<double>(value, key);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
}

// Output ----------------------------------------------------------------------

json vec_json(const Vec3 &v) {
    return json::array({v.x(), v.y(), v.z()});
}

// Numbers that JSON cannot hold (inf, nan) become null.
json number_json(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json provenance_json(const SchemeProvenance &p) {
    json channels = json::array();
    for (auto c : p.channels) {
        channels.push_back(std::string(to_string(c)));
    }
    return {
        {"strategy", std::string(to_string(p.strategy))},
        {"channels", channels},
        {"kappas", p.kappas},
        {"frame", json::array({vec_json(p.frame[0]), vec_json(p.frame[1]), vec_json(p.frame[2])})},
        {"description", p.describe()},
    };
}

json reconstruction_json(const ReconstructionResult &r) {
    return {
        {"v_raw", vec_json(r.raw)},
        {"v_clipped", vec_json(r.clipped.vec())},
        {"was_clipped", r.was_clipped},
        {"condition_number", number_json(r.condition_number)},
    };
}

void emit(const RunConfig &cfg, const std::string &text, std::ostream &out) {
    if (cfg.out == "-" || cfg.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
        throw IoError("cannot open output file '" + cfg.out + "'");
    }
    file << text;
    if (!file) {
        throw IoError("failed writing output file '" + cfg.out + "'");
    }
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << text)) {
        throw IoError("cannot write '" + path + "'");
    }
}

std::string format_or(const RunConfig &cfg, const std::string &fallback) {
    std::string f = cfg.format.empty() ? fallback : cfg.format;
    if (f != "csv" && f != "json") {
        throw ConfigError("--format must be csv or json");
    }
    return f;
}

// Inputs ----------------------------------------------------------------------

BlochVector target_state(const RunConfig &cfg) {
    if (cfg.bloch && cfg.density) {
        throw ConfigError("give either --bloch or --density, not both");
    }
    if (cfg.density) {
        const auto &d = *cfg.density;
        Complex2x2 rho;
        rho << d[0], d[1], d[2], d[3];
        return density_to_bloch(rho);
    }
    if (!cfg.bloch) {
        throw ConfigError("a target state is required (--bloch or --density)");
    }
    return BlochVector(*cfg.bloch);
}

std::array<UnitDirection, 3> parallel_axes(const RunConfig &cfg) {
    return {UnitDirection::normalized(cfg.axes[0]), UnitDirection::normalized(cfg.axes[1]),
            UnitDirection::normalized(cfg.axes[2])};
}

SchemeMatrix build_scheme(const RunConfig &cfg, Kappa kappa) {
    switch (cfg.strategy) {
        case Strategy::kFrame:
            return strategy1_frame_scheme(
                UnitDirection::normalized(cfg.incident), UnitDirection::normalized(cfg.first_axis), kappa, cfg.channel);
        case Strategy::kParallel:
            return strategy1_parallel_scheme(parallel_axes(cfg), kappa, cfg.channel);
        case Strategy::kMomentum:
            return strategy2_scheme(
                UnitDirection::normalized(cfg.incident), UnitDirection::normalized(cfg.detected), kappa,
                Kappa(cfg.kappa2));
    }
    throw ConfigError("unknown strategy");
}

// Subcommands -----------------------------------------------------------------

void run_coeffs(const RunConfig &cfg, std::ostream &out) {
    auto range = cfg.range.value_or(std::array<double, 2>{0.05, 20});
    int points = cfg.grid ? cfg.grid : 256;
    if (!(range[0] > 0 && range[1] > range[0] && std::isfinite(range[1]))) {
        throw ConfigError("--range must satisfy 0 < lo < hi");
    }
    if (points < 2) {
        throw ConfigError("--grid must be at least 2");
    }
    std::string format = format_or(cfg, "csv");
    auto grid = log_space(range[0], range[1], points);
    std::ostringstream text;
    json rows = json::array();
    if (format == "csv") {
        text << "kappa,a,a_prime,b,c\n";
    }
    for (double kappa : grid) {
        auto k = probability_coefficients(cfg.channel, omega(kappa));
        if (format == "csv") {
            text << format_number(kappa) << ',' << format_number(k.a) << ',' << format_number(k.a_prime) << ','
                 << format_number(k.b) << ',' << format_number(k.c) << '\n';
        } else {
            rows.push_back({{"kappa", kappa}, {"a", k.a}, {"a_prime", k.a_prime}, {"b", k.b}, {"c", k.c}});
        }
    }
    if (format == "json") {
        text << json{{"channel", std::string(to_string(cfg.channel))}, {"rows", rows}}.dump(2) << '\n';
    }
    emit(cfg, text.str(), out);
}

// Closed-form reflection frame-scheme determinant, reported next to the
// numeric value used by the optimizer.
double det_Mr_closed_form(double w) {
    double w2 = w * w;
    double u = 1 + w2;
    double v = 1 + 9 * w2;
    return u * u * u * v * v / (2 * w2 * w2 * w2);
}

void run_optimize(const RunConfig &cfg, std::ostream &out) {
    format_or(cfg, "json");
    if (cfg.format == "csv") {
        throw ConfigError("optimize writes JSON only");
    }
    SearchOptions options;
    options.grid_points = cfg.grid ? cfg.grid : 128;
    options.workers = cfg.threads;
    json report;
    if (cfg.scheme == "strategy2") {
        auto opt = minimize_2d(cfg.box, options);
        report = {
            {"scheme", cfg.scheme},
            {"figure_of_merit", std::string(to_string(FigureOfMerit::kAbsDetNCubeRoot))},
            {"argmin", {opt.kappa1, opt.kappa2}},
            {"min_value", opt.min_value},
            {"closed_form_value", std::cbrt(std::abs(det_N(omega(opt.kappa1), omega(opt.kappa2))))},
            {"analytic_argmin", nullptr},
            {"search",
             {{"box", {opt.box.kappa1_lo, opt.box.kappa1_hi, opt.box.kappa2_lo, opt.box.kappa2_hi}},
              {"grid_points", opt.grid_points},
              {"iterations", opt.iterations}}},
        };
    } else {
        struct Entry {
            FigureOfMerit kind;
            double analytic_argmin;
            double (*closed_form)(double);
            const char *note;
        };
        const std::map<std::string, Entry> entries = {
            {"parallel_t", {FigureOfMerit::kLambdaT, kSqrt3, lambda_t, "stationary point kappa^2 = 3"}},
            {"parallel_r", {FigureOfMerit::kLambdaR, kSqrt3, lambda_r, "stationary point kappa^2 = 3"}},
            {"frame_t",
             {FigureOfMerit::kDetMt, std::sqrt(1 + std::sqrt(217.0)) / 2, det_Mt,
              "stationary point kappa^2 = (1 + sqrt(217))/4 from 27 w^4 + w^2 - 2 = 0; "
              "sqrt(1 + sqrt(127))/2 is not a stationary point"}},
            {"frame_r",
             {FigureOfMerit::kDetMr, std::sqrt((std::sqrt(33.0) - 3) / 2), det_Mr_closed_form,
              "stationary point kappa^2 = (sqrt(33) - 3)/2; minimized value is the numeric determinant"}},
        };
        auto it = entries.find(cfg.scheme);
        if (it == entries.end()) {
            throw ConfigError("unknown --scheme '" + cfg.scheme + "'");
        }
        auto range = cfg.range.value_or(std::array<double, 2>{0.1, 100});
        const Entry &e = it->second;
        auto opt = minimize_1d(e.kind, range[0], range[1], options);
        report = {
            {"scheme", cfg.scheme},
            {"figure_of_merit", std::string(to_string(e.kind))},
            {"argmin", opt.argmin},
            {"min_value", opt.min_value},
            {"closed_form_value", e.closed_form(omega(opt.argmin))},
            {"analytic_argmin", e.analytic_argmin},
            {"note", e.note},
            {"search",
             {{"lower", opt.lower},
              {"upper", opt.upper},
              {"grid_points", opt.grid_points},
              {"iterations", opt.iterations}}},
        };
    }
    emit(cfg, report.dump(2) + "\n", out);
}

void run_reconstruct(const RunConfig &cfg, std::ostream &out) {
    if (cfg.format == "csv") {
        throw ConfigError("reconstruct writes JSON only");
    }
    format_or(cfg, "json");
    if (!cfg.probs) {
        throw ConfigError("--probs p1,p2,p3 is required");
    }
    const Vec3 &probs = *cfg.probs;
    for (int k = 0; k < 3; ++k) {
        if (!(probs[k] >= 0 && probs[k] <= 1)) {
            throw ConfigError("probabilities must lie in [0, 1]");
        }
    }
    Kappa kappa(cfg.kappa);
    SchemeMatrix scheme = build_scheme(cfg, kappa);
    ReconstructionResult result = invert_scheme(scheme, probs);
    if (cfg.strategy == Strategy::kParallel) {
        // Component-by-component closed-form inversion; same answer as the
        // matrix solve, reported with the scheme's condition number.
        auto direct = reconstruct_parallel(parallel_axes(cfg), probs, kappa.omega(), cfg.channel);
        result = make_reconstruction(direct.raw, result.condition_number);
    }
    json report = reconstruction_json(result);
    report["scheme"] = provenance_json(scheme.provenance);
    report["probabilities"] = vec_json(probs);
    emit(cfg, report.dump(2) + "\n", out);
}

void run_simulate(const RunConfig &cfg, std::ostream &out) {
    if (cfg.shots == 0) {
        throw ConfigError("--shots must be at least 1");
    }
    if (cfg.replicas < 1) {
        throw ConfigError("--replicas must be at least 1");
    }
    if (cfg.threads < 1) {
        throw ConfigError("--threads must be at least 1");
    }
    if (cfg.sweep) {
        std::string format = format_or(cfg, "csv");
        std::vector<double> kappas = cfg.kappas;
        if (kappas.empty()) {
            kappas = {0.5, 1.0, kSqrt3, 3.0, 6.0};
        }
        SweepOptions options{cfg.shots, cfg.replicas, cfg.seed, cfg.threads};
        auto rows = error_vs_kappa_sweep([&](Kappa k) { return build_scheme(cfg, k); }, kappas, options);
        std::ostringstream text;
        if (format == "csv") {
            text << "kappa,mean_error,std_error,mean_trace_distance,clip_rate\n";
            for (const auto &r : rows) {
                text << format_number(r.kappa) << ',' << format_number(r.mean_error) << ','
                     << format_number(r.std_error) << ',' << format_number(r.mean_trace_distance) << ','
                     << format_number(r.clip_rate) << '\n';
            }
        } else {
            json j = json::array();
            for (const auto &r : rows) {
                j.push_back(
                    {{"kappa", r.kappa},
                     {"mean_error", r.mean_error},
                     {"std_error", r.std_error},
                     {"mean_trace_distance", r.mean_trace_distance},
                     {"clip_rate", r.clip_rate}});
            }
            text << json{{"strategy", std::string(to_string(cfg.strategy))},
                         {"channel", std::string(to_string(cfg.channel))},
                         {"shots", cfg.shots},
                         {"replicas", cfg.replicas},
                         {"seed", cfg.seed},
                         {"rows", j}}
                        .dump(2)
                 << '\n';
        }
        emit(cfg, text.str(), out);
        return;
    }

    if (cfg.format == "csv") {
        throw ConfigError("simulate writes a JSON report; use --replica-csv for per-replica CSV");
    }
    BlochVector truth = target_state(cfg);
    ExperimentPlan plan;
    plan.scheme = build_scheme(cfg, Kappa(cfg.kappa));
    plan.shots_per_setup = cfg.shots;
    plan.seed = cfg.seed;
    plan.replicas = cfg.replicas;
    plan.workers = cfg.threads;
    auto result = estimate_and_reconstruct(plan, truth);
    const auto &rep = result.report;
    json first = reconstruction_json(result.reconstructions.front());
    first["probabilities"] = vec_json(result.estimated_probabilities.front());
    json report = {
        {"mean_error", rep.mean_error},
        {"std_error", rep.std_error},
        {"mean_raw_error", rep.mean_raw_error},
        {"mean_trace_distance", rep.mean_trace_distance},
        {"clip_rate", rep.clip_rate},
        {"replicas", rep.replicas},
        {"shots", cfg.shots},
        {"seed", cfg.seed},
        {"v_true", vec_json(truth.vec())},
        {"exact_probabilities", vec_json(plan.scheme.predict(truth))},
        {"first_replica", first},
        {"scheme", provenance_json(plan.scheme.provenance)},
    };
    if (!cfg.replica_csv.empty()) {
        std::ostringstream csv;
        csv << "replica,error,trace_distance,was_clipped\n";
        for (size_t r = 0; r < rep.per_replica_errors.size(); ++r) {
            double e = rep.per_replica_errors[r];
            csv << r << ',' << format_number(e) << ',' << format_number(e / 2) << ','
                << (result.reconstructions[r].was_clipped ? 1 : 0) << '\n';
        }
        write_file(cfg.replica_csv, csv.str());
    }
    emit(cfg, report.dump(2) + "\n", out);
}

void run_fig4(const RunConfig &cfg, std::ostream &out) {
    if (format_or(cfg, "csv") != "csv") {
        throw ConfigError("fig4 writes CSV only");
    }
    int resolution = cfg.grid ? cfg.grid : 128;
    if (resolution < 16) {
        throw ConfigError("--grid must be at least 16 for fig4");
    }
    auto grid = det_n_grid(cfg.box, resolution, cfg.threads);
    std::ostringstream text;
    text << "kappa1,kappa2,value";
    if (cfg.flag_above) {
        text << ",above_threshold";
    }
    text << '\n';
    for (const auto &p : grid) {
        text << format_number(p.kappa1) << ',' << format_number(p.kappa2) << ',' << format_number(p.value);
        if (cfg.flag_above) {
            text << ',' << (p.value > *cfg.flag_above ? 1 : 0);
        }
        text << '\n';
    }
    emit(cfg, text.str(), out);
}

void report_error(std::ostream &err, const std::string &kind, const std::string &message) {
    err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

RunConfig load_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    RunConfig cfg;
    apply_json(cfg, doc);
    return cfg;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Qubit tomography by scattering of a probe qubit", "qscatter"};
    app.footer(kHelpFooter);
    app.require_subcommand(0, 1);

    std::string config_path, channel, strategy, scheme, ni, nf, n1, axes, bloch, density, probs, range, box,
        kappas;
    double kappa = 0, kappa2 = 0, flag_above = 0;
    std::uint64_t shots = 0, seed = 0;
    int replicas = 0, threads = 0, grid = 0;
    bool sweep = false;
    std::string out_path, format, replica_csv;

    std::map<std::string, CLI::Option *> opts;
    opts["--config"] = app.add_option("--config", config_path, "JSON config file; flags override its values");
    opts["--kappa"] = app.add_option("--kappa", kappa, "wave number kappa = hbar^2 k/(m g) (momentum: kappa1)");
    opts["--kappa2"] = app.add_option("--kappa2", kappa2, "second wave number of the momentum scheme");
    opts["--channel"] = app.add_option("--channel", channel, "t or r");
    opts["--strategy"] = app.add_option("--strategy", strategy, "frame, parallel or momentum");
    opts["--scheme"] = app.add_option("--scheme", scheme, "parallel_t, parallel_r, frame_t, frame_r or strategy2");
    opts["--ni"] = app.add_option("--ni", ni, "incident spin direction x,y,z");
    opts["--nf"] = app.add_option("--nf", nf, "detected spin direction x,y,z (momentum scheme)");
    opts["--n1"] = app.add_option("--n1", n1, "first frame axis x,y,z, orthogonal to --ni (frame scheme)");
    opts["--axes"] = app.add_option("--axes", axes, "three orthogonal axes, 9 numbers (parallel scheme)");
    opts["--bloch"] = app.add_option("--bloch", bloch, "target Bloch vector x,y,z");
    opts["--density"] = app.add_option("--density", density, "target density matrix, row-major re,im pairs (8 numbers)");
    opts["--probs"] = app.add_option("--probs", probs, "three measured probabilities");
    opts["--shots"] = app.add_option("--shots", shots, "probes per setup");
    opts["--replicas"] = app.add_option("--replicas", replicas, "Monte Carlo replicas");
    opts["--seed"] = app.add_option("--seed", seed, "master random seed");
    opts["--threads"] = app.add_option("--threads", threads, "worker threads");
    opts["--grid"] = app.add_option("--grid", grid, "grid points (per axis)");
    opts["--range"] = app.add_option("--range", range, "kappa range lo,hi");
    opts["--box"] = app.add_option("--box", box, "kappa box k1lo,k1hi,k2lo,k2hi");
    opts["--kappas"] = app.add_option("--kappas", kappas, "kappa values for --sweep");
    opts["--sweep"] = app.add_flag("--sweep", sweep, "error-versus-kappa sweep");
    opts["--out"] = app.add_option("--out", out_path, "output path, - for stdout");
    opts["--format"] = app.add_option("--format", format, "csv or json");
    opts["--replica-csv"] = app.add_option("--replica-csv", replica_csv, "per-replica error CSV path");
    opts["--flag-above"] = app.add_option("--flag-above", flag_above, "add above_threshold column (fig4)");

    for (const auto &[name, allowed] : kAllowedFlags) {
        app.add_subcommand(name, "")->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        report_error(err, "config", e.what());
        return kExitConfig;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config_file(config_path);
        auto subs = app.get_subcommands();
        if (!subs.empty()) {
            cfg.command = subs.front()->get_name();
        }
        if (cfg.command.empty()) {
            throw ConfigError("a subcommand is required (coeffs, optimize, reconstruct, simulate, fig4)");
        }
        auto allowed = kAllowedFlags.find(cfg.command);
        if (allowed == kAllowedFlags.end()) {
            throw ConfigError("unknown subcommand '" + cfg.command + "'");
        }
        for (const auto &[name, opt] : opts) {
            if (opt->count() > 0 && name != "--config" && !allowed->second.count(name)) {
                throw ConfigError(name + " does not apply to " + cfg.command);
            }
        }
        auto given = [&](const char *name) { return opts[name]->count() > 0; };
        if (given("--kappa")) cfg.kappa = kappa;
        if (given("--kappa2")) cfg.kappa2 = kappa2;
        if (given("--channel")) cfg.channel = parse_channel(channel);
        if (given("--strategy")) cfg.strategy = parse_strategy(strategy);
        if (given("--scheme")) cfg.scheme = scheme;
        if (given("--ni")) cfg.incident = to_vec3(parse_fixed(ni, "--ni", 3));
        if (given("--nf")) cfg.detected = to_vec3(parse_fixed(nf, "--nf", 3));
        if (given("--n1")) cfg.first_axis = to_vec3(parse_fixed(n1, "--n1", 3));
        if (given("--axes")) {
            auto a = parse_fixed(axes, "--axes", 9);
            cfg.axes = {Vec3(a[0], a[1], a[2]), Vec3(a[3], a[4], a[5]), Vec3(a[6], a[7], a[8])};
        }
        if (given("--bloch")) cfg.bloch = to_vec3(parse_fixed(bloch, "--bloch", 3));
        if (given("--density")) {
            auto d = parse_fixed(density, "--density", 8);
            cfg.density = std::array<Complex, 4>{
                Complex(d[0], d[1]), Complex(d[2], d[3]), Complex(d[4], d[5]), Complex(d[6], d[7])};
        }
        if (given("--probs")) cfg.probs = to_vec3(parse_fixed(probs, "--probs", 3));
        if (given("--shots")) cfg.shots = shots;
        if (given("--replicas")) cfg.replicas = replicas;
        if (given("--seed")) cfg.seed = seed;
        if (given("--threads")) cfg.threads = threads;
        if (given("--grid")) cfg.grid = grid;
        if (given("--range")) {
            auto r = parse_fixed(range, "--range", 2);
            cfg.range = std::array<double, 2>{r[0], r[1]};
        }
        if (given("--box")) {
            auto b = parse_fixed(box, "--box", 4);
            cfg.box = {b[0], b[1], b[2], b[3]};
        }
        if (given("--kappas")) cfg.kappas = parse_numbers(kappas, "--kappas");
        if (given("--sweep")) cfg.sweep = sweep;
        if (given("--out")) cfg.out = out_path;
        if (given("--format")) cfg.format = format;
        if (given("--replica-csv")) cfg.replica_csv = replica_csv;
        if (given("--flag-above")) cfg.flag_above = flag_above;

        if (cfg.grid < 0 || cfg.threads < 1) {
            throw ConfigError("--grid and --threads must be positive");
        }
        if (cfg.command == "coeffs") {
            run_coeffs(cfg, out);
        } else if (cfg.command == "optimize") {
            run_optimize(cfg, out);
        } else if (cfg.command == "reconstruct") {
            run_reconstruct(cfg, out);
        } else if (cfg.command == "simulate") {
            run_simulate(cfg, out);
        } else {
            run_fig4(cfg, out);
        }
    } catch (const DegenerateSchemeError &e) {
        report_error(err, "degenerate", e.what());
        return kExitDegenerate;
    } catch (const std::invalid_argument &e) {
        report_error(err, "config", e.what());
        return kExitConfig;
    } catch (const IoError &e) {
        report_error(err, "io", e.what());
        return kExitFailure;
    } catch (const std::exception &e) {
        report_error(err, "runtime", e.what());
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace qscatter::cli
