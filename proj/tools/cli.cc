// Copyright 2026 The paulimit Authors
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

#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "paulimit/device_sim.h"
#include "paulimit/errors.h"
#include "paulimit/estimation.h"
#include "paulimit/mitigation.h"
#include "paulimit/pauli_channel.h"
#include "paulimit/rng.h"

namespace paulimit::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string preset;
    std::string dataset;
    std::string model;
    std::string profile;
    size_t n = 3;
    std::string depths;
    size_t K = DEFAULT_CIRCUITS_PER_DEPTH;
    size_t shots = DEFAULT_SHOTS;
    std::string inputs;
    std::string train;
    std::string test;
    uint64_t seed = 0;
    std::string out = "paulimit-out";
    double readout = 0;
    double prep = 0;
    bool pavg = false;
    bool rb = false;
    bool circuits = false;
    size_t workers = 1;
};

std::string hex64(uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)value);
    return buf;
}

std::string fixed(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10f", value);
    return buf;
}

std::string general(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void ensure_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
}

void require_file(const std::string &path, const char *what) {
    if (path.empty()) {
        throw ConfigError(std::string("--") + what + " is required");
    }
    if (!fs::is_regular_file(path)) {
        throw ConfigError(std::string(what) + " file not found: " + path);
    }
}

void check_qubits(size_t n) {
    if (n < 1 || n > MAX_QUBITS) {
        throw ConfigError("--n must be in [1, " + std::to_string(MAX_QUBITS) + "]");
    }
}

/// Canonical description of everything that affects results. Output paths and worker counts do not.
std::string canonical(const std::string &command, const RunConfig &cfg) {
    std::ostringstream ss;
    ss << "command=" << command << "\n";
    ss << "preset=" << cfg.preset << "\n";
    for (const auto &[key, path] : {std::pair{"dataset", cfg.dataset}, {"model", cfg.model}}) {
        ss << key << "=" << (path.empty() ? "" : hex64(fnv1a(read_file(path)))) << "\n";
    }
    ss << "n=" << cfg.n << "\n";
    ss << "depths=" << cfg.depths << "\n";
    ss << "K=" << cfg.K << "\n";
    ss << "shots=" << cfg.shots << "\n";
    ss << "inputs=" << cfg.inputs << "\n";
    ss << "train=" << cfg.train << "\n";
    ss << "test=" << cfg.test << "\n";
    ss << "seed=" << cfg.seed << "\n";
    ss << "readout=" << general(cfg.readout) << "\n";
    ss << "prep=" << general(cfg.prep) << "\n";
    ss << "pavg=" << cfg.pavg << "\n";
    ss << "rb=" << cfg.rb << "\n";
    return ss.str();
}

/// Ties the artifacts of one command to its configuration.
struct Manifest {
    std::string command;
    size_t n = 0;
    uint64_t seed = 0;
    std::string config_hash;
    std::vector<std::string> artifacts;

    std::map<std::string, std::string> meta() const {
        return {{"n", std::to_string(n)}, {"seed", std::to_string(seed)}, {"config_hash", config_hash}};
    }

    void write(const fs::path &dir) const {
        ordered_json j;
        j["command"] = command;
        j["n"] = n;
        j["seed"] = seed;
        j["config_hash"] = config_hash;
        j["artifacts"] = artifacts;
        write_file(dir / "manifest.json", j.dump(2) + "\n");
    }
};

Manifest start_manifest(const std::string &command, const RunConfig &cfg, size_t n) {
    return {command, n, cfg.seed, hex64(fnv1a(canonical(command, cfg))), {}};
}

std::vector<CountsRecord> load_dataset(const fs::path &path, size_t *num_qubits) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    auto records = read_dataset(in, num_qubits);
    if (records.empty()) {
        throw ConfigError("dataset is empty: " + path.string());
    }
    return records;
}

NoiseModel load_model(const fs::path &path) {
    auto model = NoiseModel::from_json(read_file(path));
    model.validate();
    return model;
}

std::set<size_t> depths_in(const std::vector<CountsRecord> &records) {
    std::set<size_t> out;
    for (const auto &r : records) {
        out.insert(r.depth);
    }
    return out;
}

std::vector<BasisIndex> inputs_in(const std::vector<CountsRecord> &records) {
    std::set<BasisIndex> out;
    for (const auto &r : records) {
        out.insert(r.input);
    }
    return {out.begin(), out.end()};
}

std::vector<size_t> nonzero_depths(const std::vector<CountsRecord> &records) {
    std::vector<size_t> out;
    for (size_t d : depths_in(records)) {
        if (d > 0) {
            out.push_back(d);
        }
    }
    return out;
}

GroundTruth make_ground_truth(const RunConfig &cfg) {
    if (cfg.preset.empty()) {
        throw ConfigError("--preset is required");
    }
    GroundTruth gt;
    try {
        gt = preset_from_string(cfg.n, cfg.preset);
        if (cfg.readout > 0) {
            gt.with_readout(cfg.readout);
        }
        if (cfg.prep > 0) {
            gt.with_prep_flip(cfg.prep);
        }
        gt.validate();
    } catch (const std::logic_error &e) {
        throw ConfigError(e.what());
    }
    return gt;
}

std::string with_meta(const std::string &json_text, const Manifest &manifest) {
    auto j = ordered_json::parse(json_text);
    ordered_json meta;
    for (const auto &[k, v] : manifest.meta()) {
        meta[k] = v;
    }
    j["meta"] = meta;
    return j.dump(2) + "\n";
}

// ---- simulate ----

void simulate_into(const RunConfig &cfg, const GroundTruth &gt, const std::vector<size_t> &depths,
                   const std::vector<BasisIndex> &inputs, uint64_t seed, const fs::path &dir,
                   const std::string &prefix, Manifest &manifest, std::ostream &out) {
    ensure_dir(dir);
    DatasetSpec spec{depths, cfg.K, inputs, cfg.shots, seed, cfg.workers};
    auto records = generate_dataset(gt, spec);
    std::ostringstream ds;
    write_dataset(ds, records, gt.num_qubits);
    write_file(dir / "dataset.jsonl", ds.str());
    write_file(dir / "profile.json", with_meta(gt.to_json(seed), manifest));
    manifest.artifacts.push_back(prefix + "dataset.jsonl");
    manifest.artifacts.push_back(prefix + "profile.json");
    if (cfg.circuits) {
        std::ostringstream cs;
        for (const auto &c : dataset_circuits(gt.num_qubits, spec)) {
            cs << c.to_json_line() << "\n";
        }
        write_file(dir / "circuits.jsonl", cs.str());
        manifest.artifacts.push_back(prefix + "circuits.jsonl");
    }
    out << "wrote " << records.size() << " records to " << (dir / "dataset.jsonl").string() << "\n";
}

int cmd_simulate(const RunConfig &cfg, std::ostream &out) {
    check_qubits(cfg.n);
    if (cfg.depths.empty()) {
        throw ConfigError("--depths is required");
    }
    auto depths = parse_depths(cfg.depths);
    auto inputs = parse_inputs(cfg.inputs.empty() ? "0" : cfg.inputs, cfg.n);
    if (cfg.K < 1 || cfg.shots < 1) {
        throw ConfigError("--K and --shots must be positive");
    }
    auto gt = make_ground_truth(cfg);
    fs::path dir(cfg.out);
    auto manifest = start_manifest("simulate", cfg, cfg.n);
    simulate_into(cfg, gt, depths, inputs, cfg.seed, dir, "", manifest, out);
    manifest.write(dir);
    return EXIT_OK;
}

// ---- characterize ----

void print_recovery(const NoiseModel &model, const GroundTruth &gt, std::ostream &out) {
    if (gt.num_qubits != model.num_qubits) {
        out << "ground truth has " << gt.num_qubits << " qubits, model has " << model.num_qubits
            << "; skipping L1 report\n";
        return;
    }
    double worst = 0;
    for (const auto &[in, noise] : model.inputs) {
        const auto &truth = gt.rates_for(in);
        double l1 = 0;
        for (size_t i = 0; i < truth.size(); i++) {
            l1 += std::abs(noise.p[i] - truth[i]);
        }
        worst = std::max(worst, l1);
        out << "L1(p_hat, p*) input=" << to_bitstring(in, model.num_qubits) << " " << fixed(l1) << "\n";
    }
    out << "max L1(p_hat, p*) " << fixed(worst) << "\n";
}

std::string diagnostics_csv(const Estimate &est, size_t n) {
    std::ostringstream ss;
    ss << "input,coefficient,A,lambda,points_used,residual,underdetermined\n";
    for (const auto &[in, fit] : est.fits) {
        for (size_t i = 0; i < fit.A.size(); i++) {
            const auto &d = fit.diagnostics[i];
            ss << to_bitstring(in, n) << "," << to_bitstring(i, n) << "," << general(fit.A[i]) << ","
               << general(fit.lambda[i]) << "," << d.points_used << "," << general(d.residual) << ","
               << (d.underdetermined ? 1 : 0) << "\n";
        }
    }
    return ss.str();
}

std::string rb_csv(const std::vector<CountsRecord> &records, size_t n, const std::vector<BasisIndex> &inputs,
                   const std::vector<size_t> &train) {
    std::set<size_t> keep(train.begin(), train.end());
    std::vector<CountsRecord> subset;
    for (const auto &r : records) {
        if (keep.count(r.depth)) {
            subset.push_back(r);
        }
    }
    auto averages = aggregate_all(subset, n);
    std::ostringstream ss;
    ss << "input,A,B,alpha,r,degenerate\n";
    for (BasisIndex in : inputs) {
        auto fit = rb_fit(survival_series(averages, in), n);
        ss << to_bitstring(in, n) << "," << general(fit.A) << "," << general(fit.B) << "," << general(fit.alpha)
           << "," << general(fit.r) << "," << (fit.degenerate ? 1 : 0) << "\n";
    }
    return ss.str();
}

Estimate characterize_into(const RunConfig &cfg, const fs::path &dataset_path, const fs::path &profile_path,
                           const fs::path &dir, const std::string &prefix, Manifest &manifest, std::ostream &out) {
    size_t n = 0;
    auto records = load_dataset(dataset_path, &n);
    manifest.n = n;
    auto train = cfg.train.empty() ? nonzero_depths(records) : parse_depths(cfg.train);
    auto inputs = cfg.inputs.empty() ? inputs_in(records) : parse_inputs(cfg.inputs, n);
    if (train.empty()) {
        throw ConfigError("no training depths");
    }

    auto est = estimate_model(records, n, inputs, {train, false, cfg.workers});
    ensure_dir(dir);
    write_file(dir / "model.json", with_meta(est.model.to_json(), manifest));
    write_file(dir / "diagnostics.csv", diagnostics_csv(est, n));
    manifest.artifacts.push_back(prefix + "model.json");
    manifest.artifacts.push_back(prefix + "diagnostics.csv");
    if (cfg.pavg) {
        write_file(dir / "model_pavg.json", with_meta(est.model.with_average_rates().to_json(), manifest));
        manifest.artifacts.push_back(prefix + "model_pavg.json");
    }
    if (cfg.rb) {
        write_file(dir / "rb.csv", rb_csv(records, n, inputs, train));
        manifest.artifacts.push_back(prefix + "rb.csv");
    }
    out << "characterized " << inputs.size() << " input(s) over " << train.size() << " training depth(s)\n";
    if (!profile_path.empty() && fs::is_regular_file(profile_path)) {
        print_recovery(est.model, GroundTruth::from_json(read_file(profile_path)), out);
    }
    return est;
}

int cmd_characterize(const RunConfig &cfg, std::ostream &out) {
    require_file(cfg.dataset, "dataset");
    fs::path profile = cfg.profile;
    if (!cfg.profile.empty()) {
        require_file(cfg.profile, "profile");
    } else {
        profile = fs::path(cfg.dataset).parent_path() / "profile.json";
    }
    fs::path dir(cfg.out);
    auto manifest = start_manifest("characterize", cfg, 0);
    characterize_into(cfg, cfg.dataset, profile, dir, "", manifest, out);
    manifest.write(dir);
    return EXIT_OK;
}

// ---- predict ----

std::string prediction_csv(const NoiseModel &model, const std::vector<size_t> &depths,
                           const std::vector<BasisIndex> &inputs, const std::vector<CountsRecord> *records,
                           std::ostream &out) {
    size_t n = model.num_qubits;
    std::map<CellKey, DepthAverage> averages;
    if (records) {
        averages = aggregate_all(*records, n);
    }
    std::ostringstream ss;
    ss << "depth,input";
    for (BasisIndex k = 0; k < model.dim(); k++) {
        ss << "," << to_bitstring(k, n);
    }
    if (records) {
        ss << ",jsd";
    }
    ss << "\n";
    for (size_t m : depths) {
        double total = 0;
        size_t scored = 0;
        for (BasisIndex in : inputs) {
            auto q = predict(model, m, in);
            ss << m << "," << to_bitstring(in, n);
            for (double v : q) {
                ss << "," << fixed(v);
            }
            if (records) {
                ss << ",";
                auto it = averages.find({m, in});
                if (it != averages.end()) {
                    double d = jsd(q, it->second.q_hat);
                    ss << fixed(d);
                    total += d;
                    scored++;
                }
            }
            ss << "\n";
        }
        if (scored > 0) {
            out << "depth " << m << " mean JSD(q_hat, q') " << fixed(total / (double)scored) << "\n";
        }
    }
    return ss.str();
}

int cmd_predict(const RunConfig &cfg, std::ostream &out) {
    require_file(cfg.model, "model");
    if (!cfg.dataset.empty()) {
        require_file(cfg.dataset, "dataset");
    }
    if (cfg.depths.empty()) {
        throw ConfigError("--depths is required");
    }
    auto depths = parse_depths(cfg.depths);
    auto model = load_model(cfg.model);
    if (cfg.pavg) {
        model = model.with_average_rates();
    }
    std::vector<BasisIndex> inputs;
    if (cfg.inputs.empty()) {
        for (const auto &[in, noise] : model.inputs) {
            inputs.push_back(in);
        }
    } else {
        inputs = parse_inputs(cfg.inputs, model.num_qubits);
    }
    std::vector<CountsRecord> records;
    if (!cfg.dataset.empty()) {
        size_t n = 0;
        records = load_dataset(cfg.dataset, &n);
        if (n != model.num_qubits) {
            throw ConfigError("dataset and model qubit counts differ");
        }
    }
    fs::path dir(cfg.out);
    ensure_dir(dir);
    auto manifest = start_manifest("predict", cfg, model.num_qubits);
    write_file(dir / "prediction.csv",
               prediction_csv(model, depths, inputs, cfg.dataset.empty() ? nullptr : &records, out));
    manifest.artifacts.push_back("prediction.csv");
    manifest.write(dir);
    return EXIT_OK;
}

// ---- mitigate ----

MitigationReport mitigate_into(const RunConfig &cfg, const NoiseModel &model,
                               const std::vector<CountsRecord> &records, size_t n, const fs::path &dir,
                               const std::string &prefix, Manifest &manifest, std::ostream &out) {
    if (n != model.num_qubits) {
        throw ConfigError("dataset and model qubit counts differ");
    }
    EvaluateOptions opts;
    opts.test_depths = cfg.test.empty() ? nonzero_depths(records) : parse_depths(cfg.test);
    opts.inputs = parse_inputs(cfg.inputs.empty() ? "all" : cfg.inputs, n);
    opts.workers = cfg.workers;
    opts.methods = {Method::Unmitigated};
    std::set<BasisIndex> calibrated;
    for (const auto &r : records) {
        if (r.depth == 0) {
            calibrated.insert(r.input);
        }
    }
    if (calibrated.size() == model.dim()) {
        opts.methods.push_back(Method::Mem);
    } else {
        out << "no complete depth-0 calibration data; MEM baseline skipped\n";
    }
    opts.methods.push_back(Method::Proposed);
    if (cfg.pavg) {
        opts.methods.push_back(Method::ProposedAverage);
    }

    auto report = evaluate(records, n, model, opts);
    ensure_dir(dir);
    std::ostringstream ss;
    report.write_csv(ss);
    write_file(dir / "report.csv", ss.str());
    manifest.artifacts.push_back(prefix + "report.csv");

    out << "depth  method         mean_jsd      std_jsd       flags\n";
    for (const auto &row : report.rows) {
        if (row.input) {
            continue;
        }
        char line[160];
        std::snprintf(line, sizeof line, "%-6zu %-14s %-13s %-13s %s\n", row.depth, method_name(row.method),
                      fixed(row.mean_jsd).c_str(), fixed(row.std_jsd).c_str(), row.flags.c_str());
        out << line;
    }
    return report;
}

int cmd_mitigate(const RunConfig &cfg, std::ostream &out) {
    require_file(cfg.model, "model");
    require_file(cfg.dataset, "dataset");
    auto model = load_model(cfg.model);
    size_t n = 0;
    auto records = load_dataset(cfg.dataset, &n);
    fs::path dir(cfg.out);
    auto manifest = start_manifest("mitigate", cfg, n);
    mitigate_into(cfg, model, records, n, dir, "", manifest, out);
    manifest.write(dir);
    return EXIT_OK;
}

// ---- run-all ----

int cmd_run_all(RunConfig cfg, std::ostream &out, std::ostream &err) {
    check_qubits(cfg.n);
    if (cfg.inputs.empty()) {
        cfg.inputs = "all";
    }
    auto train = parse_depths(cfg.train);
    auto test = parse_depths(cfg.test);
    auto inputs = parse_inputs(cfg.inputs, cfg.n);
    std::vector<size_t> overlap;
    std::set_intersection(train.begin(), train.end(), test.begin(), test.end(), std::back_inserter(overlap));
    if (!overlap.empty()) {
        err << "warning: " << overlap.size() << " depth(s) appear in both training and test sets\n";
    }
    if (std::find(train.begin(), train.end(), 0) != train.end()) {
        throw ConfigError("training depths must be positive");
    }
    auto gt = make_ground_truth(cfg);

    fs::path dir(cfg.out);
    ensure_dir(dir);
    auto manifest = start_manifest("run-all", cfg, cfg.n);

    std::vector<size_t> test_with_calibration = test;
    if (test_with_calibration.empty() || test_with_calibration.front() != 0) {
        test_with_calibration.insert(test_with_calibration.begin(), 0);
    }
    simulate_into(cfg, gt, train, inputs, derive_seed(cfg.seed, {1}), dir / "train", "train/", manifest, out);
    simulate_into(cfg, gt, test_with_calibration, inputs, derive_seed(cfg.seed, {2}), dir / "test", "test/",
                  manifest, out);

    RunConfig stage = cfg;
    stage.train = "";
    for (size_t i = 0; i < train.size(); i++) {
        stage.train += (i ? "," : "") + std::to_string(train[i]);
    }
    auto est = characterize_into(stage, dir / "train" / "dataset.jsonl", dir / "train" / "profile.json", dir, "",
                                 manifest, out);

    size_t n = 0;
    auto test_records = load_dataset(dir / "test" / "dataset.jsonl", &n);
    std::vector<size_t> positive_test;
    for (size_t m : test) {
        if (m > 0) {
            positive_test.push_back(m);
        }
    }
    write_file(dir / "prediction.csv", prediction_csv(est.model, positive_test, inputs, &test_records, out));
    manifest.artifacts.push_back("prediction.csv");
    mitigate_into(cfg, est.model, test_records, n, dir, "", manifest, out);
    manifest.write(dir);
    return EXIT_OK;
}

// ---- wiring ----

void add_dataset_options(CLI::App *sub, RunConfig &cfg) {
    sub->add_option("--n", cfg.n, "Qubit count")->capture_default_str();
    sub->add_option("--K", cfg.K, "Circuits per (depth, input)")->capture_default_str();
    sub->add_option("--shots", cfg.shots, "Shots per circuit")->capture_default_str();
    sub->add_option("--preset", cfg.preset, "Device preset, name:param,... (e.g. iid_bitflip:0.02)");
    sub->add_option("--readout", cfg.readout, "Symmetric readout flip probability added to the preset");
    sub->add_option("--prep", cfg.prep, "State preparation flip probability added to the preset");
    sub->add_flag("--circuits", cfg.circuits, "Also export the sampled circuits");
}

void add_common_options(CLI::App *sub, RunConfig &cfg) {
    sub->add_option("--inputs", cfg.inputs, "Basis inputs: all, or a list of bitstrings / indices");
    sub->add_option("--seed", cfg.seed, "Base seed")->capture_default_str();
    sub->add_option("--out", cfg.out, "Output directory")->capture_default_str();
    sub->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str()->check(
        CLI::PositiveNumber);
    sub->add_option("--config", "Flat key = value file; command-line flags override it");
}

/// Expands `--config FILE` into flags placed before the command-line ones, which therefore win.
std::vector<std::string> expand_config(const std::vector<std::string> &args) {
    if (args.empty()) {
        return args;
    }
    std::string path;
    for (size_t i = 1; i < args.size(); i++) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty()) {
        return args;
    }
    if (!fs::is_regular_file(path)) {
        throw ConfigError("config file not found: " + path);
    }
    std::vector<std::string> out{args[0]};
    for (const auto &item : CLI::ConfigTOML().from_file(path)) {
        bool scoped = item.parents.empty() || (item.parents.size() == 1 && item.parents[0] == args[0]);
        if (!scoped || item.name == "config" || item.inputs.empty()) {
            continue;
        }
        if (item.inputs.size() == 1 && (item.inputs[0] == "true" || item.inputs[0] == "false")) {
            if (item.inputs[0] == "true") {
                out.push_back("--" + item.name);
            }
            continue;
        }
        std::string joined;
        for (size_t i = 0; i < item.inputs.size(); i++) {
            joined += (i ? "," : "") + item.inputs[i];
        }
        out.push_back("--" + item.name);
        out.push_back(joined);
    }
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

}  // namespace

std::vector<size_t> parse_depths(const std::string &text) {
    std::set<size_t> out;
    auto number = [&](const std::string &token) -> size_t {
        if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
            throw ConfigError("bad depth '" + token + "' in '" + text + "'");
        }
        return std::stoull(token);
    };
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token.erase(std::remove_if(token.begin(), token.end(), ::isspace), token.end());
        auto dots = token.find("..");
        if (dots == std::string::npos) {
            out.insert(number(token));
            continue;
        }
        size_t lo = number(token.substr(0, dots));
        size_t hi = number(token.substr(dots + 2));
        if (hi < lo) {
            throw ConfigError("empty depth range '" + token + "'");
        }
        for (size_t d = lo; d <= hi; d++) {
            out.insert(d);
        }
    }
    if (out.empty()) {
        throw ConfigError("no depths in '" + text + "'");
    }
    return {out.begin(), out.end()};
}

std::vector<BasisIndex> parse_inputs(const std::string &text, size_t num_qubits) {
    BasisIndex dim = (BasisIndex)1 << num_qubits;
    std::set<BasisIndex> out;
    if (text == "all") {
        for (BasisIndex in = 0; in < dim; in++) {
            out.insert(in);
        }
        return {out.begin(), out.end()};
    }
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token.erase(std::remove_if(token.begin(), token.end(), ::isspace), token.end());
        if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
            throw ConfigError("bad input '" + token + "'");
        }
        BasisIndex value;
        if (token.size() == num_qubits && token.find_first_not_of("01") == std::string::npos) {
            value = from_bitstring(token);
        } else {
            value = std::stoull(token);
        }
        if (value >= dim) {
            throw ConfigError("input '" + token + "' out of range for " + std::to_string(num_qubits) + " qubits");
        }
        out.insert(value);
    }
    if (out.empty()) {
        throw ConfigError("no inputs in '" + text + "'");
    }
    return {out.begin(), out.end()};
}

uint64_t fnv1a(std::string_view data) {
    uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Pauli-channel noise characterization and mitigation for identity circuits", "paulimit"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    RunConfig cfg;

    auto *simulate = app.add_subcommand("simulate", "Simulate a counts dataset on a planted device");
    add_dataset_options(simulate, cfg);
    add_common_options(simulate, cfg);
    simulate->add_option("--depths", cfg.depths, "Depths, e.g. 1..30 or 0,10,20");

    auto *characterize = app.add_subcommand("characterize", "Fit a noise model to a dataset");
    characterize->add_option("--dataset", cfg.dataset, "Counts dataset (JSON lines)");
    characterize->add_option("--profile", cfg.profile, "Ground truth profile (default: next to the dataset)");
    characterize->add_option("--train", cfg.train, "Training depths (default: every positive depth present)");
    characterize->add_flag("--pavg", cfg.pavg, "Also write the input-averaged model");
    characterize->add_flag("--rb", cfg.rb, "Also fit the randomized benchmarking baseline");
    add_common_options(characterize, cfg);

    auto *predict_cmd = app.add_subcommand("predict", "Predict average outputs from a model");
    predict_cmd->add_option("--model", cfg.model, "Model JSON");
    predict_cmd->add_option("--depths", cfg.depths, "Depths to predict");
    predict_cmd->add_option("--dataset", cfg.dataset, "Optional dataset to score predictions against");
    predict_cmd->add_flag("--pavg", cfg.pavg, "Use the input-averaged rates");
    add_common_options(predict_cmd, cfg);

    auto *mitigate_cmd = app.add_subcommand("mitigate", "Mitigate a dataset and report JSD per method");
    mitigate_cmd->add_option("--model", cfg.model, "Model JSON");
    mitigate_cmd->add_option("--dataset", cfg.dataset, "Counts dataset (JSON lines)");
    mitigate_cmd->add_option("--test", cfg.test, "Test depths (default: every positive depth present)");
    mitigate_cmd->add_flag("--pavg", cfg.pavg, "Also report the input-averaged variant");
    add_common_options(mitigate_cmd, cfg);

    // run-all has its own defaults: a small planted device on the usual training and test grids.
    RunConfig full;
    full.preset = "iid_bitflip:0.02";
    full.K = 200;
    full.train = "1..30";
    full.test = "10,30,50,70,90";
    full.inputs = "all";
    full.seed = 1;
    auto *run_all = app.add_subcommand("run-all", "Simulate, characterize, predict and mitigate in one go");
    add_dataset_options(run_all, full);
    add_common_options(run_all, full);
    run_all->add_option("--train", full.train, "Training depths")->capture_default_str();
    run_all->add_option("--test", full.test, "Test depths")->capture_default_str();
    run_all->add_flag("--pavg", full.pavg, "Also report the input-averaged variant");
    run_all->add_flag("--rb", full.rb, "Also fit the randomized benchmarking baseline");

    try {
        auto expanded = expand_config(args);
        std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
        app.parse(reversed);
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return EXIT_CONFIG;
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? EXIT_OK : EXIT_CONFIG;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(cfg, out);
        }
        if (characterize->parsed()) {
            return cmd_characterize(cfg, out);
        }
        if (predict_cmd->parsed()) {
            return cmd_predict(cfg, out);
        }
        if (mitigate_cmd->parsed()) {
            return cmd_mitigate(cfg, out);
        }
        return cmd_run_all(full, out, err);
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return EXIT_CONFIG;
    } catch (const IoError &e) {
        err << "i/o error: " << e.what() << "\n";
        return EXIT_CONFIG;
    } catch (const CoverageError &e) {
        err << "coverage error: " << e.what() << "\n";
        return EXIT_COVERAGE;
    } catch (const NumericError &e) {
        err << "numeric error: " << e.what() << "\n";
        return EXIT_NUMERIC;
    } catch (const StructuralError &e) {
        err << "input error: " << e.what() << "\n";
        return EXIT_CONFIG;
    } catch (const DomainError &e) {
        err << "input error: " << e.what() << "\n";
        return EXIT_CONFIG;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return EXIT_FAILURE_OTHER;
    }
}

}  // namespace paulimit::cli
