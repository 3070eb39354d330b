// Copyright 2026 The qfusion Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfusion/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qfusion/circuit.hpp"
#include "qfusion/common.hpp"
#include "qfusion/dataio.hpp"
#include "qfusion/encoding.hpp"
#include "qfusion/metrics.hpp"
#include "qfusion/mitigation.hpp"
#include "qfusion/nn.hpp"
#include "qfusion/noise.hpp"
#include "qfusion/pqc_metrics.hpp"
#include "qfusion/qnn.hpp"
#include "qfusion/rng.hpp"
#include "qfusion/training.hpp"

namespace qfusion::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Stopwatch {
  public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
};

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string &raw) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(raw);
    while (std::getline(in, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

[[noreturn]] void bad_value(const std::string &key, const std::string &value,
                            const std::string &want) {
    throw ConfigError("config key '" + key + "' needs " + want + ", got '" +
                      value + "'");
}

} // namespace

const std::vector<std::string> &known_keys() {
    static const std::vector<std::string> keys = {
        "ansatz",        "batch_size",     "circuits",
        "data",          "data_out",       "drem_alpha",
        "drem_holdout_qnns", "drem_inputs", "drem_qnns",
        "ec_samples",    "encoding",       "epochs",
        "eval_limit",    "exp_bins",       "exp_samples",
        "hae_blocks",    "hae_qubits_per_block", "layer_sweep",
        "layers",        "learning_rate",  "model",
        "model_checkpoint", "noise_channel", "noise_channels",
        "noise_p",       "noise_ps",       "output_dir",
        "patience",      "reference_epochs", "seed",
        "synth_noise_sigma", "synth_samples", "test_fraction",
        "threads",       "validation_fraction", "zne_scales",
    };
    return keys;
}

void RunConfig::set(const std::string &key, const std::string &value) {
    const auto &keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ConfigError("unknown config key '" + key + "'");
    }
    if (value.empty()) {
        throw ConfigError("config key '" + key + "' has an empty value");
    }
    values_[key] = value;
}

bool RunConfig::has(const std::string &key) const {
    return values_.count(key) > 0;
}

std::string RunConfig::get_string(const std::string &key,
                                  const std::string &fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::int64_t RunConfig::get_int(const std::string &key,
                                std::int64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return fallback;
    }
    try {
        std::size_t used = 0;
        const long long v = std::stoll(it->second, &used);
        if (used != it->second.size()) {
            bad_value(key, it->second, "an integer");
        }
        return v;
    } catch (const ConfigError &) {
        throw;
    } catch (const std::exception &) {
        bad_value(key, it->second, "an integer");
    }
}

std::uint64_t RunConfig::get_uint(const std::string &key,
                                  std::uint64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return fallback;
    }
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(it->second, &used);
        if (used != it->second.size() || it->second.front() == '-') {
            bad_value(key, it->second, "a nonnegative integer");
        }
        return v;
    } catch (const ConfigError &) {
        throw;
    } catch (const std::exception &) {
        bad_value(key, it->second, "a nonnegative integer");
    }
}

double RunConfig::get_double(const std::string &key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return fallback;
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) {
            bad_value(key, it->second, "a number");
        }
        return v;
    } catch (const ConfigError &) {
        throw;
    } catch (const std::exception &) {
        bad_value(key, it->second, "a number");
    }
}

std::vector<std::string>
RunConfig::get_string_list(const std::string &key,
                           const std::string &fallback) const {
    const std::string raw = get_string(key, fallback);
    std::vector<std::string> items = split_commas(raw);
    items.erase(std::remove_if(items.begin(), items.end(),
                               [](const std::string &s) { return s.empty(); }),
                items.end());
    if (items.empty()) {
        bad_value(key, raw, "a comma-separated list");
    }
    return items;
}

std::vector<int> RunConfig::get_int_list(const std::string &key,
                                         const std::string &fallback) const {
    std::vector<int> out;
    for (const std::string &item : get_string_list(key, fallback)) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) {
                bad_value(key, item, "integers");
            }
            out.push_back(v);
        } catch (const ConfigError &) {
            throw;
        } catch (const std::exception &) {
            bad_value(key, item, "integers");
        }
    }
    return out;
}

std::vector<double>
RunConfig::get_double_list(const std::string &key,
                           const std::string &fallback) const {
    std::vector<double> out;
    for (const std::string &item : get_string_list(key, fallback)) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) {
                bad_value(key, item, "numbers");
            }
            out.push_back(v);
        } catch (const ConfigError &) {
            throw;
        } catch (const std::exception &) {
            bad_value(key, item, "numbers");
        }
    }
    return out;
}

RunConfig parse_config_text(const std::string &text) {
    RunConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              " is not 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (config.has(key)) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              " repeats key '" + key + "'");
        }
        try {
            config.set(key, value);
        } catch (const ConfigError &e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " +
                              e.what());
        }
    }
    return config;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in.good()) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::uint64_t config_hash(const RunConfig &config) {
    std::uint64_t h = 1469598103934665603ULL;
    const auto mix = [&h](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    };
    for (const auto &[key, value] : config.values()) {
        for (const char c : key) {
            mix(c);
        }
        mix('=');
        for (const char c : value) {
            mix(c);
        }
        mix('\n');
    }
    return h;
}

std::string config_hash_hex(const RunConfig &config) {
    std::ostringstream os;
    os << "0x" << std::hex << std::setw(16) << std::setfill('0')
       << config_hash(config);
    return os.str();
}

namespace {

struct OutputLayout {
    fs::path root;
    fs::path checkpoints;
    fs::path logs;
    fs::path reports;
};

struct Context {
    const RunConfig &config;
    std::uint64_t seed = 0;
    std::string hash;
    OutputLayout out;
};

OutputLayout make_layout(const RunConfig &config) {
    OutputLayout layout;
    layout.root = config.get_string("output_dir", "out");
    layout.checkpoints = layout.root / "checkpoints";
    layout.logs = layout.root / "logs";
    layout.reports = layout.root / "reports";
    fs::create_directories(layout.checkpoints);
    fs::create_directories(layout.logs);
    fs::create_directories(layout.reports);
    return layout;
}

void write_text(const fs::path &path, const std::string &content) {
    std::ofstream out(path);
    detail::require(out.good(),
                    "cannot open '" + path.string() + "' for writing");
    out << content;
    detail::require(out.good(), "write to '" + path.string() + "' failed");
}

void write_json(const fs::path &path, const json &j) {
    write_text(path, j.dump(2) + "\n");
}

encoding::EncoderConfig encoder_from(const RunConfig &config) {
    encoding::EncoderConfig enc;
    const std::string scheme = config.get_string("encoding", "amplitude");
    if (scheme == "amplitude") {
        enc.scheme = encoding::Scheme::Amplitude;
    } else if (scheme == "hae") {
        enc.scheme = encoding::Scheme::HAE;
    } else {
        throw ConfigError("config key 'encoding' must be 'amplitude' or "
                          "'hae', got '" +
                          scheme + "'");
    }
    enc.input_dim = data::kFusionFeatures;
    enc.hae_blocks = static_cast<int>(config.get_int("hae_blocks", 2));
    enc.hae_qubits_per_block =
        static_cast<int>(config.get_int("hae_qubits_per_block", 4));
    encoding::validate(enc);
    return enc;
}

training::TrainConfig train_config_from(const Context &ctx) {
    training::TrainConfig tc;
    tc.learning_rate = ctx.config.get_double("learning_rate", 0.002);
    tc.batch_size = static_cast<int>(ctx.config.get_int("batch_size", 100));
    tc.epochs = static_cast<int>(ctx.config.get_int("epochs", 50));
    tc.seed = ctx.seed;
    tc.validation_fraction =
        ctx.config.get_double("validation_fraction", 0.25);
    tc.patience = static_cast<int>(ctx.config.get_int("patience", 20));
    training::validate(tc);
    return tc;
}

double default_noise_sigma() {
    // Label noise that puts the generator's best attainable R^2 near 0.95.
    return data::kSynthTargetStd / std::sqrt(19.0);
}

data::Dataset dataset_from(const Context &ctx) {
    if (ctx.config.has("data")) {
        return data::load_dataset(ctx.config.get_string("data", ""));
    }
    const auto n = static_cast<int>(ctx.config.get_int("synth_samples", 2000));
    const double sigma =
        ctx.config.get_double("synth_noise_sigma", default_noise_sigma());
    return data::synth_dataset(n, ctx.seed, sigma);
}

double checked_fraction(const Context &ctx, const std::string &key,
                        double fallback) {
    const double f = ctx.config.get_double(key, fallback);
    if (!(f > 0.0 && f < 1.0)) {
        throw ConfigError("config key '" + key + "' must lie in (0, 1)");
    }
    return f;
}

std::vector<double> labels_of(const data::Dataset &set) {
    std::vector<double> out;
    out.reserve(set.size());
    for (const auto &sample : set) {
        out.push_back(sample.affinity);
    }
    return out;
}

/// Five metrics, falling back to correlation-free values when the
/// prediction vector is constant (degenerate but reportable).
struct SafeMetrics {
    data::MetricReport report;
    bool degenerate = false;
};

SafeMetrics safe_metrics(const std::vector<double> &predictions,
                         const std::vector<double> &labels) {
    SafeMetrics out;
    try {
        out.report = data::evaluate(predictions, labels);
        return out;
    } catch (const std::exception &) {
        out.degenerate = true;
    }
    const auto n = static_cast<double>(labels.size());
    double se = 0.0;
    double ae = 0.0;
    double label_mean = 0.0;
    for (const double y : labels) {
        label_mean += y / n;
    }
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double d = predictions[i] - labels[i];
        se += d * d;
        ae += std::abs(d);
        ss_tot += (labels[i] - label_mean) * (labels[i] - label_mean);
    }
    out.report.rmse = std::sqrt(se / n);
    out.report.mae = ae / n;
    out.report.r2 =
        ss_tot > 0.0 ? 1.0 - se / ss_tot
                     : std::numeric_limits<double>::quiet_NaN();
    out.report.pearson = std::numeric_limits<double>::quiet_NaN();
    out.report.spearman = std::numeric_limits<double>::quiet_NaN();
    return out;
}

json finite_or_null(double v) {
    return std::isfinite(v) ? json(v) : json();
}

json metrics_json(const SafeMetrics &m) {
    return {{"rmse", m.report.rmse},
            {"mae", m.report.mae},
            {"r2", finite_or_null(m.report.r2)},
            {"pearson", finite_or_null(m.report.pearson)},
            {"spearman", finite_or_null(m.report.spearman)},
            {"degenerate", m.degenerate}};
}

std::string metrics_line(const SafeMetrics &m) {
    std::string line = data::format_report(m.report);
    if (m.degenerate) {
        line += " (constant predictions; correlations undefined)";
    }
    return line;
}

SafeMetrics model_metrics(const training::Trainable &model,
                          const data::Dataset &set) {
    std::vector<double> predictions;
    predictions.reserve(set.size());
    for (const auto &sample : set) {
        predictions.push_back(model.predict(sample));
    }
    return safe_metrics(predictions, labels_of(set));
}

void save_qnn_artifact(const qnn::QnnModel &model, const Context &ctx,
                       const fs::path &path) {
    json j;
    qnn::to_json(j, model);
    j["seed"] = ctx.seed;
    j["config_hash"] = ctx.hash;
    write_json(path, j);
}

void save_classical_artifact(const nn::FusionBaseline &model,
                             const Context &ctx, const fs::path &path) {
    json j;
    nn::to_json(j, model);
    j["seed"] = ctx.seed;
    j["config_hash"] = ctx.hash;
    write_json(path, j);
}

void save_drem_artifact(const mitigation::DremLayer &layer, const Context &ctx,
                        const fs::path &path) {
    json j;
    nn::to_json(j, layer.net);
    j["seed"] = ctx.seed;
    j["config_hash"] = ctx.hash;
    j["l2_alpha"] = layer.l2_alpha;
    write_json(path, j);
}

std::string csv_with_hash(const Context &ctx,
                          const training::ConvergenceLog &log) {
    return "# config_hash=" + ctx.hash + "\n" + training::log_to_csv(log);
}

struct TrainedQuantum {
    qnn::QnnModel model;
    training::TrainResult result;
    double wall_ms = 0.0;
};

TrainedQuantum train_quantum(const Context &ctx,
                             const data::Dataset &train_set,
                             const data::Dataset &validation_set,
                             const training::TrainConfig &tc) {
    TrainedQuantum out;
    out.model = qnn::make_qnn(encoder_from(ctx.config),
                              static_cast<int>(ctx.config.get_int("ansatz", 1)),
                              static_cast<int>(ctx.config.get_int("layers", 10)),
                              ctx.seed);
    training::QnnTrainable trainable(out.model);
    const Stopwatch sw;
    out.result = training::train_on_splits(trainable, train_set,
                                           validation_set, tc);
    out.wall_ms = sw.ms();
    return out;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

int run_train(const Context &ctx) {
    const std::string which = ctx.config.get_string("model", "both");
    if (which != "quantum" && which != "classical" && which != "both") {
        throw ConfigError("config key 'model' must be 'quantum', 'classical' "
                          "or 'both', got '" +
                          which + "'");
    }
    const data::Dataset dataset = dataset_from(ctx);
    const double test_fraction = checked_fraction(ctx, "test_fraction", 0.2);
    const training::TrainConfig tc = train_config_from(ctx);

    const auto [rest, test_set] = data::split(
        dataset, test_fraction, rng::substream_seed(ctx.seed, 0x7e57));
    const auto [train_set, validation_set] =
        data::split(rest, tc.validation_fraction, tc.seed);

    std::ostringstream text;
    text << "# config_hash=" << ctx.hash << "\n";
    text << "subcommand=train seed=" << ctx.seed << "\n";
    text << "samples: total=" << dataset.size() << " train="
         << train_set.size() << " validation=" << validation_set.size()
         << " test=" << test_set.size() << "\n";

    json report = {{"config_hash", ctx.hash},
                   {"subcommand", "train"},
                   {"seed", ctx.seed},
                   {"samples",
                    {{"total", dataset.size()},
                     {"train", train_set.size()},
                     {"validation", validation_set.size()},
                     {"test", test_set.size()}}},
                   {"models", json::object()}};

    const auto emit = [&](const std::string &name,
                          const training::Trainable &model,
                          const training::TrainResult &result,
                          double wall_ms) {
        const SafeMetrics val = model_metrics(model, validation_set);
        const SafeMetrics test = model_metrics(model, test_set);
        text << "\nmodel=" << name << " params=" << model.num_params()
             << " best_epoch=" << result.best_epoch
             << " best_val_loss=" << result.best_validation_loss
             << " epochs_run=" << result.log.size()
             << " wall_ms=" << wall_ms << "\n";
        text << "  validation: " << metrics_line(val) << "\n";
        text << "  test:       " << metrics_line(test) << "\n";
        report["models"][name] = {
            {"params", model.num_params()},
            {"best_epoch", result.best_epoch},
            {"best_validation_loss", result.best_validation_loss},
            {"epochs_run", result.log.size()},
            {"wall_ms", wall_ms},
            {"validation", metrics_json(val)},
            {"test", metrics_json(test)}};
    };

    if (which == "quantum" || which == "both") {
        const TrainedQuantum trained =
            train_quantum(ctx, train_set, validation_set, tc);
        save_qnn_artifact(trained.model, ctx,
                          ctx.out.checkpoints / "quantum_fusion.json");
        write_text(ctx.out.logs / "quantum_train.csv",
                   csv_with_hash(ctx, trained.result.log));
        qnn::QnnModel model_copy = trained.model;
        emit("quantum", training::QnnTrainable(model_copy), trained.result,
             trained.wall_ms);
    }
    if (which == "classical" || which == "both") {
        nn::FusionBaseline baseline = nn::build_classical_fusion_baseline();
        baseline.init_uniform(rng::substream_seed(ctx.seed, 0xc1a5));
        training::ClassicalTrainable trainable(baseline);
        const Stopwatch sw;
        const training::TrainResult result =
            training::train_on_splits(trainable, train_set, validation_set, tc);
        save_classical_artifact(baseline, ctx,
                                ctx.out.checkpoints / "classical_fusion.json");
        write_text(ctx.out.logs / "classical_train.csv",
                   csv_with_hash(ctx, result.log));
        emit("classical", trainable, result, sw.ms());
    }

    write_text(ctx.out.reports / "train_report.txt", text.str());
    write_json(ctx.out.reports / "train_report.json", report);
    return 0;
}

// ---------------------------------------------------------------------------
// pqc-metrics
// ---------------------------------------------------------------------------

int run_pqc_metrics(const Context &ctx) {
    const encoding::EncoderConfig encoder = encoder_from(ctx.config);
    const int qubits = encoding::num_qubits(encoder);
    const std::vector<int> circuits =
        ctx.config.get_int_list("circuits", "1,2,3,4,5,6");
    std::vector<int> layer_list;
    if (ctx.config.has("layer_sweep")) {
        layer_list = ctx.config.get_int_list("layer_sweep", "");
    } else {
        layer_list.push_back(
            static_cast<int>(ctx.config.get_int("layers", 10)));
    }
    const auto exp_samples =
        static_cast<int>(ctx.config.get_int("exp_samples", 2000));
    const auto exp_bins = static_cast<int>(ctx.config.get_int("exp_bins", 75));
    const auto ec_samples =
        static_cast<int>(ctx.config.get_int("ec_samples", 200));

    std::ostringstream text;
    text << "# config_hash=" << ctx.hash << "\n";
    json records = json::array();

    const auto record = [&](int id, int layers, const std::string &metric,
                            double value, json extra, double wall_ms) {
        std::ostringstream line;
        line << "circuit=" << id << " layers=" << layers
             << " qubits=" << qubits << " metric=" << metric << " value=";
        if (std::isfinite(value)) {
            line << std::setprecision(12) << value;
        } else {
            line << "inf";
        }
        for (const auto &[k, v] : extra.items()) {
            line << ' ' << k << '=' << v.dump();
        }
        line << " seed=" << ctx.seed << " wall_ms=" << std::setprecision(6)
             << wall_ms << "\n";
        text << line.str();
        extra["circuit"] = id;
        extra["layers"] = layers;
        extra["qubits"] = qubits;
        extra["metric"] = metric;
        extra["value"] = finite_or_null(value);
        extra["seed"] = ctx.seed;
        extra["wall_ms"] = wall_ms;
        records.push_back(extra);
    };

    for (const int id : circuits) {
        for (const int layers : layer_list) {
            const circuit::Circuit c =
                circuit::build_ansatz(id, qubits, layers);
            record(id, layers, "param_count",
                   static_cast<double>(c.num_params()),
                   {{"head_params", qubits + 1}}, 0.0);

            const auto stream =
                static_cast<std::uint64_t>(id) * 1000 +
                static_cast<std::uint64_t>(layers);
            const Stopwatch sw_e;
            const pqc::ExpressibilityReport er = pqc::expressibility(
                c, exp_samples, exp_bins,
                rng::substream_seed(ctx.seed, 2 * stream));
            record(id, layers, "expressibility_kl", er.kl_divergence,
                   {{"samples", er.num_samples},
                    {"bins", er.num_bins},
                    {"untrainable", er.untrainable}},
                   sw_e.ms());

            const Stopwatch sw_q;
            const pqc::EntanglingCapacityReport qr = pqc::entangling_capacity(
                c, ec_samples, rng::substream_seed(ctx.seed, 2 * stream + 1));
            record(id, layers, "entangling_q", qr.mean_q,
                   {{"samples", qr.num_samples}}, sw_q.ms());
        }
    }

    write_text(ctx.out.reports / "pqc_metrics.txt", text.str());
    write_json(ctx.out.reports / "pqc_metrics.json",
               json{{"config_hash", ctx.hash},
                    {"subcommand", "pqc-metrics"},
                    {"records", records}});
    return 0;
}

// ---------------------------------------------------------------------------
// noise-sweep
// ---------------------------------------------------------------------------

int run_noise_sweep(const Context &ctx) {
    const data::Dataset dataset = dataset_from(ctx);
    const double test_fraction = checked_fraction(ctx, "test_fraction", 0.2);
    const training::TrainConfig tc = train_config_from(ctx);
    const auto [rest, test_all] = data::split(
        dataset, test_fraction, rng::substream_seed(ctx.seed, 0x7e57));
    const auto [train_set, validation_set] =
        data::split(rest, tc.validation_fraction, tc.seed);

    data::Dataset test_set = test_all;
    const auto limit = ctx.config.get_int("eval_limit", 0);
    if (limit > 0 && static_cast<std::size_t>(limit) < test_set.size()) {
        test_set.resize(static_cast<std::size_t>(limit));
    }

    qnn::QnnModel model;
    if (ctx.config.has("model_checkpoint")) {
        model = qnn::load_checkpoint(
                    ctx.config.get_string("model_checkpoint", ""))
                    .first;
    } else {
        model = train_quantum(ctx, train_set, validation_set, tc).model;
    }

    std::vector<noise::ChannelKind> kinds;
    for (const std::string &name : ctx.config.get_string_list(
             "noise_channels",
             "depolarizing,phase-damping,amplitude-damping")) {
        kinds.push_back(noise::channel_from_name(name));
    }
    const std::vector<double> ps =
        ctx.config.get_double_list("noise_ps", "0.01,0.05,0.1");
    const std::vector<int> scales =
        ctx.config.get_int_list("zne_scales", "1,3");

    const auto drem_qnns =
        static_cast<int>(ctx.config.get_int("drem_qnns", 100));
    auto drem_inputs =
        static_cast<std::size_t>(ctx.config.get_int("drem_inputs", 32));
    drem_inputs = std::min(drem_inputs, train_set.size());
    std::vector<std::vector<double>> corpus_inputs;
    for (std::size_t i = 0; i < drem_inputs; ++i) {
        corpus_inputs.push_back(train_set[i].features);
    }
    const double drem_alpha = ctx.config.get_double("drem_alpha", 1e-5);

    const std::vector<double> labels = labels_of(test_set);

    std::ostringstream text;
    text << "# config_hash=" << ctx.hash << "\n";
    text << "subcommand=noise-sweep seed=" << ctx.seed
         << " test_samples=" << test_set.size() << "\n";
    json conditions = json::array();

    int condition_index = 0;
    for (const noise::ChannelKind kind : kinds) {
        for (const double p : ps) {
            const noise::KrausChannel channel = noise::make_channel(kind, p);
            const mitigation::DremCorpus corpus =
                mitigation::build_drem_corpus(
                    drem_qnns, model.ansatz_id, model.layers, model.encoder,
                    kind, p, corpus_inputs,
                    rng::substream_seed(
                        ctx.seed,
                        0xd300 + static_cast<std::uint64_t>(condition_index)));
            const mitigation::DremLayer drem =
                mitigation::train_drem(corpus, drem_alpha, tc);

            std::vector<double> pred_ideal;
            std::vector<double> pred_noisy;
            std::vector<double> pred_drem;
            std::vector<double> pred_zne;
            for (const auto &sample : test_set) {
                pred_ideal.push_back(
                    qnn::forward(model, sample.features).prediction);
                const std::vector<double> z_noisy = qnn::noisy_expectations(
                    model, sample.features, channel);
                pred_noisy.push_back(qnn::head_prediction(model, z_noisy));
                pred_drem.push_back(qnn::head_prediction(
                    model, mitigation::apply_drem(drem, z_noisy)));
                pred_zne.push_back(qnn::head_prediction(
                    model, mitigation::zne_estimate(model, sample.features,
                                                    kind, p, scales)));
            }

            const SafeMetrics m_ideal = safe_metrics(pred_ideal, labels);
            const SafeMetrics m_noisy = safe_metrics(pred_noisy, labels);
            const SafeMetrics m_drem = safe_metrics(pred_drem, labels);
            const SafeMetrics m_zne = safe_metrics(pred_zne, labels);

            text << "\ncondition: channel=" << noise::channel_name(kind)
                 << " p=" << p << "\n";
            text << "  noiseless: " << metrics_line(m_ideal) << "\n";
            text << "  noisy:     " << metrics_line(m_noisy) << "\n";
            text << "  drem:      " << metrics_line(m_drem) << "\n";
            text << "  zne:       " << metrics_line(m_zne) << "\n";
            text << "  first-" << std::min<std::size_t>(20, test_set.size())
                 << " predictions (id label noiseless noisy drem zne):\n";
            json rows = json::array();
            for (std::size_t i = 0;
                 i < std::min<std::size_t>(20, test_set.size()); ++i) {
                text << "    " << test_set[i].id << ' ' << labels[i] << ' '
                     << pred_ideal[i] << ' ' << pred_noisy[i] << ' '
                     << pred_drem[i] << ' ' << pred_zne[i] << "\n";
                rows.push_back({{"id", test_set[i].id},
                                {"label", labels[i]},
                                {"noiseless", pred_ideal[i]},
                                {"noisy", pred_noisy[i]},
                                {"drem", pred_drem[i]},
                                {"zne", pred_zne[i]}});
            }
            conditions.push_back({{"channel", noise::channel_name(kind)},
                                  {"p", p},
                                  {"noiseless", metrics_json(m_ideal)},
                                  {"noisy", metrics_json(m_noisy)},
                                  {"drem", metrics_json(m_drem)},
                                  {"zne", metrics_json(m_zne)},
                                  {"first_predictions", rows}});
            ++condition_index;
        }
    }

    write_text(ctx.out.reports / "noise_sweep.txt", text.str());
    write_json(ctx.out.reports / "noise_sweep.json",
               json{{"config_hash", ctx.hash},
                    {"subcommand", "noise-sweep"},
                    {"seed", ctx.seed},
                    {"conditions", conditions}});
    return 0;
}

// ---------------------------------------------------------------------------
// drem-train
// ---------------------------------------------------------------------------

int run_drem_train(const Context &ctx) {
    const data::Dataset dataset = dataset_from(ctx);
    const encoding::EncoderConfig encoder = encoder_from(ctx.config);
    const auto ansatz = static_cast<int>(ctx.config.get_int("ansatz", 1));
    const auto layers = static_cast<int>(ctx.config.get_int("layers", 10));
    const noise::ChannelKind kind = noise::channel_from_name(
        ctx.config.get_string("noise_channel", "depolarizing"));
    const double p = ctx.config.get_double("noise_p", 0.05);
    const auto num_qnns = static_cast<int>(ctx.config.get_int("drem_qnns", 100));
    const auto holdout_qnns =
        static_cast<int>(ctx.config.get_int("drem_holdout_qnns", 20));
    const double alpha = ctx.config.get_double("drem_alpha", 1e-5);
    const training::TrainConfig tc = train_config_from(ctx);

    auto input_count =
        static_cast<std::size_t>(ctx.config.get_int("drem_inputs", 40));
    input_count = std::min(input_count, dataset.size());
    detail::require(input_count >= 1, "drem-train needs at least one input");
    std::vector<std::vector<double>> inputs;
    for (std::size_t i = 0; i < input_count; ++i) {
        inputs.push_back(dataset[i].features);
    }

    const Stopwatch sw_corpus;
    const mitigation::DremCorpus corpus = mitigation::build_drem_corpus(
        num_qnns, ansatz, layers, encoder, kind, p, inputs, ctx.seed);
    const double corpus_ms = sw_corpus.ms();

    const mitigation::DremCorpus holdout = mitigation::build_drem_corpus(
        holdout_qnns, ansatz, layers, encoder, kind, p, inputs,
        rng::substream_seed(ctx.seed, 0x401d));

    const Stopwatch sw_train;
    const mitigation::DremLayer layer =
        mitigation::train_drem(corpus, alpha, tc);
    const double train_ms = sw_train.ms();

    save_drem_artifact(layer, ctx, ctx.out.checkpoints / "drem.json");
    mitigation::save_corpus(corpus,
                            (ctx.out.logs / "drem_corpus.txt").string());

    const double mse_before = mitigation::corpus_mse_unmitigated(holdout);
    const double mse_after = mitigation::corpus_mse_mitigated(layer, holdout);

    // Reference run: the fusion model this layer would serve, timed under
    // the same optimizer settings.
    const auto reference_epochs = static_cast<int>(
        ctx.config.get_int("reference_epochs", tc.epochs));
    double reference_ms = 0.0;
    if (reference_epochs > 0) {
        training::TrainConfig ref = tc;
        ref.epochs = reference_epochs;
        const auto [train_set, validation_set] =
            data::split(dataset, ref.validation_fraction, ref.seed);
        const Stopwatch sw_ref;
        (void)train_quantum(ctx, train_set, validation_set, ref);
        reference_ms = sw_ref.ms();
    }
    const double drem_total_ms = corpus_ms + train_ms;
    const double fraction =
        reference_ms > 0.0 ? drem_total_ms / reference_ms
                           : std::numeric_limits<double>::quiet_NaN();

    std::ostringstream text;
    text << "# config_hash=" << ctx.hash << "\n";
    text << "subcommand=drem-train seed=" << ctx.seed << "\n";
    text << "recipe: qnns=" << num_qnns << " holdout_qnns=" << holdout_qnns
         << " inputs=" << input_count << " ansatz=" << ansatz
         << " layers=" << layers << " channel=" << noise::channel_name(kind)
         << " p=" << p << " alpha=" << alpha << "\n";
    text << "holdout_mse_unmitigated=" << mse_before << "\n";
    text << "holdout_mse_mitigated=" << mse_after << "\n";
    text << "holdout_mse_ratio=" << mse_after / mse_before << "\n";
    text << "corpus_ms=" << corpus_ms << " drem_train_ms=" << train_ms
         << " reference_train_ms=" << reference_ms << "\n";
    text << "time_fraction="
         << (std::isfinite(fraction) ? std::to_string(fraction) : "nan")
         << "\n";

    write_text(ctx.out.reports / "drem_train.txt", text.str());
    write_json(ctx.out.reports / "drem_train.json",
               json{{"config_hash", ctx.hash},
                    {"subcommand", "drem-train"},
                    {"seed", ctx.seed},
                    {"qnns", num_qnns},
                    {"holdout_qnns", holdout_qnns},
                    {"inputs", input_count},
                    {"ansatz", ansatz},
                    {"layers", layers},
                    {"channel", noise::channel_name(kind)},
                    {"p", p},
                    {"alpha", alpha},
                    {"holdout_mse_unmitigated", mse_before},
                    {"holdout_mse_mitigated", mse_after},
                    {"holdout_mse_ratio", mse_after / mse_before},
                    {"corpus_ms", corpus_ms},
                    {"drem_train_ms", train_ms},
                    {"reference_train_ms", reference_ms},
                    {"time_fraction", finite_or_null(fraction)}});
    return 0;
}

// ---------------------------------------------------------------------------
// zne-eval
// ---------------------------------------------------------------------------

int run_zne_eval(const Context &ctx) {
    qnn::QnnModel model;
    if (ctx.config.has("model_checkpoint")) {
        model = qnn::load_checkpoint(
                    ctx.config.get_string("model_checkpoint", ""))
                    .first;
    } else {
        model = qnn::make_qnn(encoder_from(ctx.config),
                              static_cast<int>(ctx.config.get_int("ansatz", 1)),
                              static_cast<int>(ctx.config.get_int("layers", 10)),
                              ctx.seed);
    }
    data::Dataset dataset = dataset_from(ctx);
    const auto limit = ctx.config.get_int("eval_limit", 0);
    if (limit > 0 && static_cast<std::size_t>(limit) < dataset.size()) {
        dataset.resize(static_cast<std::size_t>(limit));
    }
    const noise::ChannelKind kind = noise::channel_from_name(
        ctx.config.get_string("noise_channel", "depolarizing"));
    const double p = ctx.config.get_double("noise_p", 0.05);
    const std::vector<int> scales =
        ctx.config.get_int_list("zne_scales", "1,3");
    const noise::KrausChannel channel = noise::make_channel(kind, p);

    const int n = model.num_qubits();
    double se_noisy = 0.0;
    double se_zne = 0.0;
    json rows = json::array();
    std::ostringstream table;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto &sample = dataset[i];
        const std::vector<double> z_ideal =
            qnn::noiseless_expectations(model, sample.features);
        const std::vector<double> z_noisy =
            qnn::noisy_expectations(model, sample.features, channel);
        const std::vector<double> z_zne = mitigation::zne_estimate(
            model, sample.features, kind, p, scales);
        for (int q = 0; q < n; ++q) {
            const auto qi = static_cast<std::size_t>(q);
            se_noisy += (z_noisy[qi] - z_ideal[qi]) * (z_noisy[qi] - z_ideal[qi]);
            se_zne += (z_zne[qi] - z_ideal[qi]) * (z_zne[qi] - z_ideal[qi]);
        }
        if (i < 20) {
            table << "    " << sample.id;
            for (int q = 0; q < n; ++q) {
                const auto qi = static_cast<std::size_t>(q);
                table << "  [" << z_ideal[qi] << ' ' << z_noisy[qi] << ' '
                      << z_zne[qi] << ']';
            }
            table << "\n";
            rows.push_back({{"id", sample.id},
                            {"ideal", z_ideal},
                            {"noisy", z_noisy},
                            {"zne", z_zne}});
        }
    }
    const double denom =
        static_cast<double>(dataset.size()) * static_cast<double>(n);
    const double mse_noisy = se_noisy / denom;
    const double mse_zne = se_zne / denom;

    std::ostringstream text;
    text << "# config_hash=" << ctx.hash << "\n";
    text << "subcommand=zne-eval seed=" << ctx.seed
         << " samples=" << dataset.size()
         << " channel=" << noise::channel_name(kind) << " p=" << p
         << " scales=";
    for (std::size_t i = 0; i < scales.size(); ++i) {
        text << (i ? "," : "") << scales[i];
    }
    text << "\n";
    text << "expectation_mse_noisy=" << mse_noisy << "\n";
    text << "expectation_mse_zne=" << mse_zne << "\n";
    text << "first-" << std::min<std::size_t>(20, dataset.size())
         << " expectations (id, per-qubit [ideal noisy zne]):\n"
         << table.str();

    write_text(ctx.out.reports / "zne_eval.txt", text.str());
    write_json(ctx.out.reports / "zne_eval.json",
               json{{"config_hash", ctx.hash},
                    {"subcommand", "zne-eval"},
                    {"seed", ctx.seed},
                    {"samples", dataset.size()},
                    {"channel", noise::channel_name(kind)},
                    {"p", p},
                    {"scales", scales},
                    {"expectation_mse_noisy", mse_noisy},
                    {"expectation_mse_zne", mse_zne},
                    {"first_expectations", rows}});
    return 0;
}

// ---------------------------------------------------------------------------
// synth-data
// ---------------------------------------------------------------------------

int run_synth_data(const Context &ctx) {
    const auto n = static_cast<int>(ctx.config.get_int("synth_samples", 2000));
    const double sigma =
        ctx.config.get_double("synth_noise_sigma", default_noise_sigma());
    const data::Dataset dataset = data::synth_dataset(n, ctx.seed, sigma);

    const fs::path path = ctx.config.has("data_out")
                              ? fs::path(ctx.config.get_string("data_out", ""))
                              : ctx.out.root / "synth-data.txt";
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    data::save_dataset(dataset, path.string());
    // Stamp the config hash into the file's comment header.
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    in.close();
    write_text(path, "# config_hash=" + ctx.hash + "\n" + buf.str());

    double mean = 0.0;
    for (const auto &sample : dataset) {
        mean += sample.affinity / static_cast<double>(dataset.size());
    }
    double var = 0.0;
    for (const auto &sample : dataset) {
        var += (sample.affinity - mean) * (sample.affinity - mean) /
               static_cast<double>(dataset.size());
    }

    std::ostringstream text;
    text << "# config_hash=" << ctx.hash << "\n";
    text << "subcommand=synth-data seed=" << ctx.seed << " samples=" << n
         << " noise_sigma=" << sigma << "\n";
    text << "path=" << path.string() << "\n";
    text << "label_mean=" << mean << " label_std=" << std::sqrt(var) << "\n";
    write_text(ctx.out.reports / "synth_data.txt", text.str());
    write_json(ctx.out.reports / "synth_data.json",
               json{{"config_hash", ctx.hash},
                    {"subcommand", "synth-data"},
                    {"seed", ctx.seed},
                    {"samples", n},
                    {"noise_sigma", sigma},
                    {"path", path.string()},
                    {"label_mean", mean},
                    {"label_std", std::sqrt(var)}});
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

int run_evaluate(const Context &ctx) {
    if (!ctx.config.has("data")) {
        throw ConfigError("evaluate needs the 'data' config key");
    }
    if (!ctx.config.has("model_checkpoint")) {
        throw ConfigError("evaluate needs the 'model_checkpoint' config key");
    }
    const data::Dataset dataset =
        data::load_dataset(ctx.config.get_string("data", ""));
    const std::string which = ctx.config.get_string("model", "quantum");
    const std::string checkpoint =
        ctx.config.get_string("model_checkpoint", "");

    SafeMetrics m;
    std::size_t params = 0;
    if (which == "quantum") {
        qnn::QnnModel model = qnn::load_checkpoint(checkpoint).first;
        params = model.num_params();
        m = model_metrics(training::QnnTrainable(model), dataset);
    } else if (which == "classical") {
        std::ifstream in(checkpoint);
        detail::require(in.good(), "cannot open '" + checkpoint + "'");
        const json j = json::parse(in);
        nn::FusionBaseline model;
        nn::from_json(j, model);
        params = model.num_params();
        m = model_metrics(training::ClassicalTrainable(model), dataset);
    } else {
        throw ConfigError("config key 'model' must be 'quantum' or "
                          "'classical' for evaluate, got '" +
                          which + "'");
    }

    std::ostringstream text;
    text << "# config_hash=" << ctx.hash << "\n";
    text << "subcommand=evaluate model=" << which << " params=" << params
         << " samples=" << dataset.size() << "\n";
    text << "metrics: " << metrics_line(m) << "\n";
    write_text(ctx.out.reports / "evaluate.txt", text.str());
    write_json(ctx.out.reports / "evaluate.json",
               json{{"config_hash", ctx.hash},
                    {"subcommand", "evaluate"},
                    {"model", which},
                    {"params", params},
                    {"samples", dataset.size()},
                    {"metrics", metrics_json(m)}});
    return 0;
}

const std::vector<std::string> &subcommands() {
    static const std::vector<std::string> names = {
        "train",    "pqc-metrics", "noise-sweep", "drem-train",
        "zne-eval", "synth-data",  "evaluate"};
    return names;
}

} // namespace

int run(const std::string &subcommand, const RunConfig &config) {
    const auto &names = subcommands();
    if (std::find(names.begin(), names.end(), subcommand) == names.end()) {
        throw ConfigError("unknown subcommand '" + subcommand + "'");
    }
    const auto threads = config.get_int("threads", 0);
    if (threads < 0) {
        throw ConfigError("config key 'threads' must be >= 0");
    }
#ifdef _OPENMP
    if (threads > 0) {
        omp_set_num_threads(static_cast<int>(threads));
    }
#endif

    const Context ctx{config, config.get_uint("seed", 42),
                      config_hash_hex(config), make_layout(config)};
    if (subcommand == "train") {
        return run_train(ctx);
    }
    if (subcommand == "pqc-metrics") {
        return run_pqc_metrics(ctx);
    }
    if (subcommand == "noise-sweep") {
        return run_noise_sweep(ctx);
    }
    if (subcommand == "drem-train") {
        return run_drem_train(ctx);
    }
    if (subcommand == "zne-eval") {
        return run_zne_eval(ctx);
    }
    if (subcommand == "synth-data") {
        return run_synth_data(ctx);
    }
    return run_evaluate(ctx);
}

int main_entry(int argc, const char *const *argv) {
    CLI::App app{"qfusion: hybrid quantum-classical regression experiments"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_override = 0;
    std::string out_override;
    std::int64_t threads_override = 0;
    const auto *config_opt = app.add_option(
        "--config", config_path, "Flat key=value configuration file");
    const auto *seed_opt =
        app.add_option("--seed", seed_override, "Override the config seed");
    const auto *out_opt = app.add_option("--out", out_override,
                                         "Override the output directory");
    const auto *threads_opt = app.add_option(
        "--threads", threads_override, "Worker thread cap (0 = default)");

    app.add_subcommand("train",
                       "Train the quantum and/or classical fusion model");
    app.add_subcommand("pqc-metrics",
                       "Expressibility and entangling capacity per circuit");
    app.add_subcommand("noise-sweep",
                       "Evaluate noiseless/noisy/DREM/ZNE over a noise grid");
    app.add_subcommand("drem-train",
                       "Build a corpus and train the DREM correction layer");
    app.add_subcommand("zne-eval",
                       "Zero-noise extrapolation quality on a dataset");
    app.add_subcommand("synth-data", "Generate a synthetic fusion dataset");
    app.add_subcommand("evaluate",
                       "Score a trained checkpoint on a dataset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    try {
        RunConfig config;
        if (config_opt->count() > 0) {
            config = load_config(config_path);
        }
        if (seed_opt->count() > 0) {
            config.set("seed", std::to_string(seed_override));
        }
        if (out_opt->count() > 0) {
            config.set("output_dir", out_override);
        }
        if (threads_opt->count() > 0) {
            config.set("threads", std::to_string(threads_override));
        }
        const std::string name = app.get_subcommands().front()->get_name();
        return run(name, config);
    } catch (const ConfigError &e) {
        std::cerr << "qfusion: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "qfusion: " << e.what() << "\n";
        return 2;
    }
}

} // namespace qfusion::cli
