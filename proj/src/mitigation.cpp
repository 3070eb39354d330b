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

#include "qfusion/mitigation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qfusion/common.hpp"
#include "qfusion/rng.hpp"
#include "qfusion/sim.hpp"

namespace qfusion::mitigation {

namespace {

std::vector<double> expectations_of(const sim::DensityMatrix &rho, int n) {
    std::vector<double> z(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        z[static_cast<std::size_t>(q)] = sim::expectation_z(rho, q);
    }
    return z;
}

std::size_t corpus_width(const DremCorpus &corpus) {
    detail::require(!corpus.pairs.empty(), "drem corpus is empty");
    const std::size_t k = corpus.pairs.front().noisy.size();
    detail::require(k >= 1, "drem corpus has empty expectation vectors");
    for (const auto &pair : corpus.pairs) {
        detail::require(pair.noisy.size() == k && pair.noiseless.size() == k,
                        "drem corpus has inconsistent record widths");
    }
    return k;
}

} // namespace

DremLayer make_drem_layer(int k) {
    detail::require(k >= 1, "drem layer width must be positive");
    DremLayer layer;
    layer.net = nn::DenseNet::create(
        k, {{32, nn::Activation::ReLU},
            {16, nn::Activation::ReLU},
            {k, nn::Activation::Identity}});
    return layer;
}

DremCorpus build_drem_corpus(int num_qnns, int ansatz_id, int layers,
                             const encoding::EncoderConfig &encoder,
                             noise::ChannelKind channel, double p,
                             const std::vector<std::vector<double>> &inputs,
                             std::uint64_t seed) {
    detail::require(num_qnns >= 1, "drem corpus needs at least one network");
    detail::require(!inputs.empty(), "drem corpus needs at least one input");
    encoding::validate(encoder);
    const noise::KrausChannel chan = noise::make_channel(channel, p);

    // Encoding failures (zero-norm blocks, wrong width) must surface as
    // exceptions, so probe every input before entering the parallel region.
    for (const auto &features : inputs) {
        (void)encoding::encode(features, encoder);
    }

    DremCorpus corpus;
    corpus.channel = channel;
    corpus.p = p;
    corpus.ansatz_id = ansatz_id;
    corpus.layers = layers;
    corpus.num_qnns = num_qnns;
    corpus.seed = seed;

    const std::size_t per = inputs.size();
    corpus.pairs.resize(static_cast<std::size_t>(num_qnns) * per);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t qi = 0; qi < num_qnns; ++qi) {
        const qnn::QnnModel model = qnn::make_qnn(
            encoder, ansatz_id, layers,
            rng::substream_seed(seed, static_cast<std::uint64_t>(qi)));
        for (std::size_t ii = 0; ii < per; ++ii) {
            DremCorpus::Pair pair;
            pair.noiseless = qnn::noiseless_expectations(model, inputs[ii]);
            pair.noisy = qnn::noisy_expectations(model, inputs[ii], chan);
            corpus.pairs[static_cast<std::size_t>(qi) * per + ii] =
                std::move(pair);
        }
    }
    return corpus;
}

std::vector<std::vector<double>> feature_vectors(const data::Dataset &samples) {
    std::vector<std::vector<double>> out;
    out.reserve(samples.size());
    for (const auto &sample : samples) {
        out.push_back(sample.features);
    }
    return out;
}

double corpus_mse_unmitigated(const DremCorpus &corpus) {
    const std::size_t k = corpus_width(corpus);
    double acc = 0.0;
    for (const auto &pair : corpus.pairs) {
        for (std::size_t c = 0; c < k; ++c) {
            const double d = pair.noisy[c] - pair.noiseless[c];
            acc += d * d;
        }
    }
    return acc / (static_cast<double>(corpus.pairs.size()) *
                  static_cast<double>(k));
}

double corpus_mse_mitigated(const DremLayer &layer, const DremCorpus &corpus) {
    const std::size_t k = corpus_width(corpus);
    detail::require(layer.net.input_dim() == static_cast<int>(k) &&
                        layer.net.output_dim() == static_cast<int>(k),
                    "drem layer width does not match the corpus");
    double acc = 0.0;
    for (const auto &pair : corpus.pairs) {
        const std::vector<double> out = layer.net.forward(pair.noisy);
        for (std::size_t c = 0; c < k; ++c) {
            const double d = out[c] - pair.noiseless[c];
            acc += d * d;
        }
    }
    return acc / (static_cast<double>(corpus.pairs.size()) *
                  static_cast<double>(k));
}

DremLayer train_drem(const DremCorpus &corpus, double alpha,
                     const training::TrainConfig &config) {
    training::validate(config);
    detail::require(alpha >= 0.0, "drem l2 strength must be nonnegative");
    const std::size_t k = corpus_width(corpus);
    const std::size_t n = corpus.pairs.size();

    DremLayer layer = make_drem_layer(static_cast<int>(k));
    layer.l2_alpha = alpha;
    layer.net.init_uniform(rng::substream_seed(config.seed, 1));

    // Validation split first (one seeded shuffle), epoch shuffling after.
    // The layer must correct networks it never saw, so when the corpus has
    // clean QNN-major grouping the split holds out whole networks; pairs
    // from one circuit are near-duplicates, and a pair-level split would
    // let best-epoch retention reward memorizing the training circuits.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::size_t val_count = 0;
    if (config.validation_fraction > 0.0 && n >= 2) {
        auto split_engine =
            rng::make_engine(rng::substream_seed(config.seed, 0xda7a));
        const auto groups = static_cast<std::size_t>(corpus.num_qnns);
        if (groups >= 2 && n % groups == 0) {
            const std::size_t per = n / groups;
            std::vector<std::size_t> group_order(groups);
            std::iota(group_order.begin(), group_order.end(), 0);
            std::shuffle(group_order.begin(), group_order.end(), split_engine);
            const auto want = static_cast<std::size_t>(std::llround(
                config.validation_fraction * static_cast<double>(groups)));
            const std::size_t val_groups =
                std::clamp<std::size_t>(want, 1, groups - 1);
            for (std::size_t g = 0; g < groups; ++g) {
                for (std::size_t i = 0; i < per; ++i) {
                    order[g * per + i] = group_order[g] * per + i;
                }
            }
            val_count = val_groups * per;
        } else {
            std::shuffle(order.begin(), order.end(), split_engine);
            const auto want = static_cast<std::size_t>(std::llround(
                config.validation_fraction * static_cast<double>(n)));
            val_count = std::clamp<std::size_t>(want, 1, n - 1);
        }
    }
    const std::vector<std::size_t> val_idx(order.begin(),
                                           order.begin() + val_count);
    std::vector<std::size_t> train_idx(order.begin() + val_count, order.end());

    // Noisy inputs can sit orders of magnitude below the targets (strong
    // depolarizing contracts expectations toward zero), which makes the
    // raw-input optimization ill-conditioned: the first layer would need
    // weights around 1/scale. Train on standardized inputs instead and fold
    // the affine transform into the first layer afterwards, so the frozen
    // layer still consumes raw expectations. The L2 penalty then acts in
    // the standardized basis, where weights stay O(1).
    std::vector<double> input_mean(k, 0.0);
    std::vector<double> input_scale(k, 1.0);
    for (const std::size_t i : train_idx) {
        for (std::size_t c = 0; c < k; ++c) {
            input_mean[c] += corpus.pairs[i].noisy[c] /
                             static_cast<double>(train_idx.size());
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        double var = 0.0;
        for (const std::size_t i : train_idx) {
            const double d = corpus.pairs[i].noisy[c] - input_mean[c];
            var += d * d / static_cast<double>(train_idx.size());
        }
        const double sd = std::sqrt(var);
        input_scale[c] = sd > 1e-9 ? sd : 1.0;
    }
    std::vector<std::vector<double>> scaled(n);
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i].resize(k);
        for (std::size_t c = 0; c < k; ++c) {
            scaled[i][c] =
                (corpus.pairs[i].noisy[c] - input_mean[c]) / input_scale[c];
        }
    }

    auto mse_over = [&](const std::vector<std::size_t> &idx) {
        double acc = 0.0;
        for (const std::size_t i : idx) {
            const auto &pair = corpus.pairs[i];
            const std::vector<double> out = layer.net.forward(scaled[i]);
            for (std::size_t c = 0; c < k; ++c) {
                const double d = out[c] - pair.noiseless[c];
                acc += d * d;
            }
        }
        return acc /
               (static_cast<double>(idx.size()) * static_cast<double>(k));
    };

    std::vector<double> params = layer.net.get_params();
    training::AdamState adam = training::make_adam_state(params.size());
    auto shuffler = rng::make_engine(rng::substream_seed(config.seed, 0x5eed));

    double best_val = std::numeric_limits<double>::infinity();
    std::vector<double> best_params = params;
    int stale = 0;

    const auto batch_size = static_cast<std::size_t>(config.batch_size);
    std::vector<double> grad(params.size(), 0.0);
    std::vector<double> upstream(k, 0.0);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(train_idx.begin(), train_idx.end(), shuffler);
        for (std::size_t start = 0; start < train_idx.size();
             start += batch_size) {
            const std::size_t stop =
                std::min(train_idx.size(), start + batch_size);
            const auto b = static_cast<double>(stop - start);
            std::fill(grad.begin(), grad.end(), 0.0);
            const double inv = 1.0 / (b * static_cast<double>(k));
            for (std::size_t pos = start; pos < stop; ++pos) {
                const auto &pair = corpus.pairs[train_idx[pos]];
                const nn::DenseNet::Trace trace =
                    layer.net.forward_trace(scaled[train_idx[pos]]);
                for (std::size_t c = 0; c < k; ++c) {
                    upstream[c] =
                        2.0 * inv * (trace.output[c] - pair.noiseless[c]);
                }
                const nn::DenseNet::Gradients g =
                    layer.net.backward(trace, upstream);
                for (std::size_t j = 0; j < grad.size(); ++j) {
                    grad[j] += g.params[j];
                }
            }
            layer.net.add_l2_gradient(alpha, grad);
            training::adam_step(params, grad, adam, config);
            layer.net.set_params(params);
        }
        if (val_count > 0) {
            const double val = mse_over(val_idx);
            if (val < best_val) {
                best_val = val;
                best_params = params;
                stale = 0;
            } else if (config.patience > 0 && ++stale >= config.patience) {
                break;
            }
        }
    }
    if (val_count > 0) {
        layer.net.set_params(best_params);
    }

    // Fold x -> (x - mean) / scale into the first layer:
    //   W'_ij = W_ij / scale_j,  b'_i = b_i - sum_j W_ij mean_j / scale_j.
    std::vector<double> flat = layer.net.get_params();
    const std::size_t hidden = 32;
    for (std::size_t i = 0; i < hidden; ++i) {
        double shift = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            double &w = flat[i * k + j];
            w /= input_scale[j];
            shift += w * input_mean[j];
        }
        flat[hidden * k + i] -= shift;
    }
    layer.net.set_params(flat);

    layer.frozen = true;
    return layer;
}

std::vector<double> apply_drem(const DremLayer &layer,
                               const std::vector<double> &noisy_expectations) {
    detail::require(layer.frozen, "apply_drem requires a frozen layer");
    detail::require(static_cast<int>(noisy_expectations.size()) ==
                        layer.net.input_dim(),
                    "apply_drem input width mismatch");
    return layer.net.forward(noisy_expectations);
}

void save_drem(const DremLayer &layer, std::uint64_t seed,
               const std::string &path) {
    nn::save_checkpoint(layer.net, seed, path);
}

DremLayer load_drem(const std::string &path) {
    DremLayer layer;
    layer.net = nn::load_checkpoint(path).first;
    detail::require(layer.net.input_dim() == layer.net.output_dim(),
                    "drem checkpoint is not square");
    layer.frozen = true;
    return layer;
}

void save_corpus(const DremCorpus &corpus, const std::string &path) {
    const std::size_t k = corpus_width(corpus);
    std::ofstream out(path);
    detail::require(out.good(), "cannot open '" + path + "' for writing");
    out << "# drem-corpus channel=" << noise::channel_name(corpus.channel)
        << " p=" << std::setprecision(17) << corpus.p
        << " ansatz=" << corpus.ansatz_id << " layers=" << corpus.layers
        << " qnns=" << corpus.num_qnns << " seed=" << corpus.seed
        << " k=" << k << "\n";
    out << std::setprecision(17);
    for (const auto &pair : corpus.pairs) {
        for (std::size_t c = 0; c < k; ++c) {
            out << pair.noisy[c] << ' ';
        }
        for (std::size_t c = 0; c < k; ++c) {
            out << pair.noiseless[c] << (c + 1 == k ? '\n' : ' ');
        }
    }
    detail::require(out.good(), "write to '" + path + "' failed");
}

DremCorpus load_corpus(const std::string &path) {
    std::ifstream in(path);
    detail::require(in.good(), "cannot open '" + path + "' for reading");

    std::string header;
    detail::require(static_cast<bool>(std::getline(in, header)),
                    "corpus file '" + path + "' is empty");
    std::istringstream hs(header);
    std::string token;
    hs >> token;
    detail::require(token == "#", "corpus header missing in '" + path + "'");
    hs >> token;
    detail::require(token == "drem-corpus",
                    "corpus header missing in '" + path + "'");

    DremCorpus corpus;
    std::size_t k = 0;
    while (hs >> token) {
        const std::size_t eq = token.find('=');
        detail::require(eq != std::string::npos,
                        "malformed corpus header field '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "channel") {
            corpus.channel = noise::channel_from_name(value);
        } else if (key == "p") {
            corpus.p = std::stod(value);
        } else if (key == "ansatz") {
            corpus.ansatz_id = std::stoi(value);
        } else if (key == "layers") {
            corpus.layers = std::stoi(value);
        } else if (key == "qnns") {
            corpus.num_qnns = std::stoi(value);
        } else if (key == "seed") {
            corpus.seed = std::stoull(value);
        } else if (key == "k") {
            k = static_cast<std::size_t>(std::stoul(value));
        } else {
            throw std::runtime_error("unknown corpus header field '" + key +
                                     "'");
        }
    }
    detail::require(k >= 1, "corpus header lacks a valid width");

    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        DremCorpus::Pair pair;
        pair.noisy.resize(k);
        pair.noiseless.resize(k);
        for (std::size_t c = 0; c < 2 * k; ++c) {
            double v = 0.0;
            if (!(ls >> v)) {
                throw std::runtime_error("malformed corpus record at line " +
                                         std::to_string(line_no));
            }
            (c < k ? pair.noisy[c] : pair.noiseless[c - k]) = v;
        }
        std::string extra;
        if (ls >> extra) {
            throw std::runtime_error("malformed corpus record at line " +
                                     std::to_string(line_no));
        }
        corpus.pairs.push_back(std::move(pair));
    }
    detail::require(!corpus.pairs.empty(),
                    "corpus file '" + path + "' holds no records");
    return corpus;
}

double extrapolate_to_zero(const std::vector<double> &xs,
                           const std::vector<double> &ys) {
    detail::require(xs.size() == ys.size(),
                    "extrapolation needs matching point lists");
    detail::require(xs.size() >= 2, "extrapolation needs at least two points");
    const std::size_t points = xs.size();
    const int degree = static_cast<int>(std::min<std::size_t>(points - 1, 2));
    const int m = degree + 1;

    // Normal equations of the least-squares polynomial fit; the constant
    // coefficient is the extrapolated value at zero. With two points this
    // is the exact Richardson line.
    std::array<std::array<double, 3>, 3> a{};
    std::array<double, 3> b{};
    for (std::size_t i = 0; i < points; ++i) {
        std::array<double, 5> pw{1.0, 0.0, 0.0, 0.0, 0.0};
        for (int j = 1; j <= 2 * degree; ++j) {
            pw[static_cast<std::size_t>(j)] =
                pw[static_cast<std::size_t>(j - 1)] * xs[i];
        }
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) {
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] +=
                    pw[static_cast<std::size_t>(r + c)];
            }
            b[static_cast<std::size_t>(r)] +=
                ys[i] * pw[static_cast<std::size_t>(r)];
        }
    }

    // Gaussian elimination with partial pivoting on the (m x m) system.
    for (int col = 0; col < m; ++col) {
        int pivot = col;
        for (int row = col + 1; row < m; ++row) {
            if (std::abs(a[static_cast<std::size_t>(row)]
                          [static_cast<std::size_t>(col)]) >
                std::abs(a[static_cast<std::size_t>(pivot)]
                          [static_cast<std::size_t>(col)])) {
                pivot = row;
            }
        }
        detail::require(std::abs(a[static_cast<std::size_t>(pivot)]
                                  [static_cast<std::size_t>(col)]) > 0.0,
                        "extrapolation fit is singular");
        std::swap(a[static_cast<std::size_t>(col)],
                  a[static_cast<std::size_t>(pivot)]);
        std::swap(b[static_cast<std::size_t>(col)],
                  b[static_cast<std::size_t>(pivot)]);
        for (int row = col + 1; row < m; ++row) {
            const double f = a[static_cast<std::size_t>(row)]
                              [static_cast<std::size_t>(col)] /
                             a[static_cast<std::size_t>(col)]
                              [static_cast<std::size_t>(col)];
            for (int c = col; c < m; ++c) {
                a[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)] -=
                    f * a[static_cast<std::size_t>(col)]
                         [static_cast<std::size_t>(c)];
            }
            b[static_cast<std::size_t>(row)] -=
                f * b[static_cast<std::size_t>(col)];
        }
    }
    std::array<double, 3> coeff{};
    for (int row = m - 1; row >= 0; --row) {
        double v = b[static_cast<std::size_t>(row)];
        for (int c = row + 1; c < m; ++c) {
            v -= a[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)] *
                 coeff[static_cast<std::size_t>(c)];
        }
        coeff[static_cast<std::size_t>(row)] =
            v / a[static_cast<std::size_t>(row)][static_cast<std::size_t>(row)];
    }
    return coeff[0];
}

std::vector<double> zne_estimate(const qnn::QnnModel &model,
                                 const std::vector<double> &features,
                                 noise::ChannelKind kind, double p,
                                 const std::vector<int> &scale_factors) {
    detail::require(scale_factors.size() >= 2,
                    "zne needs at least two scale factors");
    detail::require(scale_factors.front() == 1,
                    "zne scale factors must start at 1");
    for (std::size_t i = 0; i < scale_factors.size(); ++i) {
        detail::require(scale_factors[i] >= 1 && scale_factors[i] % 2 == 1,
                        "zne scale factors must be odd");
        if (i > 0) {
            detail::require(scale_factors[i] > scale_factors[i - 1],
                            "zne scale factors must be strictly increasing");
        }
    }
    const noise::KrausChannel chan = noise::make_channel(kind, p);
    const sim::StateVector encoded = encoding::encode(features, model.encoder);
    const int n = model.num_qubits();

    std::vector<std::vector<double>> z_by_scale;
    z_by_scale.reserve(scale_factors.size());
    for (const int s : scale_factors) {
        const circuit::Circuit folded = circuit::fold_global(model.pqc, s);
        const circuit::BoundCircuit bound =
            circuit::bind_params(folded, model.theta);
        const sim::DensityMatrix rho = noise::noisy_execute(
            bound, sim::DensityMatrix::from_statevector(encoded), chan);
        z_by_scale.push_back(expectations_of(rho, n));
    }

    std::vector<double> xs(scale_factors.begin(), scale_factors.end());
    std::vector<double> out(static_cast<std::size_t>(n));
    std::vector<double> ys(scale_factors.size());
    for (int q = 0; q < n; ++q) {
        for (std::size_t i = 0; i < scale_factors.size(); ++i) {
            ys[i] = z_by_scale[i][static_cast<std::size_t>(q)];
        }
        out[static_cast<std::size_t>(q)] = extrapolate_to_zero(xs, ys);
    }
    return out;
}

std::vector<double> mitigated_expectations(const MitigatedQnn &model,
                                           const std::vector<double> &features) {
    const std::vector<double> noisy =
        qnn::noisy_expectations(model.qnn, features, model.channel);
    return apply_drem(model.drem, noisy);
}

double mitigated_prediction(const MitigatedQnn &model,
                            const std::vector<double> &features) {
    return qnn::head_prediction(model.qnn,
                                mitigated_expectations(model, features));
}

namespace {

struct MitigatedSampleGrad {
    std::vector<double> theta;
    std::vector<double> head;
    double sq_error = 0.0;
};

MitigatedSampleGrad mitigated_sample_gradient(const MitigatedQnn &model,
                                              const data::FusionSample &sample) {
    const sim::StateVector encoded =
        encoding::encode(sample.features, model.qnn.encoder);
    const sim::DensityMatrix initial =
        sim::DensityMatrix::from_statevector(encoded);
    circuit::BoundCircuit work =
        circuit::bind_params(model.qnn.pqc, model.qnn.theta);

    const sim::DensityMatrix rho =
        noise::noisy_execute(work, initial, model.channel);
    const int n = model.qnn.num_qubits();
    const std::vector<double> z_noisy = expectations_of(rho, n);

    const nn::DenseNet::Trace drem_trace =
        model.drem.net.forward_trace(z_noisy);
    const nn::DenseNet::Trace head_trace =
        model.qnn.head.forward_trace(drem_trace.output);
    const double err = head_trace.output[0] - sample.affinity;

    MitigatedSampleGrad grad;
    grad.sq_error = err * err;
    const nn::DenseNet::Gradients head_grads =
        model.qnn.head.backward(head_trace, {2.0 * err});
    grad.head = head_grads.params;
    grad.theta.assign(model.qnn.theta.size(), 0.0);

    // Chain through the frozen correction net to the noisy expectations.
    // The net's own parameter gradients are dropped on the floor.
    const nn::DenseNet::Gradients drem_grads =
        model.drem.net.backward(drem_trace, head_grads.input);
    const std::vector<double> &dz = drem_grads.input;
    const bool live = std::any_of(dz.begin(), dz.end(),
                                  [](double v) { return v != 0.0; });
    if (!live) {
        return grad;
    }

    for (const auto &occ : circuit::parameter_occurrences(model.qnn.pqc)) {
        for (const auto &[delta, coeff] : qnn::shift_terms(occ.rule)) {
            const circuit::AngleShift shift{occ.gate_index, occ.position,
                                            delta};
            const circuit::BoundGate saved = work.gates
                [static_cast<std::size_t>(occ.gate_index)];
            work.gates[static_cast<std::size_t>(occ.gate_index)] =
                circuit::bind_gate_at(model.qnn.pqc, model.qnn.theta,
                                      occ.gate_index, shift);
            const sim::DensityMatrix shifted =
                noise::noisy_execute(work, initial, model.channel);
            work.gates[static_cast<std::size_t>(occ.gate_index)] = saved;
            double acc = 0.0;
            for (int q = 0; q < n; ++q) {
                acc += dz[static_cast<std::size_t>(q)] *
                       sim::expectation_z(shifted, q);
            }
            grad.theta[static_cast<std::size_t>(occ.slot)] +=
                occ.sign * coeff * acc;
        }
    }
    return grad;
}

} // namespace

MitigatedQnnTrainable::MitigatedQnnTrainable(MitigatedQnn &model)
    : model_(model) {
    detail::require(model_.drem.frozen,
                    "mitigated model needs a frozen drem layer");
    detail::require(model_.drem.net.input_dim() == model_.qnn.num_qubits() &&
                        model_.drem.net.output_dim() ==
                            model_.qnn.num_qubits(),
                    "drem layer width does not match the circuit");
}

std::size_t MitigatedQnnTrainable::num_params() const {
    return model_.qnn.num_params();
}

std::vector<double> MitigatedQnnTrainable::get_params() const {
    std::vector<double> flat = model_.qnn.theta;
    const std::vector<double> head = model_.qnn.head.get_params();
    flat.insert(flat.end(), head.begin(), head.end());
    return flat;
}

void MitigatedQnnTrainable::set_params(const std::vector<double> &params) {
    detail::require(params.size() == num_params(),
                    "mitigated parameter vector has the wrong length");
    const std::size_t split = model_.qnn.theta.size();
    model_.qnn.theta.assign(params.begin(),
                            params.begin() + static_cast<std::ptrdiff_t>(split));
    model_.qnn.head.set_params(std::vector<double>(
        params.begin() + static_cast<std::ptrdiff_t>(split), params.end()));
}

double MitigatedQnnTrainable::loss_and_gradient(
    const std::vector<data::FusionSample> &batch, std::vector<double> &grad) {
    detail::require(!batch.empty(), "gradient needs a nonempty batch");
    const std::size_t count = batch.size();
    std::vector<MitigatedSampleGrad> per(count);

#pragma omp parallel for schedule(dynamic) if (count > 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
        per[static_cast<std::size_t>(i)] = mitigated_sample_gradient(
            model_, batch[static_cast<std::size_t>(i)]);
    }

    const std::size_t theta_count = model_.qnn.theta.size();
    grad.assign(num_params(), 0.0);
    const double inv = 1.0 / static_cast<double>(count);
    double loss = 0.0;
    for (const auto &g : per) {
        loss += inv * g.sq_error;
        for (std::size_t j = 0; j < theta_count; ++j) {
            grad[j] += inv * g.theta[j];
        }
        for (std::size_t j = 0; j < g.head.size(); ++j) {
            grad[theta_count + j] += inv * g.head[j];
        }
    }
    return loss;
}

double MitigatedQnnTrainable::predict(const data::FusionSample &sample) const {
    return mitigated_prediction(model_, sample.features);
}

} // namespace qfusion::mitigation
