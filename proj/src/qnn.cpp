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

#include "qfusion/qnn.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "qfusion/rng.hpp"

namespace qfusion::qnn {
namespace {

std::vector<double> all_expectations(const sim::StateVector &psi) {
    std::vector<double> z(static_cast<std::size_t>(psi.num_qubits()));
    for (int q = 0; q < psi.num_qubits(); ++q) {
        z[static_cast<std::size_t>(q)] = sim::expectation_z(psi, q);
    }
    return z;
}

std::vector<double> all_expectations(const sim::DensityMatrix &rho) {
    std::vector<double> z(static_cast<std::size_t>(rho.num_qubits()));
    for (int q = 0; q < rho.num_qubits(); ++q) {
        z[static_cast<std::size_t>(q)] = sim::expectation_z(rho, q);
    }
    return z;
}

struct SampleGrad {
    std::vector<double> theta;
    std::vector<double> head;
    double sq_error = 0.0;
};

// Gradient of (prediction - label)^2 for one sample. The base circuit is
// bound once; each shift patches a single gate.
SampleGrad sample_gradient(const QnnModel &model,
                           const data::FusionSample &sample,
                           const std::vector<circuit::ParamOccurrence> &occs) {
    SampleGrad out;
    out.theta.assign(model.theta.size(), 0.0);

    const sim::StateVector psi0 = encoding::encode(sample.features,
                                                   model.encoder);
    const circuit::BoundCircuit base =
        circuit::bind_params(model.pqc, model.theta);
    sim::StateVector psi = psi0;
    circuit::execute(base, psi);
    const std::vector<double> z = all_expectations(psi);

    const nn::DenseNet::Trace trace = model.head.forward_trace(z);
    const double pred = trace.output[0];
    const double err = pred - sample.affinity;
    out.sq_error = err * err;

    const nn::DenseNet::Gradients hg =
        model.head.backward(trace, {2.0 * err});
    out.head = hg.params;

    bool live = false;
    for (double d : hg.input) {
        live = live || d != 0.0;
    }
    if (!live) {
        // Dead readout (ReLU off): every circuit derivative is zero.
        return out;
    }

    circuit::BoundCircuit work = base;
    const auto terms_two = shift_terms(circuit::ShiftRule::TwoTerm);
    const auto terms_four = shift_terms(circuit::ShiftRule::FourTerm);
    std::vector<double> acc(z.size());
    for (const circuit::ParamOccurrence &occ : occs) {
        const auto &terms =
            occ.rule == circuit::ShiftRule::TwoTerm ? terms_two : terms_four;
        std::fill(acc.begin(), acc.end(), 0.0);
        for (const auto &[delta, coeff] : terms) {
            work.gates[static_cast<std::size_t>(occ.gate_index)] =
                circuit::bind_gate_at(
                    model.pqc, model.theta, occ.gate_index,
                    {occ.gate_index, occ.position, delta});
            psi = psi0;
            circuit::execute(work, psi);
            const std::vector<double> zs = all_expectations(psi);
            for (std::size_t q = 0; q < acc.size(); ++q) {
                acc[q] += coeff * zs[q];
            }
        }
        work.gates[static_cast<std::size_t>(occ.gate_index)] =
            base.gates[static_cast<std::size_t>(occ.gate_index)];
        double chained = 0.0;
        for (std::size_t q = 0; q < acc.size(); ++q) {
            chained += hg.input[q] * acc[q];
        }
        out.theta[static_cast<std::size_t>(occ.slot)] += occ.sign * chained;
    }
    return out;
}

} // namespace

QnnModel make_qnn(const encoding::EncoderConfig &encoder, int ansatz_id,
                  int layers, std::uint64_t seed) {
    encoding::validate(encoder);
    QnnModel model;
    model.encoder = encoder;
    model.ansatz_id = ansatz_id;
    model.layers = layers;
    const int qubits = encoding::num_qubits(encoder);
    model.pqc = circuit::build_ansatz(ansatz_id, qubits, layers);

    std::mt19937_64 engine =
        rng::make_engine(rng::substream_seed(seed, 0));
    std::uniform_real_distribution<double> angle(0.0,
                                                 2.0 * std::numbers::pi);
    model.theta.resize(static_cast<std::size_t>(model.pqc.num_params()));
    for (double &t : model.theta) {
        t = angle(engine);
    }

    model.head =
        nn::DenseNet::create(qubits, {{1, nn::Activation::ReLU}});
    model.head.init_uniform(rng::substream_seed(seed, 1));
    return model;
}

std::vector<double>
noiseless_expectations(const QnnModel &model,
                       const std::vector<double> &features) {
    sim::StateVector psi = encoding::encode(features, model.encoder);
    circuit::execute(circuit::bind_params(model.pqc, model.theta), psi);
    return all_expectations(psi);
}

std::vector<double> noisy_expectations(const QnnModel &model,
                                       const std::vector<double> &features,
                                       const noise::KrausChannel &channel) {
    const sim::StateVector psi = encoding::encode(features, model.encoder);
    sim::DensityMatrix rho = sim::DensityMatrix::from_statevector(psi);
    rho = noise::noisy_execute(circuit::bind_params(model.pqc, model.theta),
                               std::move(rho), channel);
    return all_expectations(rho);
}

double head_prediction(const QnnModel &model, const std::vector<double> &z) {
    return model.head.forward(z)[0];
}

QnnOutput forward(const QnnModel &model, const std::vector<double> &features) {
    QnnOutput out;
    out.expectations = noiseless_expectations(model, features);
    out.prediction = head_prediction(model, out.expectations);
    return out;
}

QnnOutput forward_noisy(const QnnModel &model,
                        const std::vector<double> &features,
                        noise::ChannelKind kind, double p) {
    QnnOutput out;
    out.expectations =
        noisy_expectations(model, features, noise::make_channel(kind, p));
    out.prediction = head_prediction(model, out.expectations);
    return out;
}

std::vector<std::pair<double, double>> shift_terms(circuit::ShiftRule rule) {
    const double pi = std::numbers::pi;
    if (rule == circuit::ShiftRule::TwoTerm) {
        return {{pi / 2.0, 0.5}, {-pi / 2.0, -0.5}};
    }
    // Controlled-rotation generators carry two shift frequencies.
    const double cp = (std::sqrt(2.0) + 1.0) / (4.0 * std::sqrt(2.0));
    const double cm = (std::sqrt(2.0) - 1.0) / (4.0 * std::sqrt(2.0));
    return {{pi / 2.0, cp},
            {-pi / 2.0, -cp},
            {3.0 * pi / 2.0, -cm},
            {-3.0 * pi / 2.0, cm}};
}

QnnGradient gradient(const QnnModel &model,
                     const std::vector<data::FusionSample> &batch) {
    detail::require(!batch.empty(), "gradient needs a nonempty batch");
    const std::vector<circuit::ParamOccurrence> occs =
        circuit::parameter_occurrences(model.pqc);

    std::vector<SampleGrad> per_sample(batch.size());
    const auto count = static_cast<std::int64_t>(batch.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
        per_sample[static_cast<std::size_t>(i)] = sample_gradient(
            model, batch[static_cast<std::size_t>(i)], occs);
    }

    // Serial reduction in sample order: results are independent of the
    // thread count.
    QnnGradient grad;
    grad.theta.assign(model.theta.size(), 0.0);
    grad.head.assign(model.head.num_params(), 0.0);
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (const SampleGrad &s : per_sample) {
        for (std::size_t i = 0; i < grad.theta.size(); ++i) {
            grad.theta[i] += inv * s.theta[i];
        }
        for (std::size_t i = 0; i < grad.head.size(); ++i) {
            grad.head[i] += inv * s.head[i];
        }
        grad.loss += inv * s.sq_error;
    }
    return grad;
}

void to_json(nlohmann::json &j, const QnnModel &model) {
    j = nlohmann::json{
        {"encoder",
         {{"scheme", model.encoder.scheme == encoding::Scheme::Amplitude
                         ? "amplitude"
                         : "hae"},
          {"input_dim", model.encoder.input_dim},
          {"hae_blocks", model.encoder.hae_blocks},
          {"hae_qubits_per_block", model.encoder.hae_qubits_per_block}}},
        {"ansatz_id", model.ansatz_id},
        {"layers", model.layers},
        {"theta", model.theta},
        {"head", model.head}};
}

void from_json(const nlohmann::json &j, QnnModel &model) {
    const auto &enc = j.at("encoder");
    const std::string scheme = enc.at("scheme").get<std::string>();
    detail::require(scheme == "amplitude" || scheme == "hae",
                    "unknown encoder scheme '" + scheme + "'");
    model.encoder.scheme = scheme == "amplitude" ? encoding::Scheme::Amplitude
                                                 : encoding::Scheme::HAE;
    model.encoder.input_dim = enc.at("input_dim").get<int>();
    model.encoder.hae_blocks = enc.at("hae_blocks").get<int>();
    model.encoder.hae_qubits_per_block =
        enc.at("hae_qubits_per_block").get<int>();
    encoding::validate(model.encoder);

    model.ansatz_id = j.at("ansatz_id").get<int>();
    model.layers = j.at("layers").get<int>();
    model.pqc = circuit::build_ansatz(model.ansatz_id,
                                      encoding::num_qubits(model.encoder),
                                      model.layers);
    j.at("theta").get_to(model.theta);
    detail::require(static_cast<int>(model.theta.size()) ==
                        model.pqc.num_params(),
                    "checkpoint theta length mismatch");
    j.at("head").get_to(model.head);
    detail::require(model.head.input_dim() == model.num_qubits() &&
                        model.head.output_dim() == 1,
                    "checkpoint head shape mismatch");
}

void save_checkpoint(const QnnModel &model, std::uint64_t seed,
                     const std::string &path) {
    nlohmann::json j;
    to_json(j, model);
    j["seed"] = seed;
    std::ofstream out(path);
    detail::require(out.good(), "cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    detail::require(out.good(), "write to '" + path + "' failed");
}

std::pair<QnnModel, std::uint64_t> load_checkpoint(const std::string &path) {
    std::ifstream in(path);
    detail::require(in.good(), "cannot open '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(in);
    QnnModel model;
    from_json(j, model);
    return {std::move(model), j.at("seed").get<std::uint64_t>()};
}

} // namespace qfusion::qnn
