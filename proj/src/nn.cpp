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

#include "qfusion/nn.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "qfusion/common.hpp"
#include "qfusion/rng.hpp"

namespace qfusion::nn {
namespace {

const char *activation_name(Activation a) {
    return a == Activation::ReLU ? "relu" : "identity";
}

Activation activation_from_name(const std::string &name) {
    if (name == "relu") {
        return Activation::ReLU;
    }
    if (name == "identity") {
        return Activation::Identity;
    }
    throw std::invalid_argument("unknown activation '" + name + "'");
}

} // namespace

DenseNet DenseNet::create(int input_dim,
                          const std::vector<LayerSpec> &specs) {
    detail::require(input_dim >= 1, "input dimension must be positive");
    detail::require(!specs.empty(), "network needs at least one layer");
    DenseNet net;
    int in = input_dim;
    for (const LayerSpec &spec : specs) {
        detail::require(spec.out >= 1, "layer width must be positive");
        Layer layer;
        layer.in = in;
        layer.out = spec.out;
        layer.activation = spec.activation;
        layer.weights.assign(
            static_cast<std::size_t>(in) * static_cast<std::size_t>(spec.out),
            0.0);
        layer.bias.assign(static_cast<std::size_t>(spec.out), 0.0);
        net.layers_.push_back(std::move(layer));
        in = spec.out;
    }
    return net;
}

int DenseNet::input_dim() const {
    detail::require(!layers_.empty(), "empty network");
    return layers_.front().in;
}

int DenseNet::output_dim() const {
    detail::require(!layers_.empty(), "empty network");
    return layers_.back().out;
}

std::size_t DenseNet::num_params() const {
    std::size_t total = 0;
    for (const Layer &l : layers_) {
        total += l.weights.size() + l.bias.size();
    }
    return total;
}

void DenseNet::init_uniform(std::uint64_t seed) {
    std::mt19937_64 engine = rng::make_engine(seed);
    for (Layer &l : layers_) {
        const double bound = std::sqrt(1.0 / l.in);
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (double &w : l.weights) {
            w = dist(engine);
        }
        for (double &b : l.bias) {
            b = dist(engine);
        }
    }
}

std::vector<double> DenseNet::get_params() const {
    std::vector<double> flat;
    flat.reserve(num_params());
    for (const Layer &l : layers_) {
        flat.insert(flat.end(), l.weights.begin(), l.weights.end());
        flat.insert(flat.end(), l.bias.begin(), l.bias.end());
    }
    return flat;
}

void DenseNet::set_params(const std::vector<double> &flat) {
    detail::require(flat.size() == num_params(),
                    "parameter vector length mismatch");
    std::size_t pos = 0;
    for (Layer &l : layers_) {
        std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                  flat.begin() +
                      static_cast<std::ptrdiff_t>(pos + l.weights.size()),
                  l.weights.begin());
        pos += l.weights.size();
        std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                  flat.begin() +
                      static_cast<std::ptrdiff_t>(pos + l.bias.size()),
                  l.bias.begin());
        pos += l.bias.size();
    }
}

std::vector<double> DenseNet::forward(const std::vector<double> &x) const {
    return forward_trace(x).output;
}

DenseNet::Trace DenseNet::forward_trace(const std::vector<double> &x) const {
    detail::require(static_cast<int>(x.size()) == input_dim(),
                    "input dimension mismatch");
    Trace trace;
    std::vector<double> current = x;
    for (const Layer &l : layers_) {
        trace.inputs.push_back(current);
        std::vector<double> z(static_cast<std::size_t>(l.out), 0.0);
        for (int r = 0; r < l.out; ++r) {
            double acc = l.bias[static_cast<std::size_t>(r)];
            const double *row =
                l.weights.data() +
                static_cast<std::size_t>(r) * static_cast<std::size_t>(l.in);
            for (int c = 0; c < l.in; ++c) {
                acc += row[c] * current[static_cast<std::size_t>(c)];
            }
            z[static_cast<std::size_t>(r)] = acc;
        }
        trace.pre_activations.push_back(z);
        if (l.activation == Activation::ReLU) {
            for (double &v : z) {
                v = v > 0.0 ? v : 0.0;
            }
        }
        current = std::move(z);
    }
    trace.output = std::move(current);
    return trace;
}

DenseNet::Gradients
DenseNet::backward(const Trace &trace,
                   const std::vector<double> &upstream) const {
    detail::require(trace.inputs.size() == layers_.size(),
                    "trace does not match network");
    detail::require(static_cast<int>(upstream.size()) == output_dim(),
                    "upstream gradient dimension mismatch");
    Gradients grads;
    grads.params.assign(num_params(), 0.0);

    // Per-layer flat offsets, layers in order.
    std::vector<std::size_t> offsets(layers_.size());
    std::size_t pos = 0;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        offsets[i] = pos;
        pos += layers_[i].weights.size() + layers_[i].bias.size();
    }

    std::vector<double> delta = upstream;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        const Layer &l = layers_[i];
        const std::vector<double> &z = trace.pre_activations[i];
        const std::vector<double> &in = trace.inputs[i];
        if (l.activation == Activation::ReLU) {
            for (int r = 0; r < l.out; ++r) {
                if (z[static_cast<std::size_t>(r)] <= 0.0) {
                    delta[static_cast<std::size_t>(r)] = 0.0;
                }
            }
        }
        double *wgrad = grads.params.data() + offsets[i];
        double *bgrad = wgrad + l.weights.size();
        for (int r = 0; r < l.out; ++r) {
            const double d = delta[static_cast<std::size_t>(r)];
            bgrad[r] += d;
            double *wrow = wgrad + static_cast<std::size_t>(r) *
                                       static_cast<std::size_t>(l.in);
            for (int c = 0; c < l.in; ++c) {
                wrow[c] += d * in[static_cast<std::size_t>(c)];
            }
        }
        std::vector<double> prev(static_cast<std::size_t>(l.in), 0.0);
        for (int c = 0; c < l.in; ++c) {
            double acc = 0.0;
            for (int r = 0; r < l.out; ++r) {
                acc += l.weights[static_cast<std::size_t>(r) *
                                     static_cast<std::size_t>(l.in) +
                                 static_cast<std::size_t>(c)] *
                       delta[static_cast<std::size_t>(r)];
            }
            prev[static_cast<std::size_t>(c)] = acc;
        }
        delta = std::move(prev);
    }
    grads.input = std::move(delta);
    return grads;
}

double DenseNet::weight_norm_squared() const {
    double acc = 0.0;
    for (const Layer &l : layers_) {
        for (double w : l.weights) {
            acc += w * w;
        }
    }
    return acc;
}

void DenseNet::add_l2_gradient(double alpha,
                               std::vector<double> &flat_grad) const {
    detail::require(flat_grad.size() == num_params(),
                    "gradient vector length mismatch");
    std::size_t pos = 0;
    for (const Layer &l : layers_) {
        for (std::size_t i = 0; i < l.weights.size(); ++i) {
            flat_grad[pos + i] += 2.0 * alpha * l.weights[i];
        }
        pos += l.weights.size() + l.bias.size();
    }
}

void to_json(nlohmann::json &j, const DenseNet &net) {
    nlohmann::json layers = nlohmann::json::array();
    for (const Layer &l : net.layers()) {
        layers.push_back({{"in", l.in},
                          {"out", l.out},
                          {"activation", activation_name(l.activation)},
                          {"weights", l.weights},
                          {"bias", l.bias}});
    }
    j = nlohmann::json{{"layers", layers}};
}

void from_json(const nlohmann::json &j, DenseNet &net) {
    std::vector<LayerSpec> specs;
    const auto &layers = j.at("layers");
    detail::require(!layers.empty(), "checkpoint has no layers");
    const int input_dim = layers.front().at("in").get<int>();
    for (const auto &l : layers) {
        specs.push_back({l.at("out").get<int>(),
                         activation_from_name(
                             l.at("activation").get<std::string>())});
    }
    net = DenseNet::create(input_dim, specs);
    std::vector<double> flat;
    flat.reserve(net.num_params());
    for (const auto &l : layers) {
        const auto w = l.at("weights").get<std::vector<double>>();
        const auto b = l.at("bias").get<std::vector<double>>();
        flat.insert(flat.end(), w.begin(), w.end());
        flat.insert(flat.end(), b.begin(), b.end());
    }
    net.set_params(flat);
}

void save_checkpoint(const DenseNet &net, std::uint64_t seed,
                     const std::string &path) {
    nlohmann::json j;
    to_json(j, net);
    j["seed"] = seed;
    std::ofstream out(path);
    detail::require(out.good(), "cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    detail::require(out.good(), "write to '" + path + "' failed");
}

std::pair<DenseNet, std::uint64_t> load_checkpoint(const std::string &path) {
    std::ifstream in(path);
    detail::require(in.good(), "cannot open '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(in);
    DenseNet net;
    from_json(j, net);
    return {std::move(net), j.at("seed").get<std::uint64_t>()};
}

std::size_t FusionBaseline::num_params() const {
    return branch1.num_params() + branch2.num_params() + trunk.num_params();
}

std::vector<double> FusionBaseline::get_params() const {
    std::vector<double> flat = branch1.get_params();
    const std::vector<double> p2 = branch2.get_params();
    const std::vector<double> p3 = trunk.get_params();
    flat.insert(flat.end(), p2.begin(), p2.end());
    flat.insert(flat.end(), p3.begin(), p3.end());
    return flat;
}

void FusionBaseline::set_params(const std::vector<double> &flat) {
    detail::require(flat.size() == num_params(),
                    "parameter vector length mismatch");
    auto begin = flat.begin();
    auto take = [&begin](std::size_t count) {
        std::vector<double> part(begin,
                                 begin + static_cast<std::ptrdiff_t>(count));
        begin += static_cast<std::ptrdiff_t>(count);
        return part;
    };
    branch1.set_params(take(branch1.num_params()));
    branch2.set_params(take(branch2.num_params()));
    trunk.set_params(take(trunk.num_params()));
}

void FusionBaseline::init_uniform(std::uint64_t seed) {
    branch1.init_uniform(rng::substream_seed(seed, 0));
    branch2.init_uniform(rng::substream_seed(seed, 1));
    trunk.init_uniform(rng::substream_seed(seed, 2));
}

double FusionBaseline::forward(const std::vector<double> &features16) const {
    detail::require(features16.size() == 16, "fusion input must have 16 features");
    const std::vector<double> x1(features16.begin(), features16.begin() + 10);
    const std::vector<double> x2(features16.begin() + 10, features16.end());
    const std::vector<double> h1 = branch1.forward(x1);
    const std::vector<double> h2 = branch2.forward(x2);
    std::vector<double> merged = h1;
    merged.insert(merged.end(), h2.begin(), h2.end());
    return trunk.forward(merged)[0];
}

std::vector<double>
FusionBaseline::backward(const std::vector<double> &features16,
                         double upstream) const {
    detail::require(features16.size() == 16, "fusion input must have 16 features");
    const std::vector<double> x1(features16.begin(), features16.begin() + 10);
    const std::vector<double> x2(features16.begin() + 10, features16.end());
    const DenseNet::Trace t1 = branch1.forward_trace(x1);
    const DenseNet::Trace t2 = branch2.forward_trace(x2);
    std::vector<double> merged = t1.output;
    merged.insert(merged.end(), t2.output.begin(), t2.output.end());
    const DenseNet::Trace t3 = trunk.forward_trace(merged);

    const DenseNet::Gradients g3 = trunk.backward(t3, {upstream});
    const std::vector<double> d1(g3.input.begin(), g3.input.begin() + 10);
    const std::vector<double> d2(g3.input.begin() + 10, g3.input.end());
    const DenseNet::Gradients g1 = branch1.backward(t1, d1);
    const DenseNet::Gradients g2 = branch2.backward(t2, d2);

    std::vector<double> flat = g1.params;
    flat.insert(flat.end(), g2.params.begin(), g2.params.end());
    flat.insert(flat.end(), g3.params.begin(), g3.params.end());
    return flat;
}

FusionBaseline build_classical_fusion_baseline() {
    FusionBaseline model;
    model.branch1 = DenseNet::create(10, {{10, Activation::ReLU}});
    model.branch2 = DenseNet::create(6, {{5, Activation::ReLU}});
    model.trunk = DenseNet::create(
        15, {{15, Activation::ReLU}, {1, Activation::Identity}});
    return model;
}

void to_json(nlohmann::json &j, const FusionBaseline &model) {
    j = nlohmann::json{{"branch1", model.branch1},
                       {"branch2", model.branch2},
                       {"trunk", model.trunk}};
}

void from_json(const nlohmann::json &j, FusionBaseline &model) {
    j.at("branch1").get_to(model.branch1);
    j.at("branch2").get_to(model.branch2);
    j.at("trunk").get_to(model.trunk);
}

} // namespace qfusion::nn
