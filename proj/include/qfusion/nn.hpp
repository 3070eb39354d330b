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

/**
 * @file nn.hpp
 * Dense feed-forward networks: the quantum readout head, the DREM
 * correction layer, and the classical fusion baseline.
 *
 * Flat parameter layout (used by the optimizer and checkpoints): layers in
 * order, each layer's row-major weight matrix followed by its bias vector.
 * ReLU is max(0, z) with derivative 0 at z = 0.
 */

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qfusion::nn {

enum class Activation { ReLU, Identity };

struct Layer {
    int in = 0;
    int out = 0;
    Activation activation = Activation::Identity;
    std::vector<double> weights; // row-major, out x in
    std::vector<double> bias;    // out
};

struct LayerSpec {
    int out = 0;
    Activation activation = Activation::Identity;
};

class DenseNet {
  public:
    DenseNet() = default;

    /// Chains layers from input_dim through the given specs; weights and
    /// biases start at zero.
    static DenseNet create(int input_dim, const std::vector<LayerSpec> &specs);

    int input_dim() const;
    int output_dim() const;
    std::size_t num_layers() const { return layers_.size(); }
    const std::vector<Layer> &layers() const { return layers_; }

    /// Total weight and bias count.
    std::size_t num_params() const;

    /// Seeded uniform init in [-sqrt(1/fan_in), +sqrt(1/fan_in)] for each
    /// layer's weights and biases.
    void init_uniform(std::uint64_t seed);

    std::vector<double> get_params() const;
    void set_params(const std::vector<double> &flat);

    std::vector<double> forward(const std::vector<double> &x) const;

    /// Per-layer values recorded by forward, consumed by backward.
    struct Trace {
        std::vector<std::vector<double>> inputs;
        std::vector<std::vector<double>> pre_activations;
        std::vector<double> output;
    };
    Trace forward_trace(const std::vector<double> &x) const;

    struct Gradients {
        std::vector<double> params; // same layout as get_params
        std::vector<double> input;  // dL/dx
    };
    /// Exact reverse-mode gradients given dL/d(output).
    Gradients backward(const Trace &trace,
                       const std::vector<double> &upstream) const;

    /// Sum of squared weights, biases excluded (L2 regularization term).
    double weight_norm_squared() const;

    /// Adds d/dw of alpha * ||W||^2 (= 2 alpha w) to the weight entries of
    /// a flat gradient vector.
    void add_l2_gradient(double alpha, std::vector<double> &flat_grad) const;

  private:
    std::vector<Layer> layers_;
};

void to_json(nlohmann::json &j, const DenseNet &net);
void from_json(const nlohmann::json &j, DenseNet &net);

/// Checkpoint: JSON file with shapes, weights and the seed used to
/// initialize the net.
void save_checkpoint(const DenseNet &net, std::uint64_t seed,
                     const std::string &path);
std::pair<DenseNet, std::uint64_t> load_checkpoint(const std::string &path);

/**
 * The classical fusion baseline: branch 1 maps features 0..9 through
 * 10 -> 10 (ReLU), branch 2 maps features 10..15 through 6 -> 5 (ReLU),
 * the concatenated 15-vector runs through 15 -> 15 (ReLU) and 15 -> 1
 * (Identity). Totals 110 + 35 + 240 + 16 = 401 parameters. Flat layout:
 * branch 1, branch 2, trunk.
 */
struct FusionBaseline {
    DenseNet branch1;
    DenseNet branch2;
    DenseNet trunk;

    std::size_t num_params() const;
    std::vector<double> get_params() const;
    void set_params(const std::vector<double> &flat);
    void init_uniform(std::uint64_t seed);

    double forward(const std::vector<double> &features16) const;

    /// Gradient of upstream * output with respect to all 401 parameters.
    std::vector<double> backward(const std::vector<double> &features16,
                                 double upstream) const;
};

FusionBaseline build_classical_fusion_baseline();

void to_json(nlohmann::json &j, const FusionBaseline &model);
void from_json(const nlohmann::json &j, FusionBaseline &model);

} // namespace qfusion::nn
