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
 * @file training.hpp
 * Adam optimizer, mini-batch MSE training loop with validation tracking,
 * and the model adapters the loop drives.
 *
 * Training is deterministic given (seed, config, dataset): shuffling is
 * seeded, gradients reduce in sample order, and the optimizer is
 * stateful-deterministic. Wall-clock fields are the only nondeterministic
 * log content.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qfusion/dataio.hpp"
#include "qfusion/nn.hpp"
#include "qfusion/qnn.hpp"

namespace qfusion::training {

struct TrainConfig {
    double learning_rate = 0.002;
    int batch_size = 100;
    int epochs = 100;
    std::uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double validation_fraction = 0.25;
    /// Stop after this many epochs without validation improvement;
    /// 0 disables early stopping.
    int patience = 20;
};

void validate(const TrainConfig &config);

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t step = 0;
};

AdamState make_adam_state(std::size_t num_params);

/**
 * One Adam update with bias correction:
 *   m' = b1 m + (1-b1) g,  v' = b2 v + (1-b2) g^2
 *   params -= lr * (m'/(1-b1^t)) / (sqrt(v'/(1-b2^t)) + eps)
 * The first step reduces to -lr * g / (|g| + eps) elementwise.
 */
void adam_step(std::vector<double> &params, const std::vector<double> &grads,
               AdamState &state, const TrainConfig &config);

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0;
    double validation_loss = 0.0;
    double wall_time_ms = 0.0;
};

using ConvergenceLog = std::vector<EpochRecord>;

/// "epoch,train_loss,val_loss,wall_time_ms" header plus one row per epoch.
std::string log_to_csv(const ConvergenceLog &log);

/// What the training loop needs from a model.
class Trainable {
  public:
    virtual ~Trainable() = default;
    virtual std::size_t num_params() const = 0;
    virtual std::vector<double> get_params() const = 0;
    virtual void set_params(const std::vector<double> &params) = 0;
    /// Batch MSE; fills `grad` (resized to num_params).
    virtual double loss_and_gradient(
        const std::vector<data::FusionSample> &batch,
        std::vector<double> &grad) = 0;
    virtual double predict(const data::FusionSample &sample) const = 0;
};

struct TrainResult {
    ConvergenceLog log;
    double best_validation_loss = 0.0;
    int best_epoch = 0;
};

/// Mean squared prediction error over a dataset.
double mse_on(const Trainable &model, const data::Dataset &samples);

/**
 * Mini-batch MSE descent on an explicit train/validation split. On return
 * the model holds the parameters of the best validation epoch.
 */
TrainResult train_on_splits(Trainable &model, const data::Dataset &train_set,
                            const data::Dataset &validation_set,
                            const TrainConfig &config);

/// Splits the dataset per config.validation_fraction (seeded), then trains.
TrainResult train(Trainable &model, const data::Dataset &dataset,
                  const TrainConfig &config);

/// Adapter exposing a QnnModel's circuit and head parameters (in that
/// order) to the loop.
class QnnTrainable : public Trainable {
  public:
    explicit QnnTrainable(qnn::QnnModel &model) : model_(model) {}

    std::size_t num_params() const override;
    std::vector<double> get_params() const override;
    void set_params(const std::vector<double> &params) override;
    double loss_and_gradient(const std::vector<data::FusionSample> &batch,
                             std::vector<double> &grad) override;
    double predict(const data::FusionSample &sample) const override;

  private:
    qnn::QnnModel &model_;
};

/// Adapter for the 401-parameter classical fusion baseline.
class ClassicalTrainable : public Trainable {
  public:
    explicit ClassicalTrainable(nn::FusionBaseline &model) : model_(model) {}

    std::size_t num_params() const override;
    std::vector<double> get_params() const override;
    void set_params(const std::vector<double> &params) override;
    double loss_and_gradient(const std::vector<data::FusionSample> &batch,
                             std::vector<double> &grad) override;
    double predict(const data::FusionSample &sample) const override;

  private:
    nn::FusionBaseline &model_;
};

} // namespace qfusion::training
