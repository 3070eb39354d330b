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

#include "qfusion/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qfusion/common.hpp"
#include "qfusion/rng.hpp"

namespace qfusion::training {

void validate(const TrainConfig &config) {
    detail::require(config.learning_rate > 0.0,
                    "learning rate must be positive");
    detail::require(config.batch_size >= 1, "batch size must be positive");
    detail::require(config.epochs >= 1, "epoch count must be positive");
    detail::require(config.beta1 >= 0.0 && config.beta1 < 1.0 &&
                        config.beta2 >= 0.0 && config.beta2 < 1.0,
                    "Adam betas must be in [0, 1)");
    detail::require(config.eps > 0.0, "Adam epsilon must be positive");
    detail::require(config.validation_fraction > 0.0 &&
                        config.validation_fraction < 1.0,
                    "validation fraction must be in (0, 1)");
    detail::require(config.patience >= 0, "patience must be nonnegative");
}

AdamState make_adam_state(std::size_t num_params) {
    AdamState state;
    state.m.assign(num_params, 0.0);
    state.v.assign(num_params, 0.0);
    return state;
}

void adam_step(std::vector<double> &params, const std::vector<double> &grads,
               AdamState &state, const TrainConfig &config) {
    detail::require(params.size() == grads.size() &&
                        params.size() == state.m.size(),
                    "optimizer shape mismatch");
    state.step += 1;
    const double b1t = 1.0 - std::pow(config.beta1,
                                      static_cast<double>(state.step));
    const double b2t = 1.0 - std::pow(config.beta2,
                                      static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
        state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
        const double mhat = state.m[i] / b1t;
        const double vhat = state.v[i] / b2t;
        params[i] -= config.learning_rate * mhat /
                     (std::sqrt(vhat) + config.eps);
    }
}

std::string log_to_csv(const ConvergenceLog &log) {
    std::ostringstream os;
    os.precision(17);
    os << "epoch,train_loss,val_loss,wall_time_ms\n";
    for (const EpochRecord &r : log) {
        os << r.epoch << ',' << r.train_loss << ',' << r.validation_loss
           << ',' << r.wall_time_ms << '\n';
    }
    return os.str();
}

double mse_on(const Trainable &model, const data::Dataset &samples) {
    detail::require(!samples.empty(), "cannot evaluate an empty set");
    double acc = 0.0;
    for (const data::FusionSample &s : samples) {
        const double err = model.predict(s) - s.affinity;
        acc += err * err;
    }
    return acc / static_cast<double>(samples.size());
}

TrainResult train_on_splits(Trainable &model, const data::Dataset &train_set,
                            const data::Dataset &validation_set,
                            const TrainConfig &config) {
    validate(config);
    detail::require(!train_set.empty() && !validation_set.empty(),
                    "training needs nonempty splits");

    std::vector<double> params = model.get_params();
    AdamState state = make_adam_state(params.size());
    std::vector<double> grad;
    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::mt19937_64 shuffler =
        rng::make_engine(rng::substream_seed(config.seed, 0x5eed));

    TrainResult result;
    std::vector<double> best_params = params;
    double best_val = std::numeric_limits<double>::infinity();
    int best_epoch = 0;
    int stale = 0;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        std::shuffle(order.begin(), order.end(), shuffler);

        double epoch_loss = 0.0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t stop =
                std::min(order.size(),
                         start + static_cast<std::size_t>(config.batch_size));
            std::vector<data::FusionSample> batch;
            batch.reserve(stop - start);
            for (std::size_t i = start; i < stop; ++i) {
                batch.push_back(train_set[order[i]]);
            }
            const double batch_loss = model.loss_and_gradient(batch, grad);
            epoch_loss += batch_loss * static_cast<double>(batch.size());
            seen += batch.size();
            adam_step(params, grad, state, config);
            model.set_params(params);
        }

        EpochRecord record;
        record.epoch = epoch;
        record.train_loss = epoch_loss / static_cast<double>(seen);
        record.validation_loss = mse_on(model, validation_set);
        record.wall_time_ms =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - t0)
                .count();
        result.log.push_back(record);

        if (record.validation_loss < best_val) {
            best_val = record.validation_loss;
            best_epoch = epoch;
            best_params = params;
            stale = 0;
        } else {
            ++stale;
            if (config.patience > 0 && stale >= config.patience) {
                break;
            }
        }
    }

    model.set_params(best_params);
    result.best_validation_loss = best_val;
    result.best_epoch = best_epoch;
    return result;
}

TrainResult train(Trainable &model, const data::Dataset &dataset,
                  const TrainConfig &config) {
    validate(config);
    const auto [train_set, validation_set] =
        data::split(dataset, config.validation_fraction, config.seed);
    return train_on_splits(model, train_set, validation_set, config);
}

std::size_t QnnTrainable::num_params() const { return model_.num_params(); }

std::vector<double> QnnTrainable::get_params() const {
    std::vector<double> flat = model_.theta;
    const std::vector<double> head = model_.head.get_params();
    flat.insert(flat.end(), head.begin(), head.end());
    return flat;
}

void QnnTrainable::set_params(const std::vector<double> &params) {
    detail::require(params.size() == num_params(),
                    "parameter vector length mismatch");
    std::copy(params.begin(),
              params.begin() + static_cast<std::ptrdiff_t>(
                                   model_.theta.size()),
              model_.theta.begin());
    model_.head.set_params(std::vector<double>(
        params.begin() +
            static_cast<std::ptrdiff_t>(model_.theta.size()),
        params.end()));
}

double QnnTrainable::loss_and_gradient(
    const std::vector<data::FusionSample> &batch, std::vector<double> &grad) {
    const qnn::QnnGradient g = qnn::gradient(model_, batch);
    grad = g.theta;
    grad.insert(grad.end(), g.head.begin(), g.head.end());
    return g.loss;
}

double QnnTrainable::predict(const data::FusionSample &sample) const {
    return qnn::forward(model_, sample.features).prediction;
}

std::size_t ClassicalTrainable::num_params() const {
    return model_.num_params();
}

std::vector<double> ClassicalTrainable::get_params() const {
    return model_.get_params();
}

void ClassicalTrainable::set_params(const std::vector<double> &params) {
    model_.set_params(params);
}

double ClassicalTrainable::loss_and_gradient(
    const std::vector<data::FusionSample> &batch, std::vector<double> &grad) {
    detail::require(!batch.empty(), "gradient needs a nonempty batch");
    grad.assign(num_params(), 0.0);
    double loss = 0.0;
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (const data::FusionSample &s : batch) {
        const double err = model_.forward(s.features) - s.affinity;
        loss += inv * err * err;
        const std::vector<double> g =
            model_.backward(s.features, 2.0 * inv * err);
        for (std::size_t i = 0; i < grad.size(); ++i) {
            grad[i] += g[i];
        }
    }
    return loss;
}

double ClassicalTrainable::predict(const data::FusionSample &sample) const {
    return model_.forward(sample.features);
}

} // namespace qfusion::training
