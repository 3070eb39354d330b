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

#include "qfusion/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "qfusion/common.hpp"
#include "qfusion/rng.hpp"

namespace qfusion::data {
namespace {

std::vector<std::string> tokenize(const std::string &line) {
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) {
        tokens.push_back(tok);
    }
    return tokens;
}

double parse_field(const std::string &tok, int lineno) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(tok, &consumed);
    } catch (const std::exception &) {
        consumed = 0;
    }
    detail::require(consumed == tok.size(),
                    "malformed record at line " + std::to_string(lineno) +
                        ": '" + tok + "' is not a number");
    return value;
}

} // namespace

Dataset load_dataset(const std::string &path) {
    std::ifstream in(path);
    detail::require(in.good(), "cannot open dataset '" + path + "'");
    Dataset out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::vector<std::string> tokens = tokenize(line);
        if (tokens.empty() || tokens.front().front() == '#') {
            continue;
        }
        detail::require(tokens.size() >= 2, "malformed record at line " +
                                                std::to_string(lineno));
        detail::require(
            tokens.size() == static_cast<std::size_t>(kFusionFeatures) + 2,
            "record '" + tokens.front() + "' has " +
                std::to_string(tokens.size() - 2) + " features, expected " +
                std::to_string(kFusionFeatures));
        FusionSample sample;
        sample.id = tokens.front();
        sample.features.reserve(kFusionFeatures);
        for (int f = 0; f < kFusionFeatures; ++f) {
            sample.features.push_back(
                parse_field(tokens[static_cast<std::size_t>(f) + 1], lineno));
        }
        sample.affinity = parse_field(tokens.back(), lineno);
        detail::require(std::isfinite(sample.affinity),
                        "record '" + sample.id + "' has non-finite affinity");
        out.push_back(std::move(sample));
    }
    return out;
}

void save_dataset(const Dataset &samples, const std::string &path) {
    std::ofstream out(path);
    detail::require(out.good(), "cannot open '" + path + "' for writing");
    out << "# id";
    for (int f = 0; f < kFusionFeatures; ++f) {
        out << " feature_" << f;
    }
    out << " affinity\n";
    out << std::setprecision(17);
    for (const FusionSample &s : samples) {
        detail::require(
            s.features.size() == static_cast<std::size_t>(kFusionFeatures),
            "sample '" + s.id + "' does not have " +
                std::to_string(kFusionFeatures) + " features");
        detail::require(!s.id.empty() &&
                            s.id.find_first_of(" \t") == std::string::npos,
                        "sample id must be nonempty without whitespace");
        out << s.id;
        for (double f : s.features) {
            out << ' ' << f;
        }
        out << ' ' << s.affinity << '\n';
    }
    detail::require(out.good(), "write to '" + path + "' failed");
}

std::pair<Dataset, Dataset> split(const Dataset &samples,
                                  double validation_fraction,
                                  std::uint64_t seed) {
    detail::require(validation_fraction > 0.0 && validation_fraction < 1.0,
                    "validation fraction must be in (0, 1)");
    detail::require(samples.size() >= 2, "need at least 2 samples to split");
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::mt19937_64 engine = rng::make_engine(seed);
    std::shuffle(order.begin(), order.end(), engine);

    auto count = static_cast<std::size_t>(std::llround(
        validation_fraction * static_cast<double>(samples.size())));
    count = std::max<std::size_t>(1, std::min(count, samples.size() - 1));

    Dataset validation;
    Dataset train;
    validation.reserve(count);
    train.reserve(samples.size() - count);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i < count) {
            validation.push_back(samples[order[i]]);
        } else {
            train.push_back(samples[order[i]]);
        }
    }
    return {std::move(train), std::move(validation)};
}

} // namespace qfusion::data
