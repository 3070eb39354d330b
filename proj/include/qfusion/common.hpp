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

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qfusion {

using cdouble = std::complex<double>;

inline constexpr int kMaxQubits = 12;

namespace detail {

inline void require(bool cond, const std::string &msg) {
    if (!cond) {
        throw std::invalid_argument(msg);
    }
}

inline void require_index(bool cond, const std::string &msg) {
    if (!cond) {
        throw std::out_of_range(msg);
    }
}

} // namespace detail
} // namespace qfusion
