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
 * @file telemetry.hpp
 * Process-wide execution counters. Incremented by the circuit execution layer
 * so that callers can account for the simulation cost of a workload (for
 * example, the circuit overhead of an extrapolation scheme) or assert that a
 * classical post-processing step runs no circuits at all.
 */

#pragma once

#include <atomic>
#include <cstdint>

namespace qfusion::telemetry {

struct Counters {
    std::atomic<std::uint64_t> circuit_executions{0};
    std::atomic<std::uint64_t> gate_applications{0};

    void reset() {
        circuit_executions.store(0, std::memory_order_relaxed);
        gate_applications.store(0, std::memory_order_relaxed);
    }
};

inline Counters &counters() {
    static Counters instance;
    return instance;
}

inline void record_execution(std::uint64_t gates) {
    auto &c = counters();
    c.circuit_executions.fetch_add(1, std::memory_order_relaxed);
    c.gate_applications.fetch_add(gates, std::memory_order_relaxed);
}

} // namespace qfusion::telemetry
