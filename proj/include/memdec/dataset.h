// Copyright 2026 The memdec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEMDEC_DATASET_H
#define MEMDEC_DATASET_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "memdec/frame_simulator.h"
#include "memdec/surface_code.h"

namespace memdec {

/// Rows of the event matrix are packed 4 bits each into a 64-bit word.
inline constexpr int kChecks = SurfaceCodeLayout::kChecksPerType;
inline constexpr int kMaxEventRows = 64 / kChecks;

/// One shot as the decoder sees it: X-detection events over (rounds + 1) rows and the
/// logical-flip label. Bit 4*t + k of `events` is check k in row t; the last row is the
/// perfect round inferred from the data measurement.
struct Sample {
    std::uint64_t events = 0;
    std::uint8_t label = 0;
    std::uint16_t p_index = 0;

    bool event(int row, int check) const {
        return (events >> (kChecks * row + check)) & 1;
    }
    std::uint8_t row(int t) const {
        return static_cast<std::uint8_t>((events >> (kChecks * t)) & 0xF);
    }
    friend bool operator==(const Sample &, const Sample &) = default;
};

enum class Split : std::uint8_t { Train = 0, Validation = 1, Test = 2 };

const char *split_name(Split split);

struct Dataset {
    std::vector<Sample> samples;
    std::vector<double> p_values;
    int rounds = 0;
    std::uint64_t seed = 0;
    Split split = Split::Train;

    int event_rows() const {
        return rounds + 1;
    }
    std::size_t size() const {
        return samples.size();
    }
    /// Throws std::invalid_argument on inconsistent metadata.
    void validate() const;
    friend bool operator==(const Dataset &, const Dataset &) = default;
};

/// Differences raw X-check outcomes into detection events and attaches the perfect round
/// and the label. Only the 4 X ancilla columns are used.
Sample to_sample(const ShotRecord &record, int rounds);

/// Inverse of the differencing step on the noisy rows: recovers raw X outcomes per round.
std::vector<std::uint8_t> raw_x_outcomes(const Sample &sample, int rounds);

/// Samples `shots_per_p` shots at every p. Shot s at p_values[i] draws from the stream
/// derive_seed(seed, {i, s}), so the result does not depend on the worker count.
Dataset generate_dataset(std::span<const double> p_values, std::size_t shots_per_p, int rounds, std::uint64_t seed,
                         Split split = Split::Train, std::size_t threads = 0);

/// n log-spaced points in [lo, hi]; n == 1 gives {hi}.
std::vector<double> log_spaced(double lo, double hi, int n);

/// A single fault location together with the deterministic sample it produces.
struct SingleFault {
    ForcedFault fault;
    Channel channel;
    Sample sample;
};

/// Every single fault the circuit's noise channels (with probability > 0) can emit.
std::vector<SingleFault> enumerate_single_faults(const CircuitSpec &circuit);

/// Dataset collapsed into distinct event patterns with per-label counts.
///
/// Decoder accuracy only depends on the prediction per pattern, so evaluating over this table
/// gives the same number as the sample-by-sample loop at a fraction of the cost.
struct PatternTable {
    struct Entry {
        std::uint64_t events;
        std::uint64_t count[2];
    };
    std::vector<Entry> entries;  // sorted by events
    std::uint64_t total = 0;
    int event_rows = 0;

    static PatternTable from(const Dataset &data);
    static PatternTable from(std::span<const Sample> samples, int event_rows);
    /// Empirical fraction of label-1 samples.
    double label_rate() const;
};

/// Subset of a dataset restricted to one p index.
Dataset select_p(const Dataset &data, std::size_t p_index);

}  // namespace memdec

#endif
