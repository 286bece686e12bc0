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

#include "memdec/dataset.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "memdec/parallel.h"
#include "memdec/rng.h"

namespace memdec {

const char *split_name(Split split) {
    switch (split) {
        case Split::Train:
            return "train";
        case Split::Validation:
            return "validation";
        case Split::Test:
            return "test";
    }
    return "?";
}

void Dataset::validate() const {
    if (rounds < 1 || rounds + 1 > kMaxEventRows) {
        throw std::invalid_argument("dataset rounds out of range: " + std::to_string(rounds));
    }
    for (const auto &s : samples) {
        if (s.p_index >= p_values.size()) {
            throw std::invalid_argument("sample references unknown p index");
        }
        if (s.label > 1) {
            throw std::invalid_argument("sample label must be 0 or 1");
        }
    }
}

Sample to_sample(const ShotRecord &record, int rounds) {
    if (rounds < 1 || rounds + 1 > kMaxEventRows || record.ancilla_bits.size() != static_cast<std::size_t>(rounds)) {
        throw std::invalid_argument("shot record has " + std::to_string(record.ancilla_bits.size()) +
                                    " ancilla rows, expected " + std::to_string(rounds));
    }
    if (record.data_bits >> SurfaceCodeLayout::kDataQubits) {
        throw std::invalid_argument("data record has bits beyond the 9 data qubits");
    }
    const auto &layout = surface17();
    Sample s;
    std::uint8_t previous = 0;
    for (int t = 0; t < rounds; t++) {
        std::uint8_t x = record.ancilla_bits[t] & 0xF;
        s.events |= static_cast<std::uint64_t>(x ^ previous) << (kChecks * t);
        previous = x;
    }
    std::uint8_t perfect = 0;
    for (int k = 0; k < kChecks; k++) {
        perfect |= static_cast<std::uint8_t>((std::popcount(record.data_bits & layout.x_check_support(k)) & 1) << k);
    }
    s.events |= static_cast<std::uint64_t>(perfect ^ previous) << (kChecks * rounds);
    s.label = static_cast<std::uint8_t>(std::popcount(record.data_bits & layout.logical_x_support()) & 1);
    return s;
}

std::vector<std::uint8_t> raw_x_outcomes(const Sample &sample, int rounds) {
    std::vector<std::uint8_t> raw(rounds);
    std::uint8_t acc = 0;
    for (int t = 0; t < rounds; t++) {
        acc ^= sample.row(t);
        raw[t] = acc;
    }
    return raw;
}

Dataset generate_dataset(std::span<const double> p_values, std::size_t shots_per_p, int rounds, std::uint64_t seed,
                         Split split, std::size_t threads) {
    if (p_values.empty()) {
        throw std::invalid_argument("generate_dataset needs at least one p value");
    }
    if (shots_per_p < 1) {
        throw std::invalid_argument("shots_per_p must be >= 1");
    }
    if (rounds < 1 || rounds + 1 > kMaxEventRows) {
        throw std::invalid_argument("rounds out of range: " + std::to_string(rounds));
    }
    if (p_values.size() > 0xFFFF) {
        throw std::invalid_argument("too many p values");
    }
    std::vector<CircuitSpec> circuits;
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("p value outside [0, 1]: " + std::to_string(p));
        }
        circuits.push_back(build_memory_x_circuit(rounds, NoiseParams{p}));
    }

    Dataset data;
    data.p_values.assign(p_values.begin(), p_values.end());
    data.rounds = rounds;
    data.seed = seed;
    data.split = split;
    data.samples.resize(p_values.size() * shots_per_p);

    constexpr std::size_t kChunk = 4096;
    const std::size_t chunks_per_p = (shots_per_p + kChunk - 1) / kChunk;
    parallel_for(
        p_values.size() * chunks_per_p,
        [&](std::size_t job) {
            const std::size_t pi = job / chunks_per_p;
            const std::size_t begin = (job % chunks_per_p) * kChunk;
            const std::size_t end = std::min(shots_per_p, begin + kChunk);
            for (std::size_t shot = begin; shot < end; shot++) {
                Rng rng(derive_seed(seed, {pi, shot}));
                Sample s = to_sample(sample_shot(circuits[pi], rng), rounds);
                s.p_index = static_cast<std::uint16_t>(pi);
                data.samples[pi * shots_per_p + shot] = s;
            }
        },
        threads);
    return data;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (n < 1 || !(lo > 0.0) || !(hi >= lo)) {
        throw std::invalid_argument("log_spaced needs n >= 1 and 0 < lo <= hi");
    }
    if (n == 1) {
        return {hi};
    }
    std::vector<double> out(n);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < n; i++) {
        out[i] = std::pow(10.0, a + (b - a) * i / (n - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<SingleFault> enumerate_single_faults(const CircuitSpec &circuit) {
    std::vector<SingleFault> out;
    for (std::size_t i = 0; i < circuit.instructions.size(); i++) {
        const auto &ins = circuit.instructions[i];
        if (ins.probability <= 0.0) {
            continue;
        }
        const int n = CircuitSpec::outcome_count(ins.channel);
        for (int pauli = 1; pauli <= n; pauli++) {
            ForcedFault fault{i, static_cast<std::uint8_t>(pauli)};
            ShotRecord rec = simulate_with_faults(circuit, std::span<const ForcedFault>(&fault, 1));
            out.push_back({fault, ins.channel, to_sample(rec, circuit.rounds)});
        }
    }
    return out;
}

PatternTable PatternTable::from(const Dataset &data) {
    return from(data.samples, data.event_rows());
}

PatternTable PatternTable::from(std::span<const Sample> samples, int event_rows) {
    std::unordered_map<std::uint64_t, std::size_t> index;
    PatternTable table;
    table.event_rows = event_rows;
    for (const auto &s : samples) {
        auto [it, inserted] = index.try_emplace(s.events, table.entries.size());
        if (inserted) {
            table.entries.push_back({s.events, {0, 0}});
        }
        table.entries[it->second].count[s.label & 1]++;
    }
    table.total = samples.size();
    std::sort(table.entries.begin(), table.entries.end(),
              [](const Entry &a, const Entry &b) { return a.events < b.events; });
    return table;
}

double PatternTable::label_rate() const {
    std::uint64_t ones = 0;
    for (const auto &e : entries) {
        ones += e.count[1];
    }
    return total == 0 ? 0.0 : static_cast<double>(ones) / static_cast<double>(total);
}

Dataset select_p(const Dataset &data, std::size_t p_index) {
    if (p_index >= data.p_values.size()) {
        throw std::invalid_argument("p index out of range");
    }
    Dataset out;
    out.p_values = {data.p_values[p_index]};
    out.rounds = data.rounds;
    out.seed = data.seed;
    out.split = data.split;
    for (const auto &s : data.samples) {
        if (s.p_index == p_index) {
            Sample c = s;
            c.p_index = 0;
            out.samples.push_back(c);
        }
    }
    return out;
}

}  // namespace memdec
