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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "memdec/dataset.h"
#include "memdec/frame_simulator.h"

using namespace memdec;

namespace {

// Recomputes detection events straight from a shot record.
std::vector<std::uint8_t> events_oracle(const ShotRecord &r, int rounds) {
    const auto &l = surface17();
    std::vector<std::uint8_t> raw;
    for (int t = 0; t < rounds; t++) {
        std::uint8_t row = 0;
        for (int k = 0; k < 4; k++) {
            row |= static_cast<std::uint8_t>(r.x_ancilla(t, k) << k);
        }
        raw.push_back(row);
    }
    std::uint8_t perfect = 0;
    for (int k = 0; k < 4; k++) {
        int parity = 0;
        for (int q = 0; q < 9; q++) {
            if ((l.x_check_support(k) >> q) & 1) {
                parity ^= (r.data_bits >> q) & 1;
            }
        }
        perfect |= static_cast<std::uint8_t>(parity << k);
    }
    raw.push_back(perfect);
    std::vector<std::uint8_t> ev(raw.size());
    for (std::size_t t = 0; t < raw.size(); t++) {
        ev[t] = t == 0 ? raw[0] : static_cast<std::uint8_t>(raw[t] ^ raw[t - 1]);
    }
    return ev;
}

}  // namespace

TEST(dataset, differencing_matches_oracle) {
    const CircuitSpec c = build_memory_x_circuit(3, {1e-2});
    Rng rng(11);
    const auto &l = surface17();
    for (int i = 0; i < 2000; i++) {
        const ShotRecord r = sample_shot(c, rng);
        const Sample s = to_sample(r, 3);
        const auto ev = events_oracle(r, 3);
        for (int t = 0; t < 4; t++) {
            ASSERT_EQ(s.row(t), ev[t]);
        }
        ASSERT_EQ(s.events >> 16, 0u);
        int label = 0;
        for (int q = 0; q < 9; q++) {
            if ((l.logical_x_support() >> q) & 1) {
                label ^= (r.data_bits >> q) & 1;
            }
        }
        ASSERT_EQ(s.label, label);
    }
}

TEST(dataset, raw_outcomes_integrate_events) {
    const double ps[] = {1e-2};
    const Dataset d = generate_dataset(ps, 500, 3, 4);
    for (const auto &s : d.samples) {
        const auto raw = raw_x_outcomes(s, 3);
        std::uint8_t acc = 0;
        for (int t = 0; t < 3; t++) {
            acc ^= s.row(t);
            ASSERT_EQ(raw[t], acc);
        }
    }
}

TEST(dataset, noiseless_samples_are_zero) {
    const double ps[] = {0.0};
    const Dataset d = generate_dataset(ps, 10000, 3, 1);
    ASSERT_EQ(d.size(), 10000u);
    for (const auto &s : d.samples) {
        ASSERT_EQ(s.events, 0u);
        ASSERT_EQ(s.label, 0);
    }
}

TEST(dataset, deterministic_and_thread_independent) {
    const std::vector<double> ps = {1e-3, 1e-2};
    const Dataset a = generate_dataset(ps, 3000, 3, 9, Split::Train, 1);
    const Dataset b = generate_dataset(ps, 3000, 3, 9, Split::Train, 4);
    const Dataset c = generate_dataset(ps, 3000, 3, 10, Split::Train, 1);
    EXPECT_EQ(a, b);
    EXPECT_NE(a.samples, c.samples);
    EXPECT_EQ(a.p_values, ps);
    for (std::size_t i = 0; i < a.size(); i++) {
        ASSERT_EQ(a.samples[i].p_index, i < 3000 ? 0 : 1);
    }
}

TEST(dataset, log_spaced_endpoints) {
    const auto v = log_spaced(1e-5, 1e-2, 10);
    ASSERT_EQ(v.size(), 10u);
    EXPECT_DOUBLE_EQ(v.front(), 1e-5);
    EXPECT_NEAR(v.back(), 1e-2, 1e-17);
    for (std::size_t i = 1; i < v.size(); i++) {
        EXPECT_NEAR(v[i] / v[i - 1], std::pow(10.0, 1.0 / 3.0), 1e-12);
    }
}

TEST(dataset, pattern_table_counts) {
    const double ps[] = {1e-2};
    const Dataset d = generate_dataset(ps, 5000, 3, 2);
    const PatternTable t = PatternTable::from(d);
    std::uint64_t total = 0, ones = 0;
    for (std::size_t i = 0; i < t.entries.size(); i++) {
        if (i) {
            ASSERT_LT(t.entries[i - 1].events, t.entries[i].events);
        }
        total += t.entries[i].count[0] + t.entries[i].count[1];
        ones += t.entries[i].count[1];
    }
    std::uint64_t labels = 0;
    for (const auto &s : d.samples) {
        labels += s.label;
    }
    EXPECT_EQ(total, 5000u);
    EXPECT_EQ(t.total, 5000u);
    EXPECT_EQ(ones, labels);
    EXPECT_DOUBLE_EQ(t.label_rate(), static_cast<double>(labels) / 5000.0);
}

TEST(dataset, select_p_keeps_one_rate) {
    const std::vector<double> ps = {1e-3, 1e-2};
    const Dataset d = generate_dataset(ps, 100, 3, 2);
    const Dataset s = select_p(d, 1);
    ASSERT_EQ(s.size(), 100u);
    for (std::size_t i = 0; i < s.size(); i++) {
        EXPECT_EQ(s.samples[i].events, d.samples[100 + i].events);
    }
}
