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
#include <cstdlib>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "memdec/errors.h"
#include "memdec/evaluation.h"
#include "oracles.h"

using namespace memdec;

TEST(fit_monomial, exact_recovery) {
    std::vector<std::pair<double, double>> pts;
    for (double p : log_spaced(1e-4, 1e-2, 8)) {
        pts.emplace_back(p, 0.05 * std::pow(p, 1.8));
    }
    const CurveFit f = fit_monomial(pts);
    EXPECT_NEAR(f.a, 0.05, 0.05 * 1e-10);
    EXPECT_NEAR(f.b, 1.8, 1.8 * 1e-10);
    EXPECT_LT(f.residual, 1e-12);
    EXPECT_EQ(f.used, 8);
    EXPECT_EQ(f.excluded, 0);
}

TEST(fit_monomial, matches_normal_equation_oracle) {
    std::vector<std::pair<double, double>> pts = {{1e-3, 2e-4}, {2e-3, 9e-4}, {5e-3, 4e-3}, {1e-2, 0.02}};
    std::vector<double> x, y;
    for (auto [p, l] : pts) {
        x.push_back(std::log(p));
        y.push_back(std::log(l));
    }
    const auto [c0, c1] = oracle::line_fit(x, y);
    const CurveFit f = fit_monomial(pts);
    EXPECT_NEAR(f.b, c1, 1e-10);
    EXPECT_NEAR(std::log(f.a), c0, 1e-9);
}

TEST(fit_monomial, noisy_recovery) {
    // 5% multiplicative Gaussian noise on 8 points over [1e-4, 1e-2]. The slope is pinned
    // down tightly; the prefactor is an extrapolation to p = 1 from log p ~ -7 and has a
    // ~8% single-fit spread, so it is checked on the Monte-Carlo mean.
    std::mt19937_64 gen(3);
    std::normal_distribution<double> noise(0.0, 0.05);
    const auto grid = log_spaced(1e-4, 1e-2, 8);
    double sum_a = 0.0;
    const int trials = 2000;
    for (int t = 0; t < trials; t++) {
        std::vector<std::pair<double, double>> pts;
        for (double p : grid) {
            pts.emplace_back(p, 0.05 * std::pow(p, 1.8) * (1.0 + noise(gen)));
        }
        const CurveFit f = fit_monomial(pts);
        ASSERT_NEAR(f.b, 1.8, 0.18);
        sum_a += f.a;
    }
    EXPECT_NEAR(sum_a / trials, 0.05, 0.005);
}

TEST(fit_monomial, excludes_zero_and_one) {
    std::vector<std::pair<double, double>> pts = {{1e-4, 0.0}, {1e-3, 1e-4}, {1e-2, 1e-2}, {0.5, 1.0}};
    const CurveFit f = fit_monomial(pts);
    EXPECT_EQ(f.used, 2);
    EXPECT_EQ(f.excluded, 2);
    EXPECT_NEAR(f.b, 2.0, 1e-12);
    const std::vector<std::pair<double, double>> one = {{1e-3, 1e-4}};
    EXPECT_THROW(fit_monomial(one), InsufficientDataError);
    const std::vector<std::pair<double, double>> zeros = {{1e-3, 0.0}, {1e-2, 0.0}};
    EXPECT_THROW(fit_monomial(zeros), InsufficientDataError);
}

TEST(pseudo_threshold, closed_form_and_degenerate) {
    const PseudoThreshold t = pseudo_threshold({10.0, 2.0, 0.0, 2, 0});
    EXPECT_NEAR(t.value, 0.1, 1e-15);
    EXPECT_TRUE(t.in_range);
    EXPECT_FALSE(pseudo_threshold({0.5, 2.0, 0.0, 2, 0}).in_range);
    std::vector<std::pair<double, double>> identity;
    for (double p : {1e-3, 1e-2, 1e-1}) {
        identity.emplace_back(p, p);
    }
    EXPECT_THROW(pseudo_threshold(fit_monomial(identity)), DegenerateError);
}

TEST(summaries, mean_and_population_std) {
    const AccuracyStats s = summarize(0.01, {0.9, 0.8, 1.0});
    EXPECT_NEAR(s.mean, 0.9, 1e-15);
    EXPECT_NEAR(s.std, std::sqrt(0.02 / 3.0), 1e-15);
    EXPECT_EQ(summarize(0.01, {0.5}).std, 0.0);
}

TEST(schemes, names_round_trip) {
    for (Scheme s : {Scheme::Baseline, Scheme::FpMnd, Scheme::HwaMnd, Scheme::DsMnd}) {
        EXPECT_EQ(parse_scheme(scheme_name(s)), s);
    }
    EXPECT_FALSE(parse_scheme("nope"));
}

namespace {

ExperimentConfig tiny() {
    ExperimentConfig c;
    c.data.train_p_values = {3e-3, 1e-2};
    c.data.train_shots_per_p = 2000;
    c.data.val_shots_per_p = 500;
    c.train.epochs = 2;
    c.retrain.epochs = 1;
    c.retrain.val_draws = 2;
    c.protocol.n_train_runs = 2;
    c.protocol.n_infer_runs = 3;
    c.protocol.test_shots = 4000;
    c.protocol.p_values = {0.0, 3e-3, 1e-2};
    return c;
}

}  // namespace

TEST(experiment, baseline_has_one_value_per_training_run) {
    Experiment e(tiny());
    const double ps[] = {0.0, 1e-2};
    const EvalReport r = e.evaluate_scheme(Scheme::Baseline, 0.1, ps);
    EXPECT_EQ(r.stuck_rate, 0.0);
    ASSERT_EQ(r.per_p.size(), 2u);
    EXPECT_EQ(r.per_p[0].runs.size(), 2u);
    // p = 0: nothing to decode.
    EXPECT_EQ(r.per_p[0].mean, 1.0);
    EXPECT_EQ(r.per_p[0].std, 0.0);
}

TEST(experiment, analog_schemes_have_train_times_infer_runs) {
    Experiment e(tiny());
    const double ps[] = {1e-2};
    for (Scheme s : {Scheme::FpMnd, Scheme::HwaMnd, Scheme::DsMnd}) {
        const EvalReport r = e.evaluate_scheme(s, 0.1, ps);
        ASSERT_EQ(r.per_p[0].runs.size(), 6u) << scheme_name(s);
        for (double a : r.per_p[0].runs) {
            EXPECT_GE(a, 0.0);
            EXPECT_LE(a, 1.0);
        }
        EXPECT_GE(r.per_p[0].std, 0.0);
    }
}

TEST(experiment, curve_is_one_minus_accuracy) {
    Experiment e(tiny());
    const EvalReport r = e.lfr_curve(Scheme::Baseline, 0.0);
    const auto c = r.curve();
    ASSERT_EQ(c.size(), 3u);
    for (std::size_t i = 0; i < c.size(); i++) {
        EXPECT_EQ(c[i].lfr_mean, 1.0 - r.per_p[i].mean);
    }
    EXPECT_EQ(c[0].lfr_mean, 0.0);
    ASSERT_TRUE(r.fit.has_value());
    EXPECT_EQ(r.fit->excluded, 1);
}

TEST(experiment, deterministic_and_thread_independent) {
    const double ps[] = {3e-3, 1e-2};
    setenv("MEMDEC_THREADS", "1", 1);
    Experiment a(tiny());
    const EvalReport ra = a.evaluate_scheme(Scheme::DsMnd, 0.2, ps);
    setenv("MEMDEC_THREADS", "3", 1);
    Experiment b(tiny());
    const EvalReport rb = b.evaluate_scheme(Scheme::DsMnd, 0.2, ps);
    unsetenv("MEMDEC_THREADS");
    ASSERT_EQ(ra.per_p.size(), rb.per_p.size());
    for (std::size_t i = 0; i < ra.per_p.size(); i++) {
        EXPECT_EQ(ra.per_p[i].runs, rb.per_p[i].runs);
    }
    const EvalReport again = a.evaluate_scheme(Scheme::DsMnd, 0.2, ps);
    EXPECT_EQ(again.per_p[0].runs, ra.per_p[0].runs);
}

TEST(experiment, ds_reuses_one_fault_map_per_run) {
    Experiment e(tiny());
    const FaultMap &f0 = e.device_faults(0, 0.2);
    const FaultMap &f1 = e.device_faults(1, 0.2);
    EXPECT_NE(f0, f1);
    const DecoderParams &p = e.ds_params(0, 0.2);
    for (int l = 0; l < 2; l++) {
        for (std::size_t i = 0; i < f0.layer(l).bits.size(); i++) {
            if (f0.layer(l).bits[i]) {
                ASSERT_EQ(p.layer(l).data[i], 0.0);
            }
        }
    }
}

TEST(experiment, sweep_at_zero_matches_direct_evaluation) {
    Experiment e(tiny());
    const double rates[] = {0.0};
    const auto rows = e.stuck_sweep(Scheme::FpMnd, rates);
    const double ps[] = {1e-2};
    const EvalReport r = e.evaluate_scheme(Scheme::FpMnd, 0.0, ps);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].stats.runs, r.per_p[0].runs);
    const double pdrops[] = {0.0, 0.1};
    const double rate[] = {0.1};
    EXPECT_EQ(e.stuck_sweep(Scheme::HwaMnd, rate, pdrops).size(), 2u);
}

TEST(experiment, rejects_bad_protocol) {
    ExperimentConfig c = tiny();
    c.protocol.n_infer_runs = 0;
    EXPECT_THROW(Experiment{c}, std::invalid_argument);
    c = tiny();
    c.hwa_p_drop = 1.0;
    EXPECT_THROW(Experiment{c}, DegenerateError);
}
