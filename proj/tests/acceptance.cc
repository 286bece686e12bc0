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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: memdec_acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "memdec/config.h"
#include "memdec/crossbar.h"
#include "memdec/dataset.h"
#include "memdec/evaluation.h"
#include "memdec/pipeline.h"
#include "memdec/quantize.h"
#include "memdec/rnn.h"
#include "memdec/serialization.h"
#include "memdec/surface_code.h"
#include "oracles.h"

using namespace memdec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

constexpr double kP = 1e-2;

/// Default experiment shared by the decoder-level criteria; datasets and FP decoders are
/// trained once.
Experiment &main_experiment() {
    static Experiment e{ExperimentConfig{}};
    return e;
}

/// Experiment differing from the default only in crossbar or retraining settings, reusing the
/// shared datasets and FP decoders.
std::unique_ptr<Experiment> variant(ExperimentConfig cfg) {
    Experiment &base = main_experiment();
    auto e = std::make_unique<Experiment>(std::move(cfg));
    e->adopt_datasets(base.train_set(), base.val_set());
    for (int r = 0; r < base.config().protocol.n_train_runs; r++) {
        e->adopt_fp(r, base.fp_params(r));
    }
    return e;
}

double mean_at(Experiment &e, Scheme s, double stuck, double p_drop = -1.0) {
    const double ps[] = {kP};
    const EvalReport r = p_drop < 0 ? e.evaluate_scheme(s, stuck, ps) : e.evaluate_scheme(s, stuck, ps, p_drop);
    return r.per_p[0].mean;
}

Outcome noiseless() {
    const double ps[] = {0.0};
    const Dataset d = generate_dataset(ps, 10000, 3, 1, Split::Test);
    std::size_t nonzero = 0;
    for (const auto &s : d.samples) {
        nonzero += s.events != 0 || s.label != 0;
    }
    return {nonzero == 0 && d.size() == 10000, fmt("%zu of %zu shots with events or label", nonzero, d.size())};
}

Outcome fault_distance() {
    const CircuitSpec c = build_memory_x_circuit(3, {1e-3});
    std::size_t bad = 0, logical = 0;
    const auto faults = enumerate_single_faults(c);
    for (const auto &f : faults) {
        // Check the recorded sample against a fresh deterministic simulation.
        const ForcedFault one[] = {f.fault};
        const Sample s = to_sample(simulate_with_faults(c, one), 3);
        bad += (s.label == 1 && s.events == 0) || s.events != f.sample.events || s.label != f.sample.label;
        logical += s.label;
    }
    return {bad == 0 && !faults.empty(),
            fmt("%zu single faults, %zu flip the logical, %zu undetected or inconsistent", faults.size(), logical, bad)};
}

Outcome gradients() {
    Rng rng(2024);
    double worst = 0.0;
    int checked = 0, skipped = 0;
    for (std::uint64_t trial = 0; checked < 100; trial++) {
        DecoderParams p = DecoderParams::random_init({}, 5000 + trial);
        const double scale = 0.5 + 2.5 * rng.uniform();
        for (int l = 0; l < DecoderParams::kLayers; l++) {
            for (double &v : p.layer(l).data) {
                v *= scale;
            }
        }
        const int rows = 1 + static_cast<int>(rng.below(kMaxEventRows));
        std::vector<Sample> batch;
        for (int i = 0; i < 4; i++) {
            batch.push_back(oracle::random_sample(rng, rows));
        }
        if (oracle::kink_margin(p, batch, rows) < 1e-4) {
            skipped++;
            continue;
        }
        const LossAndGrads lg = loss_and_grads(p, batch, rows);
        worst = std::max(worst, oracle::relative_error(lg.grads, oracle::fd_gradient(p, batch, rows, 1e-6)));
        checked++;
    }
    return {worst < 1e-5, fmt("100 draws (%d redrawn at ReLU kinks), worst relative error %.2e", skipped, worst)};
}

Outcome mapping_round_trip() {
    CrossbarConfig cfg;
    cfg.variability.fallback_relative = 0.0;
    cfg.stuck_rate = 0.0;
    cfg.quantize_io = false;
    Rng rng(7);
    int mismatches = 0, total = 0;
    for (int trial = 0; trial < 10; trial++) {
        // Mix of random and trained parameters.
        const DecoderParams p = trial < 5 ? DecoderParams::random_init({}, 300 + trial) : main_experiment().fp_params(trial - 5);
        const AnalogDecoder analog(program_decoder(p, cfg, nullptr, rng), cfg);
        for (int i = 0; i < 1000; i++) {
            const Sample s = oracle::random_sample(rng, 4);
            mismatches += analog.predict(s.events, 4) != predict(p, s.events, 4);
            total++;
        }
    }
    return {mismatches == 0, fmt("%d of %d predictions differ", mismatches, total)};
}

Outcome quantizer() {
    struct Case {
        double x, bound;
        int levels;
        double want;
    };
    const Case cases[] = {
        {7.0, 6.0, 256, 6.0},        {-7.0, 6.0, 256, -6.0},      {0.0, 6.0, 256, 0.0},
        {0.03, 6.0, 256, 0.046875},  {-0.03, 6.0, 256, -0.046875}, {1.0, 1.0, 256, 1.0},
        {1.0, 6.0, 256, 0.984375},   {0.5, 1.0, 256, 0.5},         {12.0 / 512.0, 6.0, 256, 0.046875},
        {6.0, 6.0, 256, 6.0},        {0.3, 1.0, 2, 0.0},          {0.6, 1.0, 2, 1.0},
    };
    int wrong = 0;
    for (const Case &c : cases) {
        wrong += quantize(c.x, c.bound, c.levels) != c.want;
    }
    // Unit vectors through the ADC: only the hot entry changes.
    for (int k = 0; k < 16; k++) {
        for (int j = 0; j < 16; j++) {
            wrong += quantize(j == k ? 1.0 : 0.0, 6.0, 256) != (j == k ? 0.984375 : 0.0);
        }
    }
    return {wrong == 0, fmt("%zu scalar cases and 16 unit vectors, %d wrong", std::size(cases), wrong)};
}

Outcome variability() {
    const VariabilityModel m;
    Matrix g(1000, 100, 100.0);
    Rng rng(11);
    const Matrix out = apply_variability(g, m, rng);
    double sum = 0.0, sq = 0.0;
    for (double v : out.data) {
        sum += v;
    }
    const double mean = sum / out.data.size();
    for (double v : out.data) {
        sq += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(sq / (out.data.size() - 1));
    return {std::abs(sd - 0.8) <= 0.8 * 0.02, fmt("sample std %.4f uS over 1e5 draws at 100 uS (target 0.8 +- 2%%)", sd)};
}

Outcome variability_curve() {
    auto at = [](double rel) {
        ExperimentConfig cfg;
        cfg.crossbar.variability.fallback_relative = rel;
        return mean_at(*variant(cfg), Scheme::FpMnd, 0.0);
    };
    const double a0 = at(0.0), a1 = at(0.01), a30 = at(0.30);
    const bool pass = std::abs(a1 - a0) <= 0.01 && a0 - a30 > 0.05;
    return {pass, fmt("FP accuracy at p=1e-2: 0%% var %.4f, 1%% var %.4f (diff %+.2f pts), 30%% var %.4f (drop %.2f pts)", a0,
                      a1, 100 * (a1 - a0), a30, 100 * (a0 - a30))};
}

Outcome stuck_degradation() {
    Experiment &e = main_experiment();
    const double base = mean_at(e, Scheme::Baseline, 0.0);
    const double fp = mean_at(e, Scheme::FpMnd, 0.2);
    return {base - fp > 0.15, fmt("baseline %.4f, FP at 20%% stuck %.4f, drop %.2f pts (need > 15)", base, fp,
                                  100 * (base - fp))};
}

Outcome dropconnect_gain() {
    ExperimentConfig cfg;
    cfg.retrain.noise_relative = 0.0;
    cfg.retrain.io_discretize = false;
    cfg.retrain.clip_scale.reset();
    auto e = variant(cfg);
    const double with = mean_at(*e, Scheme::HwaMnd, 0.1, 0.1);
    const double without = mean_at(*e, Scheme::HwaMnd, 0.1, 0.0);
    const bool pass = with - without >= 0.08 && std::abs(100 * with - 86.8568) <= 3.0 &&
                      std::abs(100 * without - 76.6248) <= 3.0;
    return {pass, fmt("10%% stuck, p=1e-2: dropconnect %.2f%% (ref 86.86), none %.2f%% (ref 76.62), gain %.2f pts", 100 * with,
                      100 * without, 100 * (with - without))};
}

Outcome ds_recovery() {
    Experiment &e = main_experiment();
    const double base = mean_at(e, Scheme::Baseline, 0.0);
    const double ds = mean_at(e, Scheme::DsMnd, 0.2);
    return {base - ds <= 0.015, fmt("baseline %.4f, DS at 20%% stuck %.4f, gap %.2f pts (need <= 1.5)", base, ds,
                                    100 * (base - ds))};
}

Outcome pseudo_thresholds() {
    Experiment &e = main_experiment();
    const EvalReport base = e.lfr_curve(Scheme::Baseline, 0.0);
    const EvalReport ds = e.lfr_curve(Scheme::DsMnd, 0.1);
    if (!base.pseudo || !ds.pseudo) {
        return {false, "fit failed"};
    }
    const double pb = base.pseudo->value, pd = ds.pseudo->value;
    const bool pass = std::abs(pb / 1.01e-3 - 1) <= 0.35 && std::abs(pd / 9.23e-4 - 1) <= 0.35 && pd < pb && pb / pd <= 1.3;
    return {pass, fmt("baseline p* %.3e (a %.4g, b %.3f), DS at 10%% stuck p* %.3e (a %.4g, b %.3f), ratio %.3f", pb, base.fit->a,
                      base.fit->b, pd, ds.fit->a, ds.fit->b, pb / pd)};
}

Outcome monomial_fit() {
    const std::vector<double> ps = log_spaced(1e-4, 1e-2, 8);
    const double a = 40.0, b = 1.7;
    std::vector<std::pair<double, double>> pts;
    for (double p : ps) {
        pts.emplace_back(p, a * std::pow(p, b));
    }
    const CurveFit exact = fit_monomial(pts);
    const double exact_err = std::max(std::abs(exact.a / a - 1), std::abs(exact.b / b - 1));
    // 5% multiplicative noise: the exponent per fit, the prefactor over many fits.
    Rng rng(5);
    std::normal_distribution<double> noise(0.0, 0.05);
    const int trials = 2000;
    double worst_b = 0.0, a_sum = 0.0;
    for (int t = 0; t < trials; t++) {
        for (std::size_t i = 0; i < ps.size(); i++) {
            pts[i].second = a * std::pow(ps[i], b) * (1.0 + noise(rng));
        }
        const CurveFit f = fit_monomial(pts);
        worst_b = std::max(worst_b, std::abs(f.b / b - 1));
        a_sum += f.a;
    }
    const double a_err = std::abs(a_sum / trials / a - 1);
    return {exact_err <= 1e-10 && worst_b <= 0.10 && a_err <= 0.10,
            fmt("noiseless rel err %.1e; 5%% noise: worst exponent err %.2f%%, mean prefactor err %.2f%%", exact_err,
                100 * worst_b, 100 * a_err)};
}

Outcome determinism() {
    std::string reports[2];
    const char *threads[2] = {"1", "3"};
    for (int i = 0; i < 2; i++) {
        RunConfig c;
        c.output_dir = (fs::temp_directory_path() / ("memdec_accept_" + std::to_string(i))).string();
        fs::remove_all(c.output_dir);
        setenv("MEMDEC_THREADS", threads[i], 1);
        run_pipeline(c, {false, nullptr});
        reports[i] = read_file((fs::path(c.output_dir) / "report.json").string());
        fs::remove_all(c.output_dir);
    }
    unsetenv("MEMDEC_THREADS");
    return {!reports[0].empty() && reports[0] == reports[1],
            fmt("default pipeline at 1 and 3 threads: report.json %zu bytes, %s", reports[0].size(),
                reports[0] == reports[1] ? "identical" : "DIFFERENT")};
}

struct Criterion {
    int id;
    const char *name;
    std::function<Outcome()> run;
    double time_limit;  // seconds, 0 = none
};

}  // namespace

int main(int argc, char **argv) {
    const std::vector<Criterion> criteria = {
        {1, "noiseless sanity", noiseless, 1},
        {2, "fault distance", fault_distance, 10},
        {3, "gradient oracle", gradients, 10},
        {4, "mapping round-trip", mapping_round_trip, 5},
        {5, "quantizer", quantizer, 0},
        {6, "variability statistics", variability, 1},
        {7, "variability robustness", variability_curve, 0},
        {8, "stuck-at degradation", stuck_degradation, 0},
        {9, "dropconnect gain", dropconnect_gain, 0},
        {10, "device-specific recovery", ds_recovery, 0},
        {11, "pseudo-thresholds", pseudo_thresholds, 3600},
        {12, "monomial fit", monomial_fit, 1},
        {13, "determinism", determinism, 0},
    };
    std::set<int> only;
    for (int i = 1; i < argc; i++) {
        only.insert(std::atoi(argv[i]));
    }
    auto wanted = [&](int id) { return only.empty() || only.count(id); };
    if (wanted(4) || wanted(7) || wanted(8) || wanted(9) || wanted(10) || wanted(11)) {
        // Shared datasets and FP decoders, outside the per-criterion timers.
        const auto t0 = std::chrono::steady_clock::now();
        Experiment &e = main_experiment();
        e.prepare(Scheme::FpMnd, 0.0, 0.0);
        std::printf("setup: %d FP decoders on %zu training samples [%.2f s]\n", e.config().protocol.n_train_runs,
                    e.train_set().size(), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        std::fflush(stdout);
    }
    int failed = 0;
    for (const auto &c : criteria) {
        if (!wanted(c.id)) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit > 0 && secs > c.time_limit) {
            o.pass = false;
            o.detail += fmt(" [over %.0f s limit]", c.time_limit);
        }
        failed += !o.pass;
        std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
