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

#ifndef MEMDEC_EVALUATION_H
#define MEMDEC_EVALUATION_H

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memdec/crossbar.h"
#include "memdec/dataset.h"
#include "memdec/decoder_params.h"
#include "memdec/hwa.h"
#include "memdec/training.h"

namespace memdec {

enum class Scheme { Baseline, FpMnd, HwaMnd, DsMnd };

const char *scheme_name(Scheme scheme);
/// Accepts "baseline", "fp_mnd", "hwa_mnd", "ds_mnd" (and the short forms fp/hwa/ds).
std::optional<Scheme> parse_scheme(std::string_view name);

struct EvalProtocol {
    int n_train_runs = 10;
    int n_infer_runs = 100;
    std::size_t test_shots = 100000;
    std::vector<double> p_values = log_spaced(1e-4, 1e-2, 8);

    /// Throws std::invalid_argument.
    void validate() const;
    friend bool operator==(const EvalProtocol &, const EvalProtocol &) = default;
};

struct CurveFit {
    double a = 0.0;
    double b = 0.0;
    double residual = 0.0;  // RMS of log-space residuals
    int used = 0;
    int excluded = 0;
};

struct PseudoThreshold {
    double value = 0.0;
    bool in_range = false;  // 0 < value < 1
};

/// Least squares of log(lfr) = log(a) + b log(p) over points with p > 0 and 0 < lfr < 1.
/// Throws InsufficientDataError with fewer than two usable points.
CurveFit fit_monomial(std::span<const std::pair<double, double>> points);

/// Solves a p^b = p. Throws DegenerateError when b == 1.
PseudoThreshold pseudo_threshold(const CurveFit &fit);

struct AccuracyStats {
    double p = 0.0;
    double mean = 0.0;
    double std = 0.0;  // population std over all runs
    std::vector<double> runs;  // train-run major, inference-run minor
};

AccuracyStats summarize(double p, std::vector<double> runs);

struct CurvePoint {
    double p = 0.0;
    double lfr_mean = 0.0;
    double lfr_std = 0.0;
};

struct EvalReport {
    Scheme scheme = Scheme::Baseline;
    double stuck_rate = 0.0;
    double p_drop = 0.0;  // random dropconnect used for hwa_mnd, 0 otherwise
    std::vector<AccuracyStats> per_p;
    std::optional<CurveFit> fit;
    std::optional<PseudoThreshold> pseudo;

    std::vector<CurvePoint> curve() const;
    const AccuracyStats &at(double p) const;
};

struct DataConfig {
    std::vector<double> train_p_values = log_spaced(1e-5, 1e-2, 10);
    std::size_t train_shots_per_p = 20000;
    std::size_t val_shots_per_p = 5000;
    int rounds = 3;

    void validate() const;
    friend bool operator==(const DataConfig &, const DataConfig &) = default;
};

struct ExperimentConfig {
    std::uint64_t master_seed = 1;
    DataConfig data;
    TrainConfig train;
    /// Template for hwa/ds retraining; seed, p_drop and ds_mask are filled in per run.
    RetrainConfig retrain;
    /// Random dropconnect for hwa_mnd; empty means "equal to the stuck rate".
    std::optional<double> hwa_p_drop;
    CrossbarConfig crossbar;
    EvalProtocol protocol;

    void validate() const;
    friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;
};

struct SweepRow {
    Scheme scheme;
    double stuck_rate;
    double p_drop;
    AccuracyStats stats;
};

/// Owns the datasets and caches every trained decoder so schemes and sweeps share them.
/// All randomness is derived from master_seed; results do not depend on MEMDEC_THREADS.
class Experiment {
   public:
    explicit Experiment(ExperimentConfig config);

    const ExperimentConfig &config() const {
        return config_;
    }
    const Dataset &train_set();
    const Dataset &val_set();
    const PatternTable &test_table(double p);

    /// Seeds each stage uses, exposed for the CLI and tests.
    std::uint64_t fp_seed(int run) const;
    std::uint64_t retrain_seed(int run, Scheme scheme, double rate) const;

    const DecoderParams &fp_params(int run);
    const DecoderParams &hwa_params(int run, double p_drop);
    /// Fault map of the characterized crossbar used by training run `run` at this stuck rate.
    const FaultMap &device_faults(int run, double stuck_rate);
    const DecoderParams &ds_params(int run, double stuck_rate);

    /// Parameters evaluated for `scheme` in training run `run`.
    const DecoderParams &scheme_params(Scheme scheme, int run, double stuck_rate, double p_drop);

    EvalReport evaluate_scheme(Scheme scheme, double stuck_rate, std::span<const double> p_values);
    EvalReport evaluate_scheme(Scheme scheme, double stuck_rate, std::span<const double> p_values, double p_drop);
    /// evaluate_scheme over protocol.p_values followed by the monomial fit and pseudo-threshold.
    EvalReport lfr_curve(Scheme scheme, double stuck_rate);
    /// Accuracy at p (default 1e-2) per stuck rate; for hwa_mnd also per p_drop.
    std::vector<SweepRow> stuck_sweep(Scheme scheme, std::span<const double> stuck_rates,
                                      std::span<const double> p_drops = {}, double p = 1e-2);

    /// Analog accuracy of fixed parameters, one list per training run. fixed_faults, when
    /// non-empty, holds one fault map per run used in every inference run.
    std::vector<AccuracyStats> measure_analog(std::span<const DecoderParams> runs, double stuck_rate,
                                              std::span<const FaultMap> fixed_faults,
                                              std::span<const double> p_values, std::uint64_t stream_key);

    /// Trains or retrains every missing run of a scheme at once (parallel over runs).
    void prepare(Scheme scheme, double stuck_rate, double p_drop);

    /// Pre-populate caches from persisted artifacts (resume). Values must be what the
    /// corresponding stage would have produced.
    void adopt_datasets(Dataset train, Dataset val);
    void adopt_fp(int run, DecoderParams params);
    void adopt_hwa(int run, double p_drop, DecoderParams params);
    void adopt_ds(int run, double stuck_rate, DecoderParams params);
    double hwa_p_drop(double stuck_rate) const {
        return resolve_p_drop(stuck_rate);
    }

   private:
    ExperimentConfig config_;
    std::optional<Dataset> train_;
    std::optional<Dataset> val_;
    std::map<double, PatternTable> tests_;
    std::map<int, DecoderParams> fp_;
    std::map<std::pair<int, double>, DecoderParams> hwa_;
    std::map<std::pair<int, double>, FaultMap> faults_;
    std::map<std::pair<int, double>, DecoderParams> ds_;

    double resolve_p_drop(double stuck_rate) const;
    void train_missing_fp();
    DecoderParams retrain_run(Scheme scheme, int run, double stuck_rate, double p_drop) const;
};

}  // namespace memdec

#endif
