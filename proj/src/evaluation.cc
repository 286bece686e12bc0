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

#include "memdec/evaluation.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "memdec/errors.h"
#include "memdec/parallel.h"
#include "memdec/rnn.h"

namespace memdec {

namespace {

std::uint64_t key(double x) {
    return std::bit_cast<std::uint64_t>(x);
}

void check_rate(double r, const char *what) {
    if (!(r >= 0.0 && r <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
    }
}

}  // namespace

const char *scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::Baseline:
            return "baseline";
        case Scheme::FpMnd:
            return "fp_mnd";
        case Scheme::HwaMnd:
            return "hwa_mnd";
        case Scheme::DsMnd:
            return "ds_mnd";
    }
    return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
    if (name == "baseline") {
        return Scheme::Baseline;
    }
    if (name == "fp_mnd" || name == "fp") {
        return Scheme::FpMnd;
    }
    if (name == "hwa_mnd" || name == "hwa") {
        return Scheme::HwaMnd;
    }
    if (name == "ds_mnd" || name == "ds") {
        return Scheme::DsMnd;
    }
    return std::nullopt;
}

void EvalProtocol::validate() const {
    if (n_train_runs < 1 || n_infer_runs < 1 || test_shots < 1) {
        throw std::invalid_argument("protocol run and shot counts must be >= 1");
    }
    if (p_values.empty()) {
        throw std::invalid_argument("protocol needs at least one p value");
    }
    for (double p : p_values) {
        check_rate(p, "p");
    }
}

void DataConfig::validate() const {
    if (train_p_values.empty()) {
        throw std::invalid_argument("training needs at least one p value");
    }
    for (double p : train_p_values) {
        check_rate(p, "p");
    }
    if (train_shots_per_p < 1 || val_shots_per_p < 1) {
        throw std::invalid_argument("shot counts must be >= 1");
    }
    if (rounds < 1 || rounds + 1 > kMaxEventRows) {
        throw std::invalid_argument("rounds out of range");
    }
}

void ExperimentConfig::validate() const {
    data.validate();
    train.validate();
    RetrainConfig r = retrain;
    r.ds_mask.reset();
    r.validate();
    if (hwa_p_drop) {
        check_rate(*hwa_p_drop, "hwa p_drop");
        if (*hwa_p_drop == 1.0) {
            throw DegenerateError("p_drop = 1 drops every connection");
        }
    }
    crossbar.validate();
    protocol.validate();
}

CurveFit fit_monomial(std::span<const std::pair<double, double>> points) {
    std::vector<std::pair<double, double>> logs;
    CurveFit fit;
    for (const auto &[p, lfr] : points) {
        if (p > 0.0 && lfr > 0.0 && lfr < 1.0 && std::isfinite(p) && std::isfinite(lfr)) {
            logs.emplace_back(std::log(p), std::log(lfr));
        } else {
            fit.excluded++;
        }
    }
    if (logs.size() < 2) {
        throw InsufficientDataError("monomial fit needs two points with 0 < lfr < 1");
    }
    const double n = static_cast<double>(logs.size());
    double mx = 0.0, my = 0.0;
    for (const auto &[x, y] : logs) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto &[x, y] : logs) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) {
        throw InsufficientDataError("monomial fit needs two distinct p values");
    }
    fit.b = sxy / sxx;
    const double log_a = my - fit.b * mx;
    fit.a = std::exp(log_a);
    double ss = 0.0;
    for (const auto &[x, y] : logs) {
        const double r = y - (log_a + fit.b * x);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    fit.used = static_cast<int>(logs.size());
    return fit;
}

PseudoThreshold pseudo_threshold(const CurveFit &fit) {
    if (fit.b == 1.0) {
        throw DegenerateError("slope 1 fit never crosses lfr = p");
    }
    if (!(fit.a > 0.0)) {
        throw DegenerateError("fit prefactor must be positive");
    }
    PseudoThreshold t;
    t.value = std::exp(std::log(fit.a) / (1.0 - fit.b));
    t.in_range = t.value > 0.0 && t.value < 1.0;
    return t;
}

AccuracyStats summarize(double p, std::vector<double> runs) {
    AccuracyStats s;
    s.p = p;
    s.runs = std::move(runs);
    if (s.runs.empty()) {
        return s;
    }
    double sum = 0.0;
    for (double a : s.runs) {
        sum += a;
    }
    s.mean = sum / static_cast<double>(s.runs.size());
    double ss = 0.0;
    for (double a : s.runs) {
        ss += (a - s.mean) * (a - s.mean);
    }
    s.std = std::sqrt(ss / static_cast<double>(s.runs.size()));
    return s;
}

std::vector<CurvePoint> EvalReport::curve() const {
    std::vector<CurvePoint> out;
    for (const auto &s : per_p) {
        out.push_back({s.p, 1.0 - s.mean, s.std});
    }
    return out;
}

const AccuracyStats &EvalReport::at(double p) const {
    for (const auto &s : per_p) {
        if (s.p == p) {
            return s;
        }
    }
    throw std::out_of_range("report has no entry for this p");
}

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
    config_.validate();
}

const Dataset &Experiment::train_set() {
    if (!train_) {
        const auto &d = config_.data;
        train_ = generate_dataset(d.train_p_values, d.train_shots_per_p, d.rounds,
                                  derive_seed(config_.master_seed, {stream::kTrainData}), Split::Train);
    }
    return *train_;
}

const Dataset &Experiment::val_set() {
    if (!val_) {
        const auto &d = config_.data;
        val_ = generate_dataset(d.train_p_values, d.val_shots_per_p, d.rounds,
                                derive_seed(config_.master_seed, {stream::kValData}), Split::Validation);
    }
    return *val_;
}

const PatternTable &Experiment::test_table(double p) {
    auto it = tests_.find(p);
    if (it == tests_.end()) {
        check_rate(p, "p");
        const double ps[] = {p};
        Dataset d = generate_dataset(ps, config_.protocol.test_shots, config_.data.rounds,
                                     derive_seed(config_.master_seed, {stream::kTestData, key(p)}), Split::Test);
        it = tests_.emplace(p, PatternTable::from(d)).first;
    }
    return it->second;
}

void Experiment::adopt_datasets(Dataset train, Dataset val) {
    check_training_data(train, val);
    train_ = std::move(train);
    val_ = std::move(val);
}

void Experiment::adopt_fp(int run, DecoderParams params) {
    fp_.insert_or_assign(run, std::move(params));
}

void Experiment::adopt_hwa(int run, double p_drop, DecoderParams params) {
    hwa_.insert_or_assign(std::make_pair(run, p_drop), std::move(params));
}

void Experiment::adopt_ds(int run, double stuck_rate, DecoderParams params) {
    ds_.insert_or_assign(std::make_pair(run, stuck_rate), std::move(params));
}

std::uint64_t Experiment::fp_seed(int run) const {
    return derive_seed(config_.master_seed, {stream::kFpTraining, static_cast<std::uint64_t>(run)});
}

std::uint64_t Experiment::retrain_seed(int run, Scheme scheme, double rate) const {
    return derive_seed(config_.master_seed, {stream::kRetraining, static_cast<std::uint64_t>(run),
                                             static_cast<std::uint64_t>(scheme), key(rate)});
}

double Experiment::resolve_p_drop(double stuck_rate) const {
    return config_.hwa_p_drop.value_or(stuck_rate);
}

void Experiment::train_missing_fp() {
    std::vector<int> missing;
    for (int r = 0; r < config_.protocol.n_train_runs; r++) {
        if (!fp_.count(r)) {
            missing.push_back(r);
        }
    }
    if (missing.empty()) {
        return;
    }
    const Dataset &train = train_set();
    const Dataset &val = val_set();
    std::vector<DecoderParams> out(missing.size());
    parallel_for(missing.size(), [&](std::size_t i) {
        TrainConfig tc = config_.train;
        tc.seed = fp_seed(missing[i]);
        out[i] = train_fp(train, val, tc).params;
    });
    for (std::size_t i = 0; i < missing.size(); i++) {
        fp_.emplace(missing[i], std::move(out[i]));
    }
}

const DecoderParams &Experiment::fp_params(int run) {
    auto it = fp_.find(run);
    if (it != fp_.end()) {
        return it->second;
    }
    if (run >= 0 && run < config_.protocol.n_train_runs) {
        train_missing_fp();
        return fp_.at(run);
    }
    TrainConfig tc = config_.train;
    tc.seed = fp_seed(run);
    return fp_.emplace(run, train_fp(train_set(), val_set(), tc).params).first->second;
}

DecoderParams Experiment::retrain_run(Scheme scheme, int run, double stuck_rate, double p_drop) const {
    RetrainConfig rc = config_.retrain;
    rc.base = config_.train;
    rc.io = config_.crossbar.io();
    if (scheme == Scheme::HwaMnd) {
        rc.ds_mask.reset();
        rc.p_drop = p_drop;
        rc.seed = retrain_seed(run, Scheme::HwaMnd, p_drop);
        return retrain_hwa(fp_.at(run), *train_, *val_, rc).params;
    }
    rc.p_drop = 0.0;
    rc.ds_mask = faults_.at({run, stuck_rate});
    rc.seed = retrain_seed(run, Scheme::DsMnd, stuck_rate);
    return retrain_ds(fp_.at(run), *train_, *val_, rc).params;
}

void Experiment::prepare(Scheme scheme, double stuck_rate, double p_drop) {
    train_missing_fp();
    if (scheme == Scheme::Baseline || scheme == Scheme::FpMnd) {
        return;
    }
    auto &cache = scheme == Scheme::HwaMnd ? hwa_ : ds_;
    const double rate_key = scheme == Scheme::HwaMnd ? p_drop : stuck_rate;
    std::vector<int> missing;
    for (int r = 0; r < config_.protocol.n_train_runs; r++) {
        if (!cache.count({r, rate_key})) {
            missing.push_back(r);
            if (scheme == Scheme::DsMnd) {
                device_faults(r, stuck_rate);
            }
        }
    }
    train_set();
    val_set();
    std::vector<DecoderParams> out(missing.size());
    parallel_for(missing.size(), [&](std::size_t i) { out[i] = retrain_run(scheme, missing[i], stuck_rate, p_drop); });
    for (std::size_t i = 0; i < missing.size(); i++) {
        cache.emplace(std::make_pair(missing[i], rate_key), std::move(out[i]));
    }
}

const DecoderParams &Experiment::hwa_params(int run, double p_drop) {
    const auto k = std::make_pair(run, p_drop);
    auto it = hwa_.find(k);
    if (it != hwa_.end()) {
        return it->second;
    }
    fp_params(run);
    train_set();
    val_set();
    return hwa_.emplace(k, retrain_run(Scheme::HwaMnd, run, 0.0, p_drop)).first->second;
}

const FaultMap &Experiment::device_faults(int run, double stuck_rate) {
    check_rate(stuck_rate, "stuck rate");
    const auto k = std::make_pair(run, stuck_rate);
    auto it = faults_.find(k);
    if (it == faults_.end()) {
        Rng rng(derive_seed(config_.master_seed,
                            {stream::kDeviceFaults, static_cast<std::uint64_t>(run), key(stuck_rate)}));
        DecoderShape shape = {kChecks, config_.train.hidden, 2};
        it = faults_.emplace(k, sample_fault_map(shape, stuck_rate, rng)).first;
    }
    return it->second;
}

const DecoderParams &Experiment::ds_params(int run, double stuck_rate) {
    const auto k = std::make_pair(run, stuck_rate);
    auto it = ds_.find(k);
    if (it != ds_.end()) {
        return it->second;
    }
    fp_params(run);
    device_faults(run, stuck_rate);
    train_set();
    val_set();
    return ds_.emplace(k, retrain_run(Scheme::DsMnd, run, stuck_rate, 0.0)).first->second;
}

const DecoderParams &Experiment::scheme_params(Scheme scheme, int run, double stuck_rate, double p_drop) {
    switch (scheme) {
        case Scheme::Baseline:
        case Scheme::FpMnd:
            return fp_params(run);
        case Scheme::HwaMnd:
            return hwa_params(run, p_drop);
        case Scheme::DsMnd:
            return ds_params(run, stuck_rate);
    }
    throw std::invalid_argument("unknown scheme");
}

std::vector<AccuracyStats> Experiment::measure_analog(std::span<const DecoderParams> runs, double stuck_rate,
                                                      std::span<const FaultMap> fixed_faults,
                                                      std::span<const double> p_values,
                                                      std::uint64_t stream_key) {
    check_rate(stuck_rate, "stuck rate");
    if (!fixed_faults.empty() && fixed_faults.size() != runs.size()) {
        throw std::invalid_argument("need one fixed fault map per training run");
    }
    std::vector<const PatternTable *> tables;
    for (double p : p_values) {
        tables.push_back(&test_table(p));
    }
    CrossbarConfig cc = config_.crossbar;
    cc.stuck_rate = stuck_rate;
    const std::size_t n_inf = static_cast<std::size_t>(config_.protocol.n_infer_runs);
    const std::size_t total = runs.size() * n_inf;
    // acc[pi][run * n_inf + infer]
    std::vector<std::vector<double>> acc(p_values.size(), std::vector<double>(total));
    parallel_for(total, [&](std::size_t idx) {
        const std::size_t run = idx / n_inf;
        const std::size_t inf = idx % n_inf;
        Rng rng(derive_seed(config_.master_seed, {stream::kInference, stream_key, run, inf}));
        FaultMap sampled;
        const FaultMap *faults = nullptr;
        if (!fixed_faults.empty()) {
            faults = &fixed_faults[run];
        } else {
            sampled = sample_fault_map(runs[run].shape(), stuck_rate, rng);
            faults = &sampled;
        }
        const AnalogDecoder decoder(program_decoder(runs[run], cc, faults, rng), cc);
        for (std::size_t pi = 0; pi < tables.size(); pi++) {
            acc[pi][idx] = decoder.accuracy(*tables[pi]);
        }
    });
    std::vector<AccuracyStats> out;
    for (std::size_t pi = 0; pi < p_values.size(); pi++) {
        out.push_back(summarize(p_values[pi], std::move(acc[pi])));
    }
    return out;
}

EvalReport Experiment::evaluate_scheme(Scheme scheme, double stuck_rate, std::span<const double> p_values) {
    return evaluate_scheme(scheme, stuck_rate, p_values, resolve_p_drop(stuck_rate));
}

EvalReport Experiment::evaluate_scheme(Scheme scheme, double stuck_rate, std::span<const double> p_values,
                                       double p_drop) {
    check_rate(stuck_rate, "stuck rate");
    if (p_values.empty()) {
        throw std::invalid_argument("evaluation needs at least one p value");
    }
    EvalReport report;
    report.scheme = scheme;
    report.stuck_rate = scheme == Scheme::Baseline ? 0.0 : stuck_rate;
    report.p_drop = scheme == Scheme::HwaMnd ? p_drop : 0.0;

    const int n_runs = config_.protocol.n_train_runs;
    prepare(scheme, stuck_rate, p_drop);
    std::vector<DecoderParams> params;
    std::vector<FaultMap> fixed;
    for (int r = 0; r < n_runs; r++) {
        params.push_back(scheme_params(scheme, r, stuck_rate, p_drop));
        if (scheme == Scheme::DsMnd) {
            fixed.push_back(device_faults(r, stuck_rate));
        }
    }

    if (scheme == Scheme::Baseline) {
        for (double p : p_values) {
            const PatternTable &t = test_table(p);
            std::vector<double> accs;
            for (const auto &prm : params) {
                accs.push_back(accuracy(prm, t));
            }
            report.per_p.push_back(summarize(p, std::move(accs)));
        }
        return report;
    }
    // Every scheme sees the same programming draws at a given stuck rate.
    report.per_p = measure_analog(params, stuck_rate, fixed, p_values, key(stuck_rate));
    return report;
}

EvalReport Experiment::lfr_curve(Scheme scheme, double stuck_rate) {
    EvalReport report = evaluate_scheme(scheme, stuck_rate, config_.protocol.p_values);
    std::vector<std::pair<double, double>> points;
    for (const auto &c : report.curve()) {
        points.emplace_back(c.p, c.lfr_mean);
    }
    try {
        report.fit = fit_monomial(points);
        report.pseudo = pseudo_threshold(*report.fit);
    } catch (const InsufficientDataError &) {
    } catch (const DegenerateError &) {
    }
    return report;
}

std::vector<SweepRow> Experiment::stuck_sweep(Scheme scheme, std::span<const double> stuck_rates,
                                              std::span<const double> p_drops, double p) {
    const double ps[] = {p};
    std::vector<SweepRow> rows;
    for (double rate : stuck_rates) {
        if (scheme == Scheme::HwaMnd && !p_drops.empty()) {
            for (double pd : p_drops) {
                EvalReport r = evaluate_scheme(scheme, rate, ps, pd);
                rows.push_back({scheme, rate, pd, r.per_p.front()});
            }
        } else {
            EvalReport r = evaluate_scheme(scheme, rate, ps);
            rows.push_back({scheme, rate, r.p_drop, r.per_p.front()});
        }
    }
    return rows;
}

}  // namespace memdec
