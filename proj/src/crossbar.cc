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

#include "memdec/crossbar.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "memdec/rnn.h"

namespace memdec {

double VariabilityModel::sigma(double g) const {
    if (coefficients.empty()) {
        return std::max(0.0, fallback_relative * g);
    }
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
        acc = acc * g + *it;
    }
    return std::max(0.0, acc);
}

bool VariabilityModel::is_zero() const {
    if (coefficients.empty()) {
        return fallback_relative == 0.0;
    }
    for (double c : coefficients) {
        if (c != 0.0) {
            return false;
        }
    }
    return true;
}

void CrossbarConfig::validate() const {
    if (!(g_lcs > 0.0) || !(g_hcs > g_lcs)) {
        throw std::invalid_argument("conductance range needs g_hcs > g_lcs > 0");
    }
    if (!(stuck_rate >= 0.0 && stuck_rate <= 1.0)) {
        throw std::invalid_argument("stuck_rate must lie in [0, 1]");
    }
    if (!(adc_bound > 0.0) || !(dac_bound > 0.0)) {
        throw std::invalid_argument("converter bounds must be > 0");
    }
    if (levels < 2) {
        throw std::invalid_argument("converters need at least 2 levels");
    }
    if (!(variability.fallback_relative >= 0.0)) {
        throw std::invalid_argument("relative variability must be >= 0");
    }
}

ConductancePair map_weights(const Matrix &weights, double w_max, const CrossbarConfig &cfg) {
    if (!(w_max > 0.0)) {
        throw std::invalid_argument("map_weights needs w_max > 0");
    }
    ConductancePair pair{Matrix(weights.rows, weights.cols, cfg.g_lcs), Matrix(weights.rows, weights.cols, cfg.g_lcs)};
    const double span = cfg.g_hcs - cfg.g_lcs;
    for (std::size_t i = 0; i < weights.data.size(); i++) {
        const double w = weights.data[i];
        const double g = std::abs(w) * span / w_max + cfg.g_lcs;
        if (w > 0.0) {
            pair.g_plus.data[i] = g;
        } else if (w < 0.0) {
            pair.g_minus.data[i] = g;
        }
    }
    return pair;
}

Matrix apply_variability(const Matrix &g, const VariabilityModel &model, Rng &rng, const Mask *skip) {
    if (skip && (skip->rows != g.rows || skip->cols != g.cols)) {
        throw std::invalid_argument("apply_variability: skip mask shape mismatch");
    }
    Matrix out = g;
    if (model.is_zero()) {
        return out;
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < out.data.size(); i++) {
        if (skip && skip->bits[i]) {
            continue;
        }
        double n;
        do {
            n = normal(rng);
        } while (std::abs(n) > 6.0);
        out.data[i] += model.sigma(g.data[i]) * n;
    }
    return out;
}

Mask sample_fault_mask(int rows, int cols, double stuck_rate, Rng &rng) {
    if (!(stuck_rate >= 0.0 && stuck_rate <= 1.0)) {
        throw std::invalid_argument("stuck_rate must lie in [0, 1]");
    }
    Mask m(rows, cols, false);
    for (auto &b : m.bits) {
        b = rng.uniform() < stuck_rate;
    }
    return m;
}

FaultMap sample_fault_map(DecoderShape shape, double stuck_rate, Rng &rng) {
    FaultMap map;
    map.recurrent = sample_fault_mask(shape.inputs + shape.hidden + 1, shape.hidden, stuck_rate, rng);
    map.evaluation = sample_fault_mask(shape.hidden + 1, shape.outputs, stuck_rate, rng);
    return map;
}

ConductancePair apply_faults(const ConductancePair &pair, const Mask &stuck, const CrossbarConfig &cfg) {
    if (!pair.g_plus.same_shape(pair.g_minus) || stuck.rows != pair.g_plus.rows || stuck.cols != pair.g_plus.cols) {
        throw std::invalid_argument("apply_faults: fault map shape does not match the unit");
    }
    ConductancePair out = pair;
    for (std::size_t i = 0; i < stuck.bits.size(); i++) {
        if (stuck.bits[i]) {
            out.g_plus.data[i] = cfg.g_hcs;
            out.g_minus.data[i] = cfg.g_hcs;
        }
    }
    return out;
}

std::vector<double> crossbar_mvm(const Matrix &g_plus, const Matrix &g_minus, std::span<const double> v) {
    if (!g_plus.same_shape(g_minus)) {
        throw std::invalid_argument("crossbar_mvm: G+ and G- differ in shape");
    }
    if (static_cast<int>(v.size()) != g_plus.rows) {
        throw std::invalid_argument("crossbar_mvm: " + std::to_string(v.size()) + " inputs for " +
                                    std::to_string(g_plus.rows) + " rows");
    }
    std::vector<double> i_out(g_plus.cols, 0.0);
    for (int j = 0; j < g_plus.rows; j++) {
        for (int k = 0; k < g_plus.cols; k++) {
            i_out[k] += (g_plus(j, k) - g_minus(j, k)) * v[j];
        }
    }
    return i_out;
}

ProgrammedDecoder program_decoder(const DecoderParams &params, const CrossbarConfig &cfg, const FaultMap *faults,
                                  Rng &rng) {
    cfg.validate();
    params.validate();
    if (faults && !faults->matches(params)) {
        throw std::invalid_argument("program_decoder: fault map shape does not match the decoder");
    }
    ProgrammedDecoder out;
    for (int l = 0; l < DecoderParams::kLayers; l++) {
        const Matrix &w = params.layer(l);
        double w_max = w.max_abs();
        if (w_max == 0.0) {
            w_max = 1.0;  // all-zero layer: every device stays at g_lcs
        }
        ConductancePair pair = map_weights(w, w_max, cfg);
        const Mask *stuck = faults ? &faults->layer(l) : nullptr;
        pair.g_plus = apply_variability(pair.g_plus, cfg.variability, rng, stuck);
        pair.g_minus = apply_variability(pair.g_minus, cfg.variability, rng, stuck);
        if (stuck) {
            pair = apply_faults(pair, *stuck, cfg);
        }
        ProgrammedUnit &unit = l == 0 ? out.recurrent : out.evaluation;
        unit.g_plus = std::move(pair.g_plus);
        unit.g_minus = std::move(pair.g_minus);
        unit.scale = w_max / (cfg.g_hcs - cfg.g_lcs);
    }
    return out;
}

AnalogDecoder::AnalogDecoder(const ProgrammedDecoder &units, const CrossbarConfig &cfg)
    : quantize_(cfg.quantize_io), io_(cfg.io()) {
    auto prepare = [&](const ProgrammedUnit &pu, Unit &u) {
        if (!pu.g_plus.same_shape(pu.g_minus)) {
            throw std::invalid_argument("programmed unit has mismatched G+ / G- shapes");
        }
        u.rows = pu.g_plus.rows;
        u.cols = pu.g_plus.cols;
        u.diff.resize(pu.g_plus.size());
        for (std::size_t i = 0; i < u.diff.size(); i++) {
            u.diff[i] = pu.g_plus.data[i] - pu.g_minus.data[i];
        }
        u.gain = pu.scale * io_.dac_scale();
    };
    prepare(units.recurrent, rec_);
    prepare(units.evaluation, eval_);
    if (eval_.rows != rec_.cols + 1 || rec_.rows <= rec_.cols + 1) {
        throw std::invalid_argument("programmed units do not form a decoder");
    }
    inputs_ = rec_.rows - rec_.cols - 1;
    if (inputs_ != kChecks) {
        throw std::invalid_argument("recurrent unit must take 4 syndrome inputs");
    }
}

double AnalogDecoder::to_voltage(double x) const {
    const double v = x / io_.dac_scale();
    return quantize_ ? quantize(v, io_.dac_bound, io_.levels) : v;
}

void AnalogDecoder::mvm(const Unit &u, const std::vector<double> &v, std::vector<double> &out) const {
    out.assign(u.cols, 0.0);
    for (int j = 0; j < u.rows; j++) {
        const double vj = v[j];
        if (vj == 0.0) {
            continue;
        }
        const double *row = &u.diff[static_cast<std::size_t>(j) * u.cols];
        for (int k = 0; k < u.cols; k++) {
            out[k] += row[k] * vj;
        }
    }
    for (int k = 0; k < u.cols; k++) {
        out[k] *= u.gain;
        if (quantize_) {
            out[k] = io_.adc(out[k]);
        }
    }
}

std::vector<double> AnalogDecoder::logits(std::uint64_t events, int rows) const {
    if (rows < 1 || rows > kMaxEventRows) {
        throw std::invalid_argument("event rows out of range");
    }
    const int hid = rec_.cols;
    std::vector<double> v(rec_.rows, 0.0);
    std::vector<double> h(hid, 0.0);
    std::vector<double> z;
    const double bias_v = to_voltage(1.0);
    for (int t = 0; t < rows; t++) {
        for (int j = 0; j < inputs_; j++) {
            v[j] = to_voltage(static_cast<double>((events >> (kChecks * t + j)) & 1));
        }
        for (int j = 0; j < hid; j++) {
            v[inputs_ + j] = to_voltage(h[j]);
        }
        v[rec_.rows - 1] = bias_v;
        mvm(rec_, v, z);
        for (int k = 0; k < hid; k++) {
            h[k] = z[k] > 0.0 ? z[k] : 0.0;
        }
    }
    std::vector<double> ve(eval_.rows);
    for (int j = 0; j < hid; j++) {
        ve[j] = to_voltage(h[j]);
    }
    ve[eval_.rows - 1] = bias_v;
    std::vector<double> out;
    mvm(eval_, ve, out);
    return out;
}

int AnalogDecoder::predict(std::uint64_t events, int rows) const {
    return argmax_logit(logits(events, rows));
}

double AnalogDecoder::accuracy(const PatternTable &table) const {
    if (table.total == 0) {
        throw std::invalid_argument("accuracy of an empty dataset is undefined");
    }
    std::uint64_t correct = 0;
    for (const auto &e : table.entries) {
        correct += e.count[predict(e.events, table.event_rows)];
    }
    return static_cast<double>(correct) / static_cast<double>(table.total);
}

int analog_forward(const ProgrammedDecoder &units, const CrossbarConfig &cfg, std::uint64_t events, int rows) {
    return AnalogDecoder(units, cfg).predict(events, rows);
}

}  // namespace memdec
