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

// Reference implementations used only by tests. They are written directly from the model
// definitions and share no code with the library beyond the data types.

#ifndef MEMDEC_TESTS_ORACLES_H
#define MEMDEC_TESTS_ORACLES_H

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "memdec/dataset.h"
#include "memdec/decoder_params.h"
#include "memdec/rng.h"

namespace oracle {

using memdec::DecoderParams;

/// Plain RNN: h_t = relu(W_x^T x_t + W_h^T h_{t-1} + b), logits = W_o^T h_T + c.
inline std::vector<double> logits(const DecoderParams &p, std::uint64_t events, int rows,
                                  std::vector<double> *pre_out = nullptr) {
    const int in = p.inputs(), hid = p.hidden(), out = p.outputs();
    std::vector<double> h(hid, 0.0);
    for (int t = 0; t < rows; t++) {
        std::vector<double> z(hid);
        for (int k = 0; k < hid; k++) {
            double acc = p.b_rec(k);
            for (int j = 0; j < in; j++) {
                acc += p.w_rec(j, k) * static_cast<double>((events >> (4 * t + j)) & 1);
            }
            for (int j = 0; j < hid; j++) {
                acc += p.w_rec(in + j, k) * h[j];
            }
            z[k] = acc;
            if (pre_out) {
                pre_out->push_back(acc);
            }
        }
        for (int k = 0; k < hid; k++) {
            h[k] = std::max(0.0, z[k]);
        }
    }
    std::vector<double> o(out);
    for (int c = 0; c < out; c++) {
        double acc = p.b_eval(c);
        for (int j = 0; j < hid; j++) {
            acc += p.w_eval(j, c) * h[j];
        }
        o[c] = acc;
    }
    return o;
}

inline int predict(const DecoderParams &p, std::uint64_t events, int rows) {
    const auto o = logits(p, events, rows);
    int best = 0;
    for (int c = 1; c < static_cast<int>(o.size()); c++) {
        if (o[c] > o[best]) {
            best = c;
        }
    }
    return best;
}

/// Mean softmax cross-entropy.
inline double loss(const DecoderParams &p, const std::vector<memdec::Sample> &batch, int rows) {
    double total = 0.0;
    for (const auto &s : batch) {
        const auto o = logits(p, s.events, rows);
        const double m = *std::max_element(o.begin(), o.end());
        double z = 0.0;
        for (double v : o) {
            z += std::exp(v - m);
        }
        total += -(o[s.label] - m - std::log(z));
    }
    return total / static_cast<double>(batch.size());
}

/// Smallest |pre-activation| over the batch; central differences are only valid away from
/// the ReLU kink.
inline double kink_margin(const DecoderParams &p, const std::vector<memdec::Sample> &batch, int rows) {
    double margin = INFINITY;
    for (const auto &s : batch) {
        std::vector<double> pre;
        logits(p, s.events, rows, &pre);
        for (double v : pre) {
            margin = std::min(margin, std::abs(v));
        }
    }
    return margin;
}

/// Central finite-difference gradient of `loss` over every parameter.
inline DecoderParams fd_gradient(const DecoderParams &p, const std::vector<memdec::Sample> &batch, int rows,
                                 double step) {
    DecoderParams g = p;
    DecoderParams q = p;
    for (int l = 0; l < DecoderParams::kLayers; l++) {
        for (std::size_t i = 0; i < q.layer(l).data.size(); i++) {
            const double orig = q.layer(l).data[i];
            q.layer(l).data[i] = orig + step;
            const double up = loss(q, batch, rows);
            q.layer(l).data[i] = orig - step;
            const double down = loss(q, batch, rows);
            q.layer(l).data[i] = orig;
            g.layer(l).data[i] = (up - down) / (2.0 * step);
        }
    }
    return g;
}

/// ||a - b|| / max(||a||, ||b||) over all parameters.
inline double relative_error(const DecoderParams &a, const DecoderParams &b) {
    double diff = 0.0, na = 0.0, nb = 0.0;
    for (int l = 0; l < DecoderParams::kLayers; l++) {
        for (std::size_t i = 0; i < a.layer(l).data.size(); i++) {
            const double x = a.layer(l).data[i], y = b.layer(l).data[i];
            diff += (x - y) * (x - y);
            na += x * x;
            nb += y * y;
        }
    }
    const double scale = std::sqrt(std::max(na, nb));
    return scale == 0.0 ? std::sqrt(diff) : std::sqrt(diff) / scale;
}

/// Random sample with a uniformly random event pattern over `rows` rows.
inline memdec::Sample random_sample(memdec::Rng &rng, int rows) {
    memdec::Sample s;
    const std::uint64_t mask = rows >= 16 ? ~0ull : ((1ull << (4 * rows)) - 1);
    s.events = rng() & mask;
    s.label = static_cast<std::uint8_t>(rng() & 1);
    return s;
}

/// Ordinary least squares y = c0 + c1 x by normal equations.
inline std::pair<double, double> line_fit(const std::vector<double> &x, const std::vector<double> &y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); i++) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {(sy - slope * sx) / n, slope};
}

}  // namespace oracle

#endif
