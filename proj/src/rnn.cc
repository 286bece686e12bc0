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

#include "memdec/rnn.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace memdec {

namespace {

void check_rows(int rows) {
    if (rows < 1 || rows > kMaxEventRows) {
        throw std::invalid_argument("event matrix must have between 1 and " + std::to_string(kMaxEventRows) +
                                    " rows, got " + std::to_string(rows));
    }
}

void check_inputs(const DecoderParams &params) {
    if (params.inputs() != kChecks) {
        throw std::invalid_argument("decoder expects " + std::to_string(params.inputs()) + " inputs per row, events have " +
                                    std::to_string(kChecks));
    }
}

// Buffers for one sample. x[t] holds the layer input [s_t, h_{t-1}] (after the DAC when
// discretizing), z[t] the pre-activation after the ADC, h[t] = ReLU(z[t]).
struct Scratch {
    int in = 0;
    int hid = 0;
    int out = 0;
    std::vector<double> x, z, h, logits, xe, dh, dz, dlogits;

    void resize(const DecoderParams &p, int rows) {
        in = p.inputs();
        hid = p.hidden();
        out = p.outputs();
        x.assign(static_cast<std::size_t>(rows) * (in + hid), 0.0);
        z.assign(static_cast<std::size_t>(rows) * hid, 0.0);
        h.assign(static_cast<std::size_t>(rows) * hid, 0.0);
        logits.assign(out, 0.0);
        xe.assign(hid, 0.0);
        dh.assign(hid, 0.0);
        dz.assign(hid, 0.0);
        dlogits.assign(out, 0.0);
    }
};

void run_forward(const DecoderParams &p, std::uint64_t events, int rows, const IoQuantizer *io, Scratch &s) {
    const int in = s.in;
    const int hid = s.hid;
    const int width = in + hid;
    const double bias_in = io ? io->dac(1.0) : 1.0;
    const double *w = p.recurrent.data.data();
    const double *b = w + static_cast<std::size_t>(width) * hid;
    for (int t = 0; t < rows; t++) {
        double *x = &s.x[static_cast<std::size_t>(t) * width];
        for (int j = 0; j < in; j++) {
            double v = static_cast<double>((events >> (kChecks * t + j)) & 1);
            x[j] = io ? io->dac(v) : v;
        }
        for (int j = 0; j < hid; j++) {
            double v = t == 0 ? 0.0 : s.h[static_cast<std::size_t>(t - 1) * hid + j];
            x[in + j] = io ? io->dac(v) : v;
        }
        double *z = &s.z[static_cast<std::size_t>(t) * hid];
        for (int k = 0; k < hid; k++) {
            z[k] = b[k] * bias_in;
        }
        for (int j = 0; j < width; j++) {
            const double xj = x[j];
            if (xj == 0.0) {
                continue;
            }
            const double *row = w + static_cast<std::size_t>(j) * hid;
            for (int k = 0; k < hid; k++) {
                z[k] += row[k] * xj;
            }
        }
        double *h = &s.h[static_cast<std::size_t>(t) * hid];
        for (int k = 0; k < hid; k++) {
            if (io) {
                z[k] = io->adc(z[k]);
            }
            h[k] = z[k] > 0.0 ? z[k] : 0.0;
        }
    }

    const double *we = p.evaluation.data.data();
    const double *be = we + static_cast<std::size_t>(hid) * s.out;
    const double *hl = &s.h[static_cast<std::size_t>(rows - 1) * hid];
    for (int j = 0; j < hid; j++) {
        s.xe[j] = io ? io->dac(hl[j]) : hl[j];
    }
    for (int o = 0; o < s.out; o++) {
        double acc = be[o] * bias_in;
        for (int j = 0; j < hid; j++) {
            acc += we[static_cast<std::size_t>(j) * s.out + o] * s.xe[j];
        }
        s.logits[o] = io ? io->adc(acc) : acc;
    }
}

// Adds weight * d(loss)/d(params) into grads and returns the sample's loss.
double run_backward(const DecoderParams &p, int rows, int label, double weight, const IoQuantizer *io, Scratch &s,
                    DecoderParams &grads) {
    const int in = s.in;
    const int hid = s.hid;
    const int out = s.out;
    const int width = in + hid;
    const double bias_in = io ? io->dac(1.0) : 1.0;

    double mx = s.logits[0];
    for (int o = 1; o < out; o++) {
        mx = std::max(mx, s.logits[o]);
    }
    double denom = 0.0;
    for (int o = 0; o < out; o++) {
        denom += std::exp(s.logits[o] - mx);
    }
    const double log_denom = std::log(denom) + mx;
    const double loss = log_denom - s.logits[label];
    for (int o = 0; o < out; o++) {
        s.dlogits[o] = weight * (std::exp(s.logits[o] - log_denom) - (o == label ? 1.0 : 0.0));
    }

    double *ge = grads.evaluation.data.data();
    const double *we = p.evaluation.data.data();
    for (int j = 0; j < hid; j++) {
        double acc = 0.0;
        for (int o = 0; o < out; o++) {
            ge[static_cast<std::size_t>(j) * out + o] += s.xe[j] * s.dlogits[o];
            acc += we[static_cast<std::size_t>(j) * out + o] * s.dlogits[o];
        }
        s.dh[j] = acc;
    }
    for (int o = 0; o < out; o++) {
        ge[static_cast<std::size_t>(hid) * out + o] += bias_in * s.dlogits[o];
    }

    double *gr = grads.recurrent.data.data();
    const double *wr = p.recurrent.data.data();
    for (int t = rows - 1; t >= 0; t--) {
        const double *z = &s.z[static_cast<std::size_t>(t) * hid];
        const double *x = &s.x[static_cast<std::size_t>(t) * width];
        for (int k = 0; k < hid; k++) {
            s.dz[k] = z[k] > 0.0 ? s.dh[k] : 0.0;
        }
        for (int j = 0; j < width; j++) {
            const double xj = x[j];
            if (xj == 0.0) {
                continue;
            }
            double *grow = gr + static_cast<std::size_t>(j) * hid;
            for (int k = 0; k < hid; k++) {
                grow[k] += xj * s.dz[k];
            }
        }
        double *gb = gr + static_cast<std::size_t>(width) * hid;
        for (int k = 0; k < hid; k++) {
            gb[k] += bias_in * s.dz[k];
        }
        if (t > 0) {
            for (int j = 0; j < hid; j++) {
                const double *row = wr + static_cast<std::size_t>(in + j) * hid;
                double acc = 0.0;
                for (int k = 0; k < hid; k++) {
                    acc += row[k] * s.dz[k];
                }
                s.dh[j] = acc;
            }
        }
    }
    return loss;
}

int predict_with(const DecoderParams &params, std::uint64_t events, int rows, const IoQuantizer *io, Scratch &s) {
    run_forward(params, events, rows, io, s);
    return argmax_logit(s.logits);
}

double table_accuracy(const DecoderParams &params, const PatternTable &table, const IoQuantizer *io) {
    if (table.total == 0) {
        throw std::invalid_argument("accuracy of an empty dataset is undefined");
    }
    params.validate();
    check_inputs(params);
    check_rows(table.event_rows);
    Scratch s;
    s.resize(params, table.event_rows);
    std::uint64_t correct = 0;
    for (const auto &e : table.entries) {
        correct += e.count[predict_with(params, e.events, table.event_rows, io, s)];
    }
    return static_cast<double>(correct) / static_cast<double>(table.total);
}

}  // namespace

ForwardTrace forward(const DecoderParams &params, std::uint64_t events, int rows) {
    params.validate();
    check_inputs(params);
    check_rows(rows);
    if (rows < kMaxEventRows && (events >> (kChecks * rows)) != 0) {
        throw std::invalid_argument("event bits set beyond the declared number of rows");
    }
    Scratch s;
    s.resize(params, rows);
    run_forward(params, events, rows, nullptr, s);
    ForwardTrace trace;
    const int hid = params.hidden();
    for (int t = 0; t < rows; t++) {
        trace.pre.emplace_back(s.z.begin() + t * hid, s.z.begin() + (t + 1) * hid);
        trace.hidden.emplace_back(s.h.begin() + t * hid, s.h.begin() + (t + 1) * hid);
    }
    trace.logits = s.logits;
    return trace;
}

int argmax_logit(std::span<const double> logits) {
    int best = 0;
    for (int o = 1; o < static_cast<int>(logits.size()); o++) {
        if (logits[o] > logits[best]) {
            best = o;
        }
    }
    return best;
}

int predict(const DecoderParams &params, std::uint64_t events, int rows) {
    return argmax_logit(forward(params, events, rows).logits);
}

LossAndGrads loss_and_grads(const DecoderParams &params, std::span<const Sample> batch, int rows,
                            const std::optional<IoQuantizer> &io) {
    if (batch.empty()) {
        throw std::invalid_argument("loss_and_grads needs a non-empty batch");
    }
    params.validate();
    check_inputs(params);
    check_rows(rows);

    // Group duplicates; the map keeps a fixed summation order regardless of batch order.
    std::map<std::pair<std::uint64_t, int>, std::size_t> counts;
    for (const auto &s : batch) {
        if (s.label >= params.outputs()) {
            throw std::invalid_argument("sample label out of range for the decoder outputs");
        }
        counts[{s.events, s.label}]++;
    }

    LossAndGrads result;
    result.grads = DecoderParams::zeros(params.shape());
    Scratch scratch;
    scratch.resize(params, rows);
    const IoQuantizer *q = io ? &*io : nullptr;
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    for (const auto &[key, count] : counts) {
        const auto [events, label] = key;
        const double weight = static_cast<double>(count) * inv_n;
        run_forward(params, events, rows, q, scratch);
        result.loss += weight * run_backward(params, rows, label, weight, q, scratch, result.grads);
    }
    return result;
}

double accuracy(const DecoderParams &params, const Dataset &data) {
    if (data.samples.empty()) {
        throw std::invalid_argument("accuracy of an empty dataset is undefined");
    }
    return accuracy(params, PatternTable::from(data));
}

double accuracy(const DecoderParams &params, const PatternTable &table) {
    return table_accuracy(params, table, nullptr);
}

double accuracy_discretized(const DecoderParams &params, const PatternTable &table, const IoQuantizer &io) {
    return table_accuracy(params, table, &io);
}

}  // namespace memdec
