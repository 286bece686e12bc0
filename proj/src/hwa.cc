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

#include "memdec/hwa.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "memdec/adam.h"
#include "memdec/errors.h"
#include "memdec/rnn.h"

namespace memdec {

void RetrainConfig::validate() const {
    if (!(p_drop >= 0.0 && p_drop <= 1.0)) {
        throw std::invalid_argument("p_drop must lie in [0, 1]");
    }
    if (p_drop == 1.0) {
        throw DegenerateError("p_drop = 1 drops every connection");
    }
    if (!(noise_relative >= 0.0)) {
        throw std::invalid_argument("noise_relative must be >= 0");
    }
    if (epochs < 1) {
        throw std::invalid_argument("retraining needs at least one epoch");
    }
    if (clip_scale && !(*clip_scale > 0.0)) {
        throw std::invalid_argument("clip scale must be > 0");
    }
    if (val_draws < 1) {
        throw std::invalid_argument("val_draws must be >= 1");
    }
    base.validate();
}

Mask dropconnect_mask(int rows, int cols, double p_drop, Rng &rng) {
    if (!(p_drop >= 0.0 && p_drop <= 1.0)) {
        throw std::invalid_argument("p_drop must lie in [0, 1]");
    }
    Mask m(rows, cols, false);
    for (auto &b : m.bits) {
        b = rng.uniform() < p_drop;
    }
    return m;
}

ParamMask dropconnect_mask(DecoderShape shape, double p_drop, Rng &rng) {
    ParamMask m;
    m.recurrent = dropconnect_mask(shape.inputs + shape.hidden + 1, shape.hidden, p_drop, rng);
    m.evaluation = dropconnect_mask(shape.hidden + 1, shape.outputs, p_drop, rng);
    return m;
}

double layer_stddev(const Matrix &layer) {
    if (layer.data.empty()) {
        return 0.0;
    }
    double mean = 0.0;
    for (double v : layer.data) {
        mean += v;
    }
    mean /= static_cast<double>(layer.data.size());
    double var = 0.0;
    for (double v : layer.data) {
        var += (v - mean) * (v - mean);
    }
    return std::sqrt(var / static_cast<double>(layer.data.size()));
}

void clamp_layer(Matrix &layer, double bound) {
    for (double &v : layer.data) {
        v = std::clamp(v, -bound, bound);
    }
}

DecoderParams clip_weights(const DecoderParams &params, double alpha) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("clip scale must be > 0");
    }
    DecoderParams out = params;
    for (int l = 0; l < DecoderParams::kLayers; l++) {
        Matrix &m = out.layer(l);
        clamp_layer(m, alpha * layer_stddev(m));
    }
    return out;
}

namespace {

// Forward-pass weights for one pass: masked entries zeroed, Gaussian noise of std
// noise_relative * w_max(layer) added to the survivors.
DecoderParams perturbed(const DecoderParams &params, const ParamMask &drop, double noise_relative, Rng &rng) {
    DecoderParams eff = params;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int l = 0; l < DecoderParams::kLayers; l++) {
        Matrix &m = eff.layer(l);
        const double sigma = noise_relative * params.layer(l).max_abs();
        const auto &bits = drop.layer(l).bits;
        for (std::size_t i = 0; i < m.data.size(); i++) {
            if (bits[i]) {
                m.data[i] = 0.0;
            } else if (sigma > 0.0) {
                m.data[i] += sigma * normal(rng);
            }
        }
    }
    return eff;
}

enum class Mode { Random, DeviceSpecific };

RetrainResult retrain(const DecoderParams &initial, const Dataset &train, const Dataset &val,
                      const RetrainConfig &config, Mode mode) {
    config.validate();
    check_training_data(train, val);
    initial.validate();
    if (initial.inputs() != kChecks) {
        throw std::invalid_argument("decoder input width does not match the syndrome rows");
    }
    const int rows = train.event_rows();
    const PatternTable val_table = PatternTable::from(val);
    const DecoderShape shape = initial.shape();

    const ParamMask *pinned = nullptr;
    DecoderParams params = initial;
    if (mode == Mode::DeviceSpecific) {
        if (!config.ds_mask || !config.ds_mask->matches(initial)) {
            throw std::invalid_argument("device-specific mask shape does not match the decoder");
        }
        pinned = &*config.ds_mask;
        params = apply_mask(params, *pinned);
    }
    const double p_drop = mode == Mode::Random ? config.p_drop : 0.0;
    const bool stochastic = p_drop > 0.0 || config.noise_relative > 0.0;
    const std::optional<IoQuantizer> io =
        config.io_discretize ? std::optional<IoQuantizer>(config.io) : std::optional<IoQuantizer>();

    auto pass_mask = [&](Rng &rng) {
        if (pinned) {
            return *pinned;
        }
        return p_drop > 0.0 ? dropconnect_mask(shape, p_drop, rng) : ParamMask::none(shape);
    };

    auto validate_params = [&](const DecoderParams &p, int epoch) {
        const int draws = stochastic ? config.val_draws : 1;
        double sum = 0.0;
        for (int d = 0; d < draws; d++) {
            Rng rng(derive_seed(config.seed, {stream::kRetraining, 2, static_cast<std::uint64_t>(epoch),
                                              static_cast<std::uint64_t>(d)}));
            ParamMask mask = pass_mask(rng);
            DecoderParams eff = perturbed(p, mask, config.noise_relative, rng);
            sum += io ? accuracy_discretized(eff, val_table, *io) : accuracy(eff, val_table);
        }
        return sum / draws;
    };

    AdamState state = AdamState::zeros_like(params);
    const AdamConfig adam = config.base.adam();
    const std::uint64_t shuffle_seed = derive_seed(config.seed, {stream::kRetraining, 0});
    const std::size_t batch_size = static_cast<std::size_t>(config.base.batch_size);

    RetrainResult result;
    result.params = params;
    result.best_val_accuracy = -1.0;
    std::vector<Sample> batch;
    batch.reserve(batch_size);
    for (int epoch = 1; epoch <= config.epochs; epoch++) {
        const auto order = epoch_order(train.size(), shuffle_seed, epoch);
        std::uint64_t batch_index = 0;
        for (std::size_t start = 0; start < order.size(); start += batch_size, batch_index++) {
            batch.clear();
            const std::size_t end = std::min(order.size(), start + batch_size);
            for (std::size_t i = start; i < end; i++) {
                batch.push_back(train.samples[order[i]]);
            }
            Rng rng(derive_seed(config.seed, {stream::kRetraining, 1, static_cast<std::uint64_t>(epoch), batch_index}));
            const ParamMask mask = pass_mask(rng);
            const DecoderParams eff = perturbed(params, mask, config.noise_relative, rng);
            LossAndGrads lg = loss_and_grads(eff, batch, rows, io);
            // Dropped connections do not reach the loss.
            lg.grads = apply_mask(lg.grads, mask);
            adam_step(params, lg.grads, state, adam, pinned);
            if (config.clip_scale) {
                params = clip_weights(params, *config.clip_scale);
                if (pinned) {
                    params = apply_mask(params, *pinned);
                }
            }
        }
        if (!params.all_finite()) {
            throw NumericError("retraining diverged");
        }
        const double acc = validate_params(params, epoch);
        result.val_history.push_back(acc);
        if (acc > result.best_val_accuracy) {
            result.best_val_accuracy = acc;
            result.best_epoch = epoch;
            result.params = params;
        }
    }
    return result;
}

}  // namespace

RetrainResult retrain_hwa(const DecoderParams &params, const Dataset &train, const Dataset &val,
                          const RetrainConfig &config) {
    if (config.ds_mask) {
        throw std::invalid_argument("retrain_hwa does not take a device-specific mask; use retrain_ds");
    }
    return retrain(params, train, val, config, Mode::Random);
}

RetrainResult retrain_ds(const DecoderParams &params, const Dataset &train, const Dataset &val,
                         const RetrainConfig &config) {
    return retrain(params, train, val, config, Mode::DeviceSpecific);
}

}  // namespace memdec
