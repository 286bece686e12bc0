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

#ifndef MEMDEC_HWA_H
#define MEMDEC_HWA_H

#include <cstdint>
#include <optional>

#include "memdec/crossbar.h"
#include "memdec/dataset.h"
#include "memdec/decoder_params.h"
#include "memdec/rng.h"
#include "memdec/training.h"

namespace memdec {

struct RetrainConfig {
    double p_drop = 0.0;
    /// Std of injected weight noise relative to the layer's largest |weight|.
    double noise_relative = 0.008;
    bool io_discretize = false;
    std::optional<double> clip_scale;
    int epochs = 10;
    /// Device-specific mode: connections set here are pinned to zero and never updated.
    std::optional<FaultMap> ds_mask;
    std::uint64_t seed = 1;
    /// Optimizer settings carried over from FP training.
    TrainConfig base;
    IoQuantizer io;
    /// Mask/noise draws averaged when scoring the validation set.
    int val_draws = 8;

    /// Throws std::invalid_argument on out-of-range fields and DegenerateError for p_drop = 1.
    void validate() const;
    friend bool operator==(const RetrainConfig &, const RetrainConfig &) = default;
};

struct RetrainResult {
    DecoderParams params;
    double best_val_accuracy = 0.0;
    int best_epoch = 0;
    std::vector<double> val_history;
};

/// Random dropconnect mask: set entries are dropped. Each entry is Bernoulli(p_drop).
Mask dropconnect_mask(int rows, int cols, double p_drop, Rng &rng);
ParamMask dropconnect_mask(DecoderShape shape, double p_drop, Rng &rng);

/// Per layer, clamps every entry (bias row included) to [-alpha*sigma, alpha*sigma] where
/// sigma is the population standard deviation of that layer.
DecoderParams clip_weights(const DecoderParams &params, double alpha);
/// Clamp one layer to a precomputed bound.
void clamp_layer(Matrix &layer, double bound);
double layer_stddev(const Matrix &layer);

/// Hardware-aware fine-tuning with random dropconnect, weight-noise injection, optional IO
/// discretization (straight-through gradient) and optional clipping after each update.
/// Requires config.ds_mask to be empty.
RetrainResult retrain_hwa(const DecoderParams &params, const Dataset &train, const Dataset &val,
                          const RetrainConfig &config);

/// Device-specific retraining: connections in config.ds_mask are zero in every pass and
/// frozen in the optimizer; the rest train as in retrain_hwa without random dropping.
/// The returned parameters are exactly zero on the mask.
RetrainResult retrain_ds(const DecoderParams &params, const Dataset &train, const Dataset &val,
                         const RetrainConfig &config);

}  // namespace memdec

#endif
