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

#ifndef MEMDEC_TRAINING_H
#define MEMDEC_TRAINING_H

#include <cstddef>
#include <cstdint>
#include <vector>

#include "memdec/adam.h"
#include "memdec/dataset.h"
#include "memdec/decoder_params.h"

namespace memdec {

struct TrainConfig {
    double learning_rate = 0.001;
    int batch_size = 32;
    int epochs = 50;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    int hidden = 16;
    std::uint64_t seed = 1;

    AdamConfig adam() const {
        return {learning_rate, adam_beta1, adam_beta2, adam_eps};
    }
    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;
    friend bool operator==(const TrainConfig &, const TrainConfig &) = default;
};

struct TrainResult {
    DecoderParams params;  // best-validation checkpoint
    double best_val_accuracy = 0.0;
    int best_epoch = 0;  // 1-based
    std::vector<double> val_history;
    std::vector<double> loss_history;  // mean training loss per epoch
};

/// Checks that both datasets are non-empty and share the number of rounds.
void check_training_data(const Dataset &train, const Dataset &val);

/// Sample order of one epoch: a seeded permutation of [0, n).
std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, int epoch);

/// Floating-point training from a seeded initialization: shuffled mini-batch Adam on the mean
/// cross-entropy, keeping the parameters with the best validation accuracy.
TrainResult train_fp(const Dataset &train, const Dataset &val, const TrainConfig &config);

}  // namespace memdec

#endif
