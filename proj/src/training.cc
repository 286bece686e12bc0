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

#include "memdec/training.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "memdec/rng.h"
#include "memdec/rnn.h"

namespace memdec {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) {
        throw std::invalid_argument("learning_rate must be > 0");
    }
    if (batch_size < 1) {
        throw std::invalid_argument("batch_size must be >= 1");
    }
    if (epochs < 1) {
        throw std::invalid_argument("epochs must be >= 1");
    }
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) || !(adam_eps > 0.0)) {
        throw std::invalid_argument("Adam betas must lie in [0, 1) and eps must be > 0");
    }
    if (hidden < 1) {
        throw std::invalid_argument("hidden size must be >= 1");
    }
}

void check_training_data(const Dataset &train, const Dataset &val) {
    if (train.samples.empty() || val.samples.empty()) {
        throw std::invalid_argument("training and validation datasets must be non-empty");
    }
    if (train.rounds != val.rounds) {
        throw std::invalid_argument("training and validation datasets have different rounds");
    }
    train.validate();
    val.validate();
}

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, int epoch) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(epoch)}));
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

TrainResult train_fp(const Dataset &train, const Dataset &val, const TrainConfig &config) {
    config.validate();
    check_training_data(train, val);
    const int rows = train.event_rows();
    const PatternTable val_table = PatternTable::from(val);

    DecoderShape shape{kChecks, config.hidden, 2};
    DecoderParams params = DecoderParams::random_init(shape, derive_seed(config.seed, {stream::kFpTraining, 0}));
    AdamState state = AdamState::zeros_like(params);
    const AdamConfig adam = config.adam();
    const std::uint64_t shuffle_seed = derive_seed(config.seed, {stream::kFpTraining, 1});

    TrainResult result;
    result.params = params;
    result.best_val_accuracy = -1.0;
    std::vector<Sample> batch;
    batch.reserve(config.batch_size);
    for (int epoch = 1; epoch <= config.epochs; epoch++) {
        const auto order = epoch_order(train.size(), shuffle_seed, epoch);
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            batch.clear();
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            for (std::size_t i = start; i < end; i++) {
                batch.push_back(train.samples[order[i]]);
            }
            auto lg = loss_and_grads(params, batch, rows);
            adam_step(params, lg.grads, state, adam);
            loss_sum += lg.loss;
            batches++;
        }
        const double acc = accuracy(params, val_table);
        result.val_history.push_back(acc);
        result.loss_history.push_back(loss_sum / static_cast<double>(batches));
        if (acc > result.best_val_accuracy) {
            result.best_val_accuracy = acc;
            result.best_epoch = epoch;
            result.params = params;
        }
    }
    return result;
}

}  // namespace memdec
