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

#ifndef MEMDEC_RNN_H
#define MEMDEC_RNN_H

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "memdec/dataset.h"
#include "memdec/decoder_params.h"
#include "memdec/quantize.h"

namespace memdec {

/// Intermediate values of one forward pass. pre[t] and hidden[t] belong to event row t;
/// the initial hidden state is all zeros and is not stored.
struct ForwardTrace {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> hidden;
    std::vector<double> logits;
};

/// h_t = ReLU(W_rec^T [s_t, h_{t-1}, 1]), logits = W_eval^T [h_T, 1].
ForwardTrace forward(const DecoderParams &params, std::uint64_t events, int rows);

/// Index of the largest logit; ties go to the lower index (class 0 = no correction).
int argmax_logit(std::span<const double> logits);

int predict(const DecoderParams &params, std::uint64_t events, int rows);

struct LossAndGrads {
    double loss = 0.0;
    DecoderParams grads;
};

/// Mean softmax cross-entropy over the batch and its gradient by backpropagation through time.
/// Identical samples in a batch are evaluated once and weighted by multiplicity.
/// With `io` set, layer inputs and outputs are discretized in the forward pass and the
/// backward pass treats the quantizers as identity.
LossAndGrads loss_and_grads(const DecoderParams &params, std::span<const Sample> batch, int rows,
                            const std::optional<IoQuantizer> &io = std::nullopt);

/// Fraction of samples whose prediction equals the label.
double accuracy(const DecoderParams &params, const Dataset &data);
double accuracy(const DecoderParams &params, const PatternTable &table);

/// Same as accuracy() on a pattern table but with the IO quantizer applied in the forward pass.
double accuracy_discretized(const DecoderParams &params, const PatternTable &table, const IoQuantizer &io);

}  // namespace memdec

#endif
