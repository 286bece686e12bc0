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

#ifndef MEMDEC_ADAM_H
#define MEMDEC_ADAM_H

#include <cstdint>

#include "memdec/decoder_params.h"

namespace memdec {

struct AdamConfig {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    DecoderParams m;
    DecoderParams v;
    std::int64_t step = 0;

    static AdamState zeros_like(const DecoderParams &params);
};

/// One bias-corrected Adam update, in place. Entries set in `frozen` are left untouched,
/// moments included. Throws NumericError on non-finite gradients.
void adam_step(DecoderParams &params, const DecoderParams &grads, AdamState &state, const AdamConfig &config,
               const ParamMask *frozen = nullptr);

}  // namespace memdec

#endif
