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

#include "memdec/adam.h"

#include <cmath>
#include <stdexcept>

#include "memdec/errors.h"

namespace memdec {

AdamState AdamState::zeros_like(const DecoderParams &params) {
    AdamState s;
    s.m = DecoderParams::zeros(params.shape());
    s.v = DecoderParams::zeros(params.shape());
    return s;
}

void adam_step(DecoderParams &params, const DecoderParams &grads, AdamState &state, const AdamConfig &config,
               const ParamMask *frozen) {
    if (!params.same_shape(grads) || !params.same_shape(state.m) || !params.same_shape(state.v)) {
        throw std::invalid_argument("adam_step: parameter, gradient and state shapes differ");
    }
    if (frozen && !frozen->matches(params)) {
        throw std::invalid_argument("adam_step: frozen mask shape differs from parameters");
    }
    if (!grads.all_finite()) {
        throw NumericError("adam_step: non-finite gradient");
    }
    state.step++;
    const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
    for (int l = 0; l < DecoderParams::kLayers; l++) {
        auto &w = params.layer(l).data;
        const auto &g = grads.layer(l).data;
        auto &m = state.m.layer(l).data;
        auto &v = state.v.layer(l).data;
        const auto *skip = frozen ? &frozen->layer(l).bits : nullptr;
        for (std::size_t i = 0; i < w.size(); i++) {
            if (skip && (*skip)[i]) {
                continue;
            }
            m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
            v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
            const double mhat = m[i] / c1;
            const double vhat = v[i] / c2;
            w[i] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.eps);
        }
    }
}

}  // namespace memdec
