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

#include "memdec/decoder_params.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "memdec/rng.h"

namespace memdec {

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

std::size_t Mask::count() const {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

DecoderParams DecoderParams::zeros(DecoderShape shape) {
    if (shape.inputs < 1 || shape.hidden < 1 || shape.outputs < 2) {
        throw std::invalid_argument("decoder needs >= 1 input, >= 1 hidden unit and >= 2 outputs");
    }
    DecoderParams p;
    p.recurrent = Matrix(shape.inputs + shape.hidden + 1, shape.hidden);
    p.evaluation = Matrix(shape.hidden + 1, shape.outputs);
    return p;
}

DecoderParams DecoderParams::random_init(DecoderShape shape, std::uint64_t seed) {
    DecoderParams p = zeros(shape);
    Rng rng(seed);
    for (int l = 0; l < kLayers; l++) {
        Matrix &m = p.layer(l);
        const double bound = 1.0 / std::sqrt(static_cast<double>(m.rows - 1));
        for (double &v : m.data) {
            v = (2.0 * rng.uniform() - 1.0) * bound;
        }
    }
    return p;
}

DecoderShape DecoderParams::shape() const {
    return {inputs(), hidden(), outputs()};
}

bool DecoderParams::all_finite() const {
    auto finite = [](const Matrix &m) {
        return std::all_of(m.data.begin(), m.data.end(), [](double v) { return std::isfinite(v); });
    };
    return finite(recurrent) && finite(evaluation);
}

void DecoderParams::validate() const {
    if (recurrent.cols < 1 || recurrent.rows <= recurrent.cols + 1) {
        throw std::invalid_argument("recurrent layer shape is inconsistent");
    }
    if (evaluation.rows != recurrent.cols + 1 || evaluation.cols < 2) {
        throw std::invalid_argument("evaluation layer does not match the hidden size");
    }
    if (recurrent.size() != recurrent.data.size() || evaluation.size() != evaluation.data.size()) {
        throw std::invalid_argument("layer storage does not match its shape");
    }
}

ParamMask ParamMask::none(DecoderShape shape) {
    ParamMask m;
    m.recurrent = Mask(shape.inputs + shape.hidden + 1, shape.hidden, false);
    m.evaluation = Mask(shape.hidden + 1, shape.outputs, false);
    return m;
}

ParamMask ParamMask::all(DecoderShape shape) {
    ParamMask m;
    m.recurrent = Mask(shape.inputs + shape.hidden + 1, shape.hidden, true);
    m.evaluation = Mask(shape.hidden + 1, shape.outputs, true);
    return m;
}

bool ParamMask::matches(const DecoderParams &params) const {
    return recurrent.rows == params.recurrent.rows && recurrent.cols == params.recurrent.cols &&
           evaluation.rows == params.evaluation.rows && evaluation.cols == params.evaluation.cols &&
           recurrent.bits.size() == params.recurrent.size() && evaluation.bits.size() == params.evaluation.size();
}

DecoderParams apply_mask(const DecoderParams &params, const ParamMask &mask) {
    if (!mask.matches(params)) {
        throw std::invalid_argument("mask shape does not match decoder parameters");
    }
    DecoderParams out = params;
    for (int l = 0; l < DecoderParams::kLayers; l++) {
        auto &data = out.layer(l).data;
        const auto &bits = mask.layer(l).bits;
        for (std::size_t i = 0; i < data.size(); i++) {
            if (bits[i]) {
                data[i] = 0.0;
            }
        }
    }
    return out;
}

}  // namespace memdec
