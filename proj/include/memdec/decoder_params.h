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

#ifndef MEMDEC_DECODER_PARAMS_H
#define MEMDEC_DECODER_PARAMS_H

#include <cstddef>
#include <cstdint>
#include <vector>

namespace memdec {

/// Dense row-major matrix of doubles.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {
    }

    double &operator()(int r, int c) {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
    double operator()(int r, int c) const {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
    std::size_t size() const {
        return data.size();
    }
    bool same_shape(const Matrix &o) const {
        return rows == o.rows && cols == o.cols;
    }
    double max_abs() const;
    friend bool operator==(const Matrix &, const Matrix &) = default;
};

/// Boolean matrix; a set entry marks a connection whose effective weight is forced to zero.
struct Mask {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> bits;

    Mask() = default;
    Mask(int r, int c, bool fill = false) : rows(r), cols(c), bits(static_cast<std::size_t>(r) * c, fill) {
    }

    bool operator()(int r, int c) const {
        return bits[static_cast<std::size_t>(r) * cols + c] != 0;
    }
    void set(int r, int c, bool v) {
        bits[static_cast<std::size_t>(r) * cols + c] = v;
    }
    std::size_t count() const;
    std::size_t size() const {
        return bits.size();
    }
    friend bool operator==(const Mask &, const Mask &) = default;
};

struct DecoderShape {
    int inputs = 4;
    int hidden = 16;
    int outputs = 2;
    friend bool operator==(const DecoderShape &, const DecoderShape &) = default;
};

/// Weights of the recurrent decoder. Each layer is stored with its bias as an extra last row,
/// which is also how the layer is laid out on a crossbar unit:
///   recurrent:  (inputs + hidden + 1) x hidden, rows [syndrome | previous hidden | bias]
///   evaluation: (hidden + 1) x outputs
struct DecoderParams {
    static constexpr int kLayers = 2;

    Matrix recurrent;
    Matrix evaluation;

    static DecoderParams zeros(DecoderShape shape = {});
    /// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per layer, biases included.
    static DecoderParams random_init(DecoderShape shape, std::uint64_t seed);

    DecoderShape shape() const;
    int inputs() const {
        return recurrent.rows - recurrent.cols - 1;
    }
    int hidden() const {
        return recurrent.cols;
    }
    int outputs() const {
        return evaluation.cols;
    }

    double &w_rec(int j, int k) {
        return recurrent(j, k);
    }
    double w_rec(int j, int k) const {
        return recurrent(j, k);
    }
    double &b_rec(int k) {
        return recurrent(recurrent.rows - 1, k);
    }
    double b_rec(int k) const {
        return recurrent(recurrent.rows - 1, k);
    }
    double &w_eval(int j, int k) {
        return evaluation(j, k);
    }
    double w_eval(int j, int k) const {
        return evaluation(j, k);
    }
    double &b_eval(int k) {
        return evaluation(evaluation.rows - 1, k);
    }
    double b_eval(int k) const {
        return evaluation(evaluation.rows - 1, k);
    }

    Matrix &layer(int i) {
        return i == 0 ? recurrent : evaluation;
    }
    const Matrix &layer(int i) const {
        return i == 0 ? recurrent : evaluation;
    }

    bool all_finite() const;
    /// Throws std::invalid_argument if the two layers do not fit together.
    void validate() const;
    bool same_shape(const DecoderParams &o) const {
        return recurrent.same_shape(o.recurrent) && evaluation.same_shape(o.evaluation);
    }
    friend bool operator==(const DecoderParams &, const DecoderParams &) = default;
};

/// One mask per decoder layer, shaped like DecoderParams (bias rows included).
struct ParamMask {
    Mask recurrent;
    Mask evaluation;

    static ParamMask none(DecoderShape shape = {});
    static ParamMask all(DecoderShape shape = {});

    Mask &layer(int i) {
        return i == 0 ? recurrent : evaluation;
    }
    const Mask &layer(int i) const {
        return i == 0 ? recurrent : evaluation;
    }
    std::size_t count() const {
        return recurrent.count() + evaluation.count();
    }
    std::size_t size() const {
        return recurrent.size() + evaluation.size();
    }
    bool matches(const DecoderParams &params) const;
    friend bool operator==(const ParamMask &, const ParamMask &) = default;
};

/// Returns a copy with every masked entry set to zero.
DecoderParams apply_mask(const DecoderParams &params, const ParamMask &mask);

}  // namespace memdec

#endif
