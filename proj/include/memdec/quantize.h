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

#ifndef MEMDEC_QUANTIZE_H
#define MEMDEC_QUANTIZE_H

#include <algorithm>
#include <cmath>

namespace memdec {

/// ADC/DAC transfer function: clamp to [-bound, bound], then snap to a grid of `levels` steps
/// spanning 2*bound. Halfway cases round away from zero.
inline double quantize(double x, double bound, int levels) {
    if (x <= -bound) {
        return -bound;
    }
    if (x >= bound) {
        return bound;
    }
    const double step = 2.0 * bound / levels;
    return std::round(x / (2.0 * bound) * levels) * step;
}

/// Converter settings shared by the analog inference path and IO-discretized training.
struct IoQuantizer {
    double adc_bound = 6.0;
    double dac_bound = 1.0;
    int levels = 256;

    /// Scale applied before the DAC so that values up to adc_bound land in the DAC range.
    double dac_scale() const {
        return adc_bound / dac_bound;
    }
    /// Digital value -> DAC code -> digital value.
    double dac(double x) const {
        return quantize(x / dac_scale(), dac_bound, levels) * dac_scale();
    }
    double adc(double x) const {
        return quantize(x, adc_bound, levels);
    }
    friend bool operator==(const IoQuantizer &, const IoQuantizer &) = default;
};

}  // namespace memdec

#endif
