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

#ifndef MEMDEC_CROSSBAR_H
#define MEMDEC_CROSSBAR_H

#include <cstdint>
#include <span>
#include <vector>

#include "memdec/dataset.h"
#include "memdec/decoder_params.h"
#include "memdec/quantize.h"
#include "memdec/rng.h"

namespace memdec {

/// sigma_prog(G) in uS as a polynomial in G (uS). With no coefficients the model falls back
/// to a constant relative spread: sigma = fallback_relative * G.
struct VariabilityModel {
    std::vector<double> coefficients;  // c_0 + c_1 G + ... ; empty => fallback
    double fallback_relative = 0.008;

    /// Clamped at zero.
    double sigma(double g) const;
    bool is_zero() const;
    friend bool operator==(const VariabilityModel &, const VariabilityModel &) = default;
};

struct CrossbarConfig {
    double g_hcs = 200.0;  // uS
    double g_lcs = 60.0;   // uS
    VariabilityModel variability;
    double stuck_rate = 0.10;
    double adc_bound = 6.0;
    double dac_bound = 1.0;
    int levels = 256;
    /// Off: converters are ideal (used to check the mapping round trip).
    bool quantize_io = true;

    IoQuantizer io() const {
        return {adc_bound, dac_bound, levels};
    }
    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;
    friend bool operator==(const CrossbarConfig &, const CrossbarConfig &) = default;
};

/// Per-unit stuck pairs, shaped like DecoderParams including the bias rows.
using FaultMap = ParamMask;

struct ConductancePair {
    Matrix g_plus;
    Matrix g_minus;
};

/// One crossbar tile after programming. Digital weight ~= (G+ - G-) * scale.
struct ProgrammedUnit {
    Matrix g_plus;
    Matrix g_minus;
    double scale = 0.0;  // w_max / (g_hcs - g_lcs)
    friend bool operator==(const ProgrammedUnit &, const ProgrammedUnit &) = default;
};

struct ProgrammedDecoder {
    ProgrammedUnit recurrent;
    ProgrammedUnit evaluation;
    friend bool operator==(const ProgrammedDecoder &, const ProgrammedDecoder &) = default;
};

/// Differential mapping: a positive weight programs G+ to |W| (g_hcs - g_lcs) / w_max + g_lcs
/// and leaves G- at g_lcs; a negative weight does the opposite.
ConductancePair map_weights(const Matrix &weights, double w_max, const CrossbarConfig &cfg);

/// G <- G + N(0, sigma_prog(G)) per device, truncated at 6 sigma. Devices set in `skip`
/// (stuck devices) are left as they are.
Matrix apply_variability(const Matrix &g, const VariabilityModel &model, Rng &rng, const Mask *skip = nullptr);

/// i.i.d. Bernoulli(stuck_rate) per differential pair.
Mask sample_fault_mask(int rows, int cols, double stuck_rate, Rng &rng);
FaultMap sample_fault_map(DecoderShape shape, double stuck_rate, Rng &rng);

/// Stuck pairs sit at g_hcs on both sides, cancelling to an effective weight of 0.
ConductancePair apply_faults(const ConductancePair &pair, const Mask &stuck, const CrossbarConfig &cfg);

/// i_k = sum_j (G+_jk - G-_jk) v_j, in uA for uS and V.
std::vector<double> crossbar_mvm(const Matrix &g_plus, const Matrix &g_minus, std::span<const double> v);

/// Maps both layers onto crossbar units: mapping with each unit's own w_max, programming
/// variability on every working device, then stuck pairs forced to HCS.
ProgrammedDecoder program_decoder(const DecoderParams &params, const CrossbarConfig &cfg, const FaultMap *faults,
                                  Rng &rng);

/// Inference path on programmed units with effective matrices precomputed, for evaluating
/// many inputs against one programming draw.
class AnalogDecoder {
   public:
    AnalogDecoder(const ProgrammedDecoder &units, const CrossbarConfig &cfg);

    /// Logits after the output ADC.
    std::vector<double> logits(std::uint64_t events, int rows) const;
    /// Comparator output (argmax, ties to 0).
    int predict(std::uint64_t events, int rows) const;
    double accuracy(const PatternTable &table) const;

   private:
    struct Unit {
        int rows = 0;
        int cols = 0;
        std::vector<double> diff;  // G+ - G-, row-major
        double gain = 0.0;         // scale * DAC scaling
    };
    Unit rec_;
    Unit eval_;
    int inputs_ = 0;
    bool quantize_ = true;
    IoQuantizer io_;

    void mvm(const Unit &u, const std::vector<double> &v, std::vector<double> &out) const;
    double to_voltage(double x) const;
};

/// Convenience wrapper: program-free prediction on already programmed units.
int analog_forward(const ProgrammedDecoder &units, const CrossbarConfig &cfg, std::uint64_t events, int rows);

}  // namespace memdec

#endif
