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

#ifndef MEMDEC_FRAME_SIMULATOR_H
#define MEMDEC_FRAME_SIMULATOR_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "memdec/rng.h"
#include "memdec/surface_code.h"

namespace memdec {

/// Raw measurement record of one shot, as flips relative to the noiseless reference.
///
/// The reference of every deterministic measurement in the memory-X circuit is 0. Z-check
/// outcomes of the first round are not deterministic in a real device; they are reported as 0
/// plus frame flips and are never used for decoding.
struct ShotRecord {
    /// One byte per round: bits 0..3 are X ancillas 0..3, bits 4..7 Z ancillas 0..3.
    std::vector<std::uint8_t> ancilla_bits;
    /// Bit q is the MeasureX outcome of data qubit q.
    std::uint16_t data_bits = 0;

    bool x_ancilla(int round, int k) const {
        return (ancilla_bits[round] >> k) & 1;
    }
    bool z_ancilla(int round, int k) const {
        return (ancilla_bits[round] >> (4 + k)) & 1;
    }
};

/// A deterministic fault: the channel on instruction `instruction` emits outcome `pauli`.
///
/// For Depolarize1 the outcome is 1..3 (X, Z, Y as x|z<<1 bits). For Depolarize2 it is 1..15,
/// with the low two bits acting on q0 and the high two on q1. Flip channels take outcome 1.
struct ForcedFault {
    std::size_t instruction;
    std::uint8_t pauli;
};

/// Pauli-frame simulation of one shot with every channel sampled from `rng`.
ShotRecord sample_shot(const CircuitSpec &circuit, Rng &rng);

/// Pauli-frame simulation with all stochastic channels off and only `faults` applied.
ShotRecord simulate_with_faults(const CircuitSpec &circuit, std::span<const ForcedFault> faults);

}  // namespace memdec

#endif
