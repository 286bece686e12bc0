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

#ifndef MEMDEC_SURFACE_CODE_H
#define MEMDEC_SURFACE_CODE_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace memdec {

/// Geometry of the distance-3 rotated surface code (surface-17).
///
/// Qubits live on a 7x7 grid: data qubits at odd (x, y), ancillas at even (x, y).
/// Qubit indices 0..8 are data qubits in row-major order, 9..12 the X-check ancillas,
/// 13..16 the Z-check ancillas.
///
///           y=0      y=2      y=4      y=6
///   x=0              Z0
///   x=2     X0       Z1       X1
///   x=4              X2       Z2       X3
///   x=6              Z3
///
/// Data qubit i sits at (2*(i/3)+1, 2*(i%3)+1). X_L is the X string on x=1 (qubits 0, 1, 2);
/// Z_L is the Z string on y=1 (qubits 0, 3, 6).
struct SurfaceCodeLayout {
    static constexpr int kDataQubits = 9;
    static constexpr int kChecksPerType = 4;
    static constexpr int kQubits = 17;
    static constexpr int kNone = -1;

    struct Coord {
        int x;
        int y;
    };

    std::array<Coord, kQubits> coords;
    /// x_checks[k][layer] is the data qubit touched by X ancilla k in CNOT layer `layer`,
    /// or kNone when that corner lies outside the patch.
    std::array<std::array<int, 4>, kChecksPerType> x_checks;
    std::array<std::array<int, 4>, kChecksPerType> z_checks;
    std::array<int, 3> logical_x;
    std::array<int, 3> logical_z;

    static constexpr int data_qubit(int i) {
        return i;
    }
    static constexpr int x_ancilla(int k) {
        return kDataQubits + k;
    }
    static constexpr int z_ancilla(int k) {
        return kDataQubits + kChecksPerType + k;
    }

    /// Bitmask over data qubits of the support of X check k.
    std::uint32_t x_check_support(int k) const;
    std::uint32_t z_check_support(int k) const;
    std::uint32_t logical_x_support() const;
};

/// The one layout used everywhere.
const SurfaceCodeLayout &surface17();

/// Fixed interaction order of the four CNOT layers, as (dx, dy) offsets from the ancilla.
///
/// X checks use the order (+1,+1) (-1,+1) (+1,-1) (-1,-1) and Z checks (+1,+1) (+1,-1) (-1,+1)
/// (-1,-1). The last two partners of an X check share a y coordinate and those of a Z check
/// share an x coordinate, so a hook error from one ancilla fault lies across the logical
/// operator of the same Pauli type instead of along it.
inline constexpr std::array<std::array<int, 2>, 4> kXCheckOrder{{{1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};
inline constexpr std::array<std::array<int, 2>, 4> kZCheckOrder{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

enum class Op : std::uint8_t { ResetZ, ResetX, H, CNOT, MeasureZ, MeasureX, Idle };

/// Noise attached to one instruction; it acts right after the operation (flips on a
/// measurement act on the recorded outcome).
enum class Channel : std::uint8_t { None, Depolarize1, Depolarize2, FlipPrep, FlipMeas };

struct Instruction {
    Op op;
    std::uint8_t q0;
    std::uint8_t q1;  // CNOT target; unused otherwise
    Channel channel;
    double probability;
};

struct NoiseParams {
    double p = 0.0;
};

/// Ordered instruction stream for one memory-X experiment.
struct CircuitSpec {
    int qubit_count = SurfaceCodeLayout::kQubits;
    int rounds = 0;
    double p = 0.0;
    std::vector<Instruction> instructions;

    /// Number of MeasureZ records (8 per round, X ancillas first).
    std::size_t ancilla_measurements() const;
    /// Number of Pauli outcomes a channel can emit (3, 15, 1 or 0).
    static int outcome_count(Channel channel);
    /// Throws std::invalid_argument if a structural invariant is broken.
    void validate() const;
};

/// Builds the noisy memory-X circuit:
///   prep (data |+>, ancillas |0>, flip 2p/3)
///   per round: data idle (DEP1 p), H on X ancillas (DEP1 p), 4 CNOT layers (DEP2 p),
///              H on X ancillas (DEP1 p), MeasureZ ancillas (flip 2p/3),
///              reset ancillas (flip 2p/3) unless it is the last round
///   final MeasureX on data (flip 2p/3)
/// Ancillas do not idle during the final data measurement.
CircuitSpec build_memory_x_circuit(int rounds, NoiseParams noise);

}  // namespace memdec

#endif
