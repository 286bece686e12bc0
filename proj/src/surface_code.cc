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

#include "memdec/surface_code.h"

#include <stdexcept>
#include <string>

namespace memdec {

namespace {

SurfaceCodeLayout make_layout() {
    SurfaceCodeLayout layout{};
    for (int i = 0; i < SurfaceCodeLayout::kDataQubits; i++) {
        layout.coords[i] = {2 * (i / 3) + 1, 2 * (i % 3) + 1};
    }
    const SurfaceCodeLayout::Coord x_anc[4] = {{2, 0}, {2, 4}, {4, 2}, {4, 6}};
    const SurfaceCodeLayout::Coord z_anc[4] = {{0, 4}, {2, 2}, {4, 4}, {6, 2}};
    for (int k = 0; k < 4; k++) {
        layout.coords[SurfaceCodeLayout::x_ancilla(k)] = x_anc[k];
        layout.coords[SurfaceCodeLayout::z_ancilla(k)] = z_anc[k];
    }

    auto data_at = [](int x, int y) {
        if (x < 1 || x > 5 || y < 1 || y > 5) {
            return SurfaceCodeLayout::kNone;
        }
        return ((x - 1) / 2) * 3 + (y - 1) / 2;
    };
    for (int k = 0; k < 4; k++) {
        for (int layer = 0; layer < 4; layer++) {
            layout.x_checks[k][layer] =
                data_at(x_anc[k].x + kXCheckOrder[layer][0], x_anc[k].y + kXCheckOrder[layer][1]);
            layout.z_checks[k][layer] =
                data_at(z_anc[k].x + kZCheckOrder[layer][0], z_anc[k].y + kZCheckOrder[layer][1]);
        }
    }
    layout.logical_x = {data_at(1, 1), data_at(1, 3), data_at(1, 5)};
    layout.logical_z = {data_at(1, 1), data_at(3, 1), data_at(5, 1)};
    return layout;
}

std::uint32_t support_of(const std::array<int, 4> &partners) {
    std::uint32_t mask = 0;
    for (int q : partners) {
        if (q != SurfaceCodeLayout::kNone) {
            mask |= 1u << q;
        }
    }
    return mask;
}

}  // namespace

std::uint32_t SurfaceCodeLayout::x_check_support(int k) const {
    return support_of(x_checks[k]);
}

std::uint32_t SurfaceCodeLayout::z_check_support(int k) const {
    return support_of(z_checks[k]);
}

std::uint32_t SurfaceCodeLayout::logical_x_support() const {
    std::uint32_t mask = 0;
    for (int q : logical_x) {
        mask |= 1u << q;
    }
    return mask;
}

const SurfaceCodeLayout &surface17() {
    static const SurfaceCodeLayout layout = make_layout();
    return layout;
}

std::size_t CircuitSpec::ancilla_measurements() const {
    std::size_t n = 0;
    for (const auto &ins : instructions) {
        n += ins.op == Op::MeasureZ;
    }
    return n;
}

int CircuitSpec::outcome_count(Channel channel) {
    switch (channel) {
        case Channel::Depolarize1:
            return 3;
        case Channel::Depolarize2:
            return 15;
        case Channel::FlipPrep:
        case Channel::FlipMeas:
            return 1;
        case Channel::None:
            break;
    }
    return 0;
}

void CircuitSpec::validate() const {
    if (rounds < 1) {
        throw std::invalid_argument("circuit must have at least one round");
    }
    std::size_t measure_z = 0;
    for (const auto &ins : instructions) {
        if (ins.q0 >= qubit_count) {
            throw std::invalid_argument("instruction references qubit " + std::to_string(ins.q0));
        }
        if (ins.op == Op::CNOT && (ins.q1 >= qubit_count || ins.q0 == ins.q1)) {
            throw std::invalid_argument("CNOT needs two distinct in-range qubits");
        }
        if (!(ins.probability >= 0.0 && ins.probability <= 1.0)) {
            throw std::invalid_argument("noise probability outside [0, 1]");
        }
        measure_z += ins.op == Op::MeasureZ;
    }
    if (measure_z != static_cast<std::size_t>(rounds) * 2 * SurfaceCodeLayout::kChecksPerType) {
        throw std::invalid_argument("each round must measure exactly 8 ancillas");
    }
}

CircuitSpec build_memory_x_circuit(int rounds, NoiseParams noise) {
    if (rounds < 1) {
        throw std::invalid_argument("rounds must be >= 1, got " + std::to_string(rounds));
    }
    if (!(noise.p >= 0.0 && noise.p <= 1.0)) {
        throw std::invalid_argument("physical fault rate must lie in [0, 1]");
    }
    const auto &layout = surface17();
    const double p = noise.p;
    const double flip = 2.0 * p / 3.0;

    CircuitSpec c;
    c.rounds = rounds;
    c.p = p;
    auto &out = c.instructions;
    auto emit = [&](Op op, int q0, int q1, Channel ch, double prob) {
        out.push_back({op, static_cast<std::uint8_t>(q0), static_cast<std::uint8_t>(q1), ch, prob});
    };
    auto reset_ancillas = [&]() {
        for (int k = 0; k < 4; k++) {
            emit(Op::ResetZ, SurfaceCodeLayout::x_ancilla(k), 0, Channel::FlipPrep, flip);
        }
        for (int k = 0; k < 4; k++) {
            emit(Op::ResetZ, SurfaceCodeLayout::z_ancilla(k), 0, Channel::FlipPrep, flip);
        }
    };

    for (int q = 0; q < SurfaceCodeLayout::kDataQubits; q++) {
        emit(Op::ResetX, q, 0, Channel::FlipPrep, flip);
    }
    reset_ancillas();

    for (int r = 0; r < rounds; r++) {
        for (int q = 0; q < SurfaceCodeLayout::kDataQubits; q++) {
            emit(Op::Idle, q, 0, Channel::Depolarize1, p);
        }
        for (int k = 0; k < 4; k++) {
            emit(Op::H, SurfaceCodeLayout::x_ancilla(k), 0, Channel::Depolarize1, p);
        }
        for (int layer = 0; layer < 4; layer++) {
            for (int k = 0; k < 4; k++) {
                int d = layout.x_checks[k][layer];
                if (d != SurfaceCodeLayout::kNone) {
                    emit(Op::CNOT, SurfaceCodeLayout::x_ancilla(k), d, Channel::Depolarize2, p);
                }
            }
            for (int k = 0; k < 4; k++) {
                int d = layout.z_checks[k][layer];
                if (d != SurfaceCodeLayout::kNone) {
                    emit(Op::CNOT, d, SurfaceCodeLayout::z_ancilla(k), Channel::Depolarize2, p);
                }
            }
        }
        for (int k = 0; k < 4; k++) {
            emit(Op::H, SurfaceCodeLayout::x_ancilla(k), 0, Channel::Depolarize1, p);
        }
        for (int k = 0; k < 4; k++) {
            emit(Op::MeasureZ, SurfaceCodeLayout::x_ancilla(k), 0, Channel::FlipMeas, flip);
        }
        for (int k = 0; k < 4; k++) {
            emit(Op::MeasureZ, SurfaceCodeLayout::z_ancilla(k), 0, Channel::FlipMeas, flip);
        }
        if (r + 1 < rounds) {
            reset_ancillas();
        }
    }

    for (int q = 0; q < SurfaceCodeLayout::kDataQubits; q++) {
        emit(Op::MeasureX, q, 0, Channel::FlipMeas, flip);
    }
    return c;
}

}  // namespace memdec
