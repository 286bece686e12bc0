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

#include "memdec/frame_simulator.h"

#include <algorithm>
#include <utility>

namespace memdec {

namespace {

struct Frame {
    std::uint32_t x = 0;
    std::uint32_t z = 0;

    void apply(int q, std::uint8_t pauli) {
        x ^= static_cast<std::uint32_t>(pauli & 1) << q;
        z ^= static_cast<std::uint32_t>((pauli >> 1) & 1) << q;
    }
    void clear(int q) {
        x &= ~(1u << q);
        z &= ~(1u << q);
    }
};

// `noise(index, instruction)` returns the channel outcome: 0 for no fault.
template <typename NoiseFn>
ShotRecord run(const CircuitSpec &circuit, NoiseFn &&noise) {
    ShotRecord rec;
    rec.ancilla_bits.assign(circuit.rounds, 0);
    Frame f;
    int round = 0;
    int slot = 0;
    const auto &ins_list = circuit.instructions;
    for (std::size_t i = 0; i < ins_list.size(); i++) {
        const Instruction &ins = ins_list[i];
        const int q = ins.q0;
        switch (ins.op) {
            case Op::ResetZ:
                f.clear(q);
                if (noise(i, ins)) {
                    f.x ^= 1u << q;
                }
                break;
            case Op::ResetX:
                f.clear(q);
                if (noise(i, ins)) {
                    f.z ^= 1u << q;
                }
                break;
            case Op::H: {
                std::uint32_t bx = (f.x >> q) & 1;
                std::uint32_t bz = (f.z >> q) & 1;
                f.clear(q);
                f.x |= bz << q;
                f.z |= bx << q;
                f.apply(q, noise(i, ins));
                break;
            }
            case Op::CNOT: {
                const int t = ins.q1;
                f.x ^= ((f.x >> q) & 1) << t;
                f.z ^= ((f.z >> t) & 1) << q;
                std::uint8_t pauli = noise(i, ins);
                f.apply(q, pauli & 3);
                f.apply(t, pauli >> 2);
                break;
            }
            case Op::Idle:
                f.apply(q, noise(i, ins));
                break;
            case Op::MeasureZ: {
                std::uint8_t bit = ((f.x >> q) & 1) ^ (noise(i, ins) & 1);
                rec.ancilla_bits[round] |= static_cast<std::uint8_t>(bit << slot);
                if (++slot == 2 * SurfaceCodeLayout::kChecksPerType) {
                    slot = 0;
                    round++;
                }
                break;
            }
            case Op::MeasureX: {
                std::uint16_t bit = ((f.z >> q) & 1) ^ (noise(i, ins) & 1);
                rec.data_bits |= static_cast<std::uint16_t>(bit << q);
                break;
            }
        }
    }
    return rec;
}

}  // namespace

ShotRecord sample_shot(const CircuitSpec &circuit, Rng &rng) {
    return run(circuit, [&rng](std::size_t, const Instruction &ins) -> std::uint8_t {
        if (ins.channel == Channel::None || ins.probability <= 0.0 || !rng.bernoulli(ins.probability)) {
            return 0;
        }
        switch (ins.channel) {
            case Channel::Depolarize1:
                return static_cast<std::uint8_t>(1 + rng.below(3));
            case Channel::Depolarize2:
                return static_cast<std::uint8_t>(1 + rng.below(15));
            default:
                return 1;
        }
    });
}

ShotRecord simulate_with_faults(const CircuitSpec &circuit, std::span<const ForcedFault> faults) {
    return run(circuit, [faults](std::size_t index, const Instruction &) -> std::uint8_t {
        std::uint8_t pauli = 0;
        for (const auto &fault : faults) {
            if (fault.instruction == index) {
                pauli ^= fault.pauli;
            }
        }
        return pauli;
    });
}

}  // namespace memdec
