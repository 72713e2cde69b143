#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hiersynth/gate.hpp"

namespace hiersynth {

// One gate of the instruction set.  `order` is the lowest hierarchy level the
// gate belongs to: 1 for Paulis (and identity), 2 for the remaining
// Cliffords, l >= 3 for the diagonal rotations R_z(pi*k/2^(l-1)) with k odd.
struct BaseGate {
    std::uint16_t id = 0;
    std::string label;
    GateElement element;
    int order = 1;
};

// Which instruction set to build.  Level L includes the 24 Cliffords plus
// every rotation layer T_3 .. T_L; the conventional ladder "set K" for
// K = 1..5 corresponds to L = K + 2.
struct GateSetSpec {
    int max_order = 3;

    static GateSetSpec set_k(int k);
    static GateSetSpec for_max_order(int l);

    bool operator==(const GateSetSpec&) const = default;
};

struct GateSet {
    GateSetSpec spec;
    std::vector<BaseGate> gates;
    std::uint64_t fingerprint = 0;

    std::size_t size() const { return gates.size(); }
    const BaseGate& operator[](std::size_t i) const { return gates[i]; }
    static bool is_clifford(const BaseGate& g) { return g.order <= 2; }
};

// The 24 phase-free Cliffords: closure of {H, S} under composition, with
// components snapped to their exact values, sorted by canonical quaternion
// (descending, so identity comes first).  Labels are the shortest H/S word,
// with conventional names (I, X, Y, Z, H, S, Sdg) where they apply.
std::vector<BaseGate> clifford_group();

// The 2^(l-2) rotations R_z(pi*k/2^(l-1)) for odd k, |k| < 2^(l-2), in
// ascending k.  Requires l >= 3.
std::vector<BaseGate> hierarchy_rotations(int l);

// Cliffords first, then rotation layers in ascending order; ids are assigned
// by position.  Sizes: L=3 -> 26, L=4 -> 30, ..., L=7 -> 86.
GateSet build_gate_set(const GateSetSpec& spec);

}  // namespace hiersynth
