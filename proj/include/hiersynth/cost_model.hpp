#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "hiersynth/gate_set.hpp"

namespace hiersynth {

// Cost of one R_z rotation of hierarchy order l under the catalysis protocol,
// counting T states directly: 4 - 3*2^(3-l).  Equivalently c(3) = 1,
// c(l) = (4 + c(l-1)) / 2.
double catalyst_direct_cost(int l);

// Same protocol, counting prepared magic states: 1 + 2*(l-3), i.e. c(3) = 1,
// c(l) = 2 + c(l-1).
double catalyst_magic_cost(int l);

// Distillation-based preparation cost for a target infidelity mu.  Tabulated
// for l = 3..7 and mu in {1e-5, 1e-10, 1e-15, 1e-20}; anything else throws.
double distillation_cost(int l, double mu);

enum class CostModelKind { CatalystDirect, CatalystMagic, Distillation, Custom };

// Assigns a cost to every base gate: Cliffords are free, rotations of order l
// cost table[l].  The table is materialized at construction so lookups never
// depend on which formula produced them.
struct CostModel {
    CostModelKind kind = CostModelKind::CatalystDirect;
    double mu = 0.0;                // only meaningful for distillation
    std::map<int, double> table;    // order -> cost, orders >= 3

    static CostModel catalyst_direct(int max_order);
    static CostModel catalyst_magic(int max_order);
    static CostModel distillation(double mu, int max_order);
    static CostModel custom(std::map<int, double> table);

    double order_cost(int l) const;
    double gate_cost(const BaseGate& g) const;
    // Smallest rotation cost in the table; the natural growth increment.
    double cheapest_rotation_cost() const;

    std::uint64_t fingerprint() const;

    std::string to_json() const;
    static CostModel from_json(const std::string& text);

    // CLI forms: "catalyst-direct", "catalyst-magic", "distillation:<mu>",
    // "custom:<json-path>".  max_order bounds the table for the named models.
    static CostModel parse_flag(const std::string& flag, int max_order);

    bool operator==(const CostModel&) const = default;
};

}  // namespace hiersynth
