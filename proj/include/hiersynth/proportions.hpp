#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "hiersynth/gate_set.hpp"
#include "hiersynth/synthesizer.hpp"

namespace hiersynth {

// Inputs of the combinatorial gate-proportion model: rotation layers 3..max_order
// with per-layer costs, per-layer gate counts (0 entries or an empty vector mean
// the built-in layer sizes 2^(l-2)), and the sequence cost budget.
struct ProportionParams {
    int max_order = 3;
    std::vector<double> costs;              // index 0 is layer 3
    std::vector<std::uint64_t> set_sizes;   // same layout; empty selects defaults
    double max_cost = 0.0;
};

struct ProportionResult {
    std::map<int, double> p;        // layer -> proportion, sums to 1
    double log_total_configs = 0.0; // log of the config count incl. the empty one
};

// log of Gamma(k) = (sum k)! * prod(sizes[l]^k[l] / k[l]!), the number of
// distinct sequences realizing layer counts k.
double log_config_count(const std::vector<std::uint64_t>& counts,
                        const std::vector<std::uint64_t>& set_sizes);

// Layer sizes after applying defaults; length max_order - 2.
std::vector<std::uint64_t> resolved_set_sizes(const ProportionParams& params);

// Visits every count vector k with dot(costs, k) <= max_cost exactly once, in
// lexicographic order starting from the all-zero vector.
void for_each_admissible(const ProportionParams& params,
                         const std::function<void(const std::vector<std::uint64_t>&)>& visit);

std::vector<std::vector<std::uint64_t>> enumerate_admissible(const ProportionParams& params);

// Model proportions p_n of layer-n gates over all admissible sequences,
// evaluated in log space. Throws DegenerateError when the budget admits only
// the empty sequence.
ProportionResult proportions(const ProportionParams& params);

// Observed layer proportions across synthesized sequences; Cliffords are not
// counted. Throws DegenerateError when no rotation gate appears at all.
std::map<int, double> empirical_proportions(const GateSet& gates,
                                            const std::vector<SynthesisResult>& results);

}  // namespace hiersynth
