#pragma once

#include <cstdint>
#include <random>

#include "hiersynth/gate.hpp"

namespace hiersynth {

// Deterministic random source.  mt19937_64 itself is fully specified by the
// standard, but the std distributions are not, so uniform and gaussian
// variates are derived here explicitly to keep streams identical across
// platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; generates pairs and caches one.
    double gaussian();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Gate drawn from the phase-free Haar distribution: four independent
// gaussians normalized to the unit 3-sphere, then sign-canonicalized.
GateElement haar_random_gate(Rng& rng);

}  // namespace hiersynth
