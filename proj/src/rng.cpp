#include "hiersynth/rng.hpp"

#include <cmath>

namespace hiersynth {

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] so the log stays finite
    double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

GateElement haar_random_gate(Rng& rng) {
    while (true) {
        GateElement g;
        g.w = rng.gaussian();
        g.x = rng.gaussian();
        g.y = rng.gaussian();
        g.z = rng.gaussian();
        double n2 = g.w * g.w + g.x * g.x + g.y * g.y + g.z * g.z;
        if (n2 > 1e-12) {  // astronomically rare reject, keeps normalize safe
            return canonicalize(g);
        }
    }
}

}  // namespace hiersynth
