#include "hiersynth/gate_set.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <tuple>

#include "hiersynth/crc64.hpp"
#include "hiersynth/errors.hpp"

namespace hiersynth {

GateSetSpec GateSetSpec::set_k(int k) {
    if (k < 1 || k > 6) {
        throw DomainError("set index must lie in 1..6");
    }
    return {k + 2};
}

GateSetSpec GateSetSpec::for_max_order(int l) {
    if (l < 3 || l > 8) {
        throw DomainError("max hierarchy order must lie in 3..8");
    }
    return {l};
}

namespace {

// Every component of a Clifford quaternion is 0, +-1/2, +-1/sqrt(2) or +-1.
// Snapping to those exact doubles removes composition round-off, which makes
// ordering, duplicate detection and fingerprints bit-stable.
double snap_component(double c) {
    static const double targets[] = {0.0, 0.5, 1.0 / 1.4142135623730951, 1.0};
    for (double t : targets) {
        if (std::abs(std::abs(c) - t) < 1e-9) {
            return c < 0.0 ? -t : t;
        }
    }
    throw DomainError("clifford closure produced an unexpected component");
}

GateElement snap(const GateElement& g) {
    return {snap_component(g.w), snap_component(g.x), snap_component(g.y),
            snap_component(g.z)};
}

using QuatKey = std::tuple<double, double, double, double>;

QuatKey key_of(const GateElement& g) { return {g.w, g.x, g.y, g.z}; }

}  // namespace

std::vector<BaseGate> clifford_group() {
    const GateElement h = gate_h();
    const GateElement s = gate_s();

    // Breadth-first closure of {H, S}; the first word reaching an element is
    // its label (shortest, ties broken H before S).
    std::map<QuatKey, std::string> words;
    std::deque<std::pair<GateElement, std::string>> queue;
    GateElement id = identity_gate();
    words[key_of(id)] = "";
    queue.emplace_back(id, "");
    while (!queue.empty()) {
        auto [g, word] = queue.front();
        queue.pop_front();
        for (auto [gen, letter] : {std::pair{h, 'H'}, std::pair{s, 'S'}}) {
            GateElement next = snap(compose(g, gen));
            std::string next_word = word + letter;
            if (words.emplace(key_of(next), next_word).second) {
                queue.emplace_back(next, next_word);
            }
        }
    }
    if (words.size() != 24) {
        throw DomainError("clifford closure did not have 24 elements");
    }

    const std::pair<GateElement, std::string> named[] = {
        {identity_gate(), "I"}, {gate_x(), "X"},          {gate_y(), "Y"},
        {gate_z(), "Z"},        {gate_h(), "H"},          {gate_s(), "S"},
        {rz(-kPi / 2), "Sdg"},
    };

    std::vector<BaseGate> result;
    for (const auto& [key, word] : words) {
        BaseGate g;
        g.element = {std::get<0>(key), std::get<1>(key), std::get<2>(key),
                     std::get<3>(key)};
        g.label = word;
        for (const auto& [elem, name] : named) {
            // Distinct Cliffords are >= 0.38 apart, but equal elements have a
            // sqrt(ulp) metric noise floor near 1e-8, so match well above it.
            if (trace_distance(g.element, elem) < 1e-7) {
                g.label = name;
                break;
            }
        }
        // After snapping, Paulis (and identity) are exactly the axis
        // quaternions; everything else in the closure is order 2.
        bool pauli_like = std::abs(g.element.w) == 1.0 || std::abs(g.element.x) == 1.0 ||
                          std::abs(g.element.y) == 1.0 || std::abs(g.element.z) == 1.0;
        g.order = pauli_like ? 1 : 2;
        result.push_back(std::move(g));
    }
    std::sort(result.begin(), result.end(), [](const BaseGate& a, const BaseGate& b) {
        return key_of(a.element) > key_of(b.element);
    });
    return result;
}

std::vector<BaseGate> hierarchy_rotations(int l) {
    if (l < 3 || l > 8) {
        throw DomainError("hierarchy rotations need order in 3..8");
    }
    std::vector<BaseGate> result;
    const std::int64_t half_count = std::int64_t{1} << (l - 3);  // positive k values
    const std::int64_t denom = std::int64_t{1} << (l - 1);
    for (std::int64_t k = -(2 * half_count - 1); k <= 2 * half_count - 1; k += 2) {
        BaseGate g;
        g.order = l;
        g.element = rz(kPi * static_cast<double>(k) / static_cast<double>(denom));
        if (l == 3) {
            g.label = k == 1 ? "T" : "Tdg";
        } else {
            std::string num = std::to_string(std::abs(k));
            g.label = std::string("Rz(") + (k < 0 ? "-" : "") +
                      (std::abs(k) == 1 ? "" : num) + "pi/" + std::to_string(denom) +
                      ")";
        }
        result.push_back(std::move(g));
    }
    return result;
}

GateSet build_gate_set(const GateSetSpec& spec) {
    if (spec.max_order < 3) {
        throw DomainError("gate set needs max hierarchy order >= 3");
    }
    GateSet set;
    set.spec = spec;
    set.gates = clifford_group();
    for (int l = 3; l <= spec.max_order; ++l) {
        auto layer = hierarchy_rotations(l);
        set.gates.insert(set.gates.end(), layer.begin(), layer.end());
    }
    Crc64 crc;
    crc.update_value(spec.max_order);
    crc.update_value(static_cast<std::uint64_t>(set.gates.size()));
    for (std::size_t i = 0; i < set.gates.size(); ++i) {
        BaseGate& g = set.gates[i];
        g.id = static_cast<std::uint16_t>(i);
        crc.update_value(g.order);
        crc.update(g.label.data(), g.label.size());
        crc.update_value(g.element);
    }
    set.fingerprint = crc.value();
    return set;
}

}  // namespace hiersynth
