#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace hiersynth {

// A single-qubit gate up to global phase, stored as a unit quaternion
// (w, x, y, z) ~ U = w*I - i*(x*X + y*Y + z*Z).  Quaternion multiplication
// then matches matrix multiplication, and q and -q describe the same gate,
// so every element is kept in a canonical sign: the first component whose
// magnitude exceeds 1e-9 is non-negative.
struct GateElement {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const GateElement&) const = default;
};

// Rotation-axis representation: a point in the closed ball of radius pi/2,
// with U = exp(-i (v1*X + v2*Y + v3*Z)).  Antipodal boundary points describe
// the same gate.
using PauliVector = std::array<double, 3>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSignEps = 1e-9;

// Normalizes to unit length and applies the canonical sign rule.
GateElement canonicalize(GateElement g);

// Matrix product a*b (a applied after b), canonicalized.
GateElement compose(const GateElement& a, const GateElement& b);

// Inverse element (conjugate quaternion), canonicalized.
GateElement adjoint(const GateElement& g);

GateElement identity_gate();

// exp(-i*theta*Z/2) up to phase.
GateElement rz(double theta);

// Named gates as hierarchy/Clifford elements.
GateElement gate_h();
GateElement gate_s();
GateElement gate_x();
GateElement gate_y();
GateElement gate_z();
GateElement gate_t();

// dist(S, G) = sqrt((2 - |tr(S^dag G)|) / 2), a metric on the phase-free
// gates; |tr| comes from the 4-d dot product of the two quaternions.
double trace_distance(const GateElement& a, const GateElement& b);

// Writes g = cos(theta/2)*I - i*sin(theta/2)*(n.sigma) with theta in [0, pi]
// and returns (theta/2)*n.  Inverse of from_pauli_vector away from the
// boundary sphere, where v and -v coincide.  from_pauli_vector requires
// |v| <= pi/2 (plus round-off slack) and throws DomainError outside the ball.
PauliVector to_pauli_vector(const GateElement& g);
GateElement from_pauli_vector(const PauliVector& v);

// Parses a gate literal: "H", "S", "X", "Y", "Z", "T", "Tdg", "Sdg",
// "Rz(<radians>)" (plain numbers or k*pi/m forms like "Rz(-3pi/8)"),
// "U(w,x,y,z)" (any nonzero quaternion, normalized), or a product of such
// atoms like "HSSH".  Throws DomainError on anything else.
GateElement parse_gate(const std::string& text);

// Compact display form, e.g. "U(0.92388,0,0,0.382683)".
std::string format_gate(const GateElement& g);

}  // namespace hiersynth
