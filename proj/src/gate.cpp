#include "hiersynth/gate.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "hiersynth/errors.hpp"

namespace hiersynth {

GateElement canonicalize(GateElement g) {
    double n = std::sqrt(g.w * g.w + g.x * g.x + g.y * g.y + g.z * g.z);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw DomainError("gate element has zero or non-finite norm");
    }
    g.w /= n;
    g.x /= n;
    g.y /= n;
    g.z /= n;
    const double* comps[4] = {&g.w, &g.x, &g.y, &g.z};
    for (const double* c : comps) {
        if (std::abs(*c) > kSignEps) {
            if (*c < 0.0) {
                g.w = -g.w;
                g.x = -g.x;
                g.y = -g.y;
                g.z = -g.z;
            }
            break;
        }
    }
    return g;
}

GateElement compose(const GateElement& a, const GateElement& b) {
    GateElement r;
    r.w = a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z;
    r.x = a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y;
    r.y = a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x;
    r.z = a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w;
    return canonicalize(r);
}

GateElement adjoint(const GateElement& g) {
    return canonicalize({g.w, -g.x, -g.y, -g.z});
}

GateElement identity_gate() { return {1.0, 0.0, 0.0, 0.0}; }

GateElement rz(double theta) {
    return canonicalize({std::cos(theta / 2), 0.0, 0.0, std::sin(theta / 2)});
}

GateElement gate_h() {
    const double s = 1.0 / std::sqrt(2.0);
    return {0.0, s, 0.0, s};
}

GateElement gate_s() { return rz(kPi / 2); }
GateElement gate_x() { return {0.0, 1.0, 0.0, 0.0}; }
GateElement gate_y() { return {0.0, 0.0, 1.0, 0.0}; }
GateElement gate_z() { return {0.0, 0.0, 0.0, 1.0}; }
GateElement gate_t() { return rz(kPi / 4); }

double trace_distance(const GateElement& a, const GateElement& b) {
    double dot = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
    double v = 1.0 - std::abs(dot);
    return std::sqrt(v > 0.0 ? v : 0.0);
}

PauliVector to_pauli_vector(const GateElement& g) {
    double r = std::sqrt(g.x * g.x + g.y * g.y + g.z * g.z);
    if (r == 0.0) {
        return {0.0, 0.0, 0.0};
    }
    // Canonical sign makes w >= 0 unless |w| <= kSignEps; treat that band as
    // the boundary sphere so the norm never exceeds pi/2.
    double half = std::abs(g.w) <= kSignEps ? kPi / 2 : std::atan2(r, g.w);
    double f = half / r;
    return {g.x * f, g.y * f, g.z * f};
}

GateElement from_pauli_vector(const PauliVector& v) {
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (n > kPi / 2 + 1e-9) {
        throw DomainError("pauli vector norm exceeds pi/2");
    }
    if (n == 0.0) {
        return identity_gate();
    }
    // sin(n)/n, series for small n to avoid 0/0
    double s = n < 1e-8 ? 1.0 - n * n / 6.0 : std::sin(n) / n;
    return canonicalize({std::cos(n), v[0] * s, v[1] * s, v[2] * s});
}

namespace {

// Parses "<radians>": a plain number or a pi multiple such as "pi", "-pi/2",
// "3pi/8", "0.5*pi".
double parse_angle(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s += c;
        }
    }
    if (s.empty()) {
        throw DomainError("empty angle");
    }
    double sign = 1.0;
    size_t pos = 0;
    if (s[0] == '+' || s[0] == '-') {
        sign = s[0] == '-' ? -1.0 : 1.0;
        pos = 1;
    }
    size_t pi_at = s.find("pi", pos);
    const char* begin = s.c_str() + pos;
    char* end = nullptr;
    if (pi_at == std::string::npos) {
        double val = std::strtod(begin, &end);
        if (end == begin || *end != '\0') {
            throw DomainError("bad angle literal: " + text);
        }
        return sign * val;
    }
    double factor = 1.0;
    if (pi_at > pos) {
        factor = std::strtod(begin, &end);
        if (end != s.c_str() + pi_at && !(*end == '*' && end + 1 == s.c_str() + pi_at)) {
            throw DomainError("bad angle literal: " + text);
        }
    }
    double div = 1.0;
    size_t after = pi_at + 2;
    if (after < s.size()) {
        if (s[after] != '/' && s[after] != '*') {
            throw DomainError("bad angle literal: " + text);
        }
        const char* dbegin = s.c_str() + after + 1;
        double val = std::strtod(dbegin, &end);
        if (end == dbegin || *end != '\0') {
            throw DomainError("bad angle literal: " + text);
        }
        div = s[after] == '/' ? 1.0 / val : val;
        if (!std::isfinite(div)) {
            throw DomainError("bad angle literal: " + text);
        }
    }
    return sign * factor * kPi * div;
}

// Extracts the parenthesized argument starting at s[pos] == '('.
std::string paren_arg(const std::string& s, size_t& pos) {
    size_t close = s.find(')', pos);
    if (close == std::string::npos) {
        throw DomainError("missing ')' in gate literal: " + s);
    }
    std::string arg = s.substr(pos + 1, close - pos - 1);
    pos = close + 1;
    return arg;
}

}  // namespace

GateElement parse_gate(const std::string& text) {
    GateElement acc = identity_gate();
    size_t pos = 0;
    bool any = false;
    auto starts = [&](const char* tok) {
        return text.compare(pos, std::string::traits_type::length(tok), tok) == 0;
    };
    while (pos < text.size()) {
        char c = text[pos];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '*') {
            ++pos;
            continue;
        }
        GateElement atom;
        if (starts("Rz(") || starts("rz(")) {
            pos += 2;
            atom = rz(parse_angle(paren_arg(text, pos)));
        } else if (starts("U(") || starts("u(")) {
            pos += 1;
            std::string arg = paren_arg(text, pos);
            double comp[4];
            size_t start = 0;
            for (int i = 0; i < 4; ++i) {
                size_t comma = i < 3 ? arg.find(',', start) : arg.size();
                if (comma == std::string::npos) {
                    throw DomainError("U(...) needs four components: " + text);
                }
                std::string piece = arg.substr(start, comma - start);
                comp[i] = parse_angle(piece);  // reuses number/pi parsing
                start = comma + 1;
            }
            atom = canonicalize({comp[0], comp[1], comp[2], comp[3]});
        } else if (starts("Tdg")) {
            pos += 3;
            atom = rz(-kPi / 4);
        } else if (starts("Sdg")) {
            pos += 3;
            atom = rz(-kPi / 2);
        } else {
            switch (c) {
                case 'H': atom = gate_h(); break;
                case 'S': atom = gate_s(); break;
                case 'X': atom = gate_x(); break;
                case 'Y': atom = gate_y(); break;
                case 'Z': atom = gate_z(); break;
                case 'T': atom = gate_t(); break;
                case 'I': atom = identity_gate(); break;
                default:
                    throw DomainError("unrecognized gate literal: " + text);
            }
            ++pos;
        }
        acc = any ? compose(acc, atom) : atom;
        any = true;
    }
    if (!any) {
        throw DomainError("empty gate literal");
    }
    return acc;
}

std::string format_gate(const GateElement& g) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "U(%.12g,%.12g,%.12g,%.12g)", g.w, g.x, g.y, g.z);
    return buf;
}

}  // namespace hiersynth
