#include "hiersynth/cost_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hiersynth/crc64.hpp"
#include "hiersynth/errors.hpp"

namespace hiersynth {

double catalyst_direct_cost(int l) {
    if (l < 3) {
        throw DomainError("rotation costs are defined for orders >= 3");
    }
    return 4.0 - 3.0 * std::exp2(3 - l);
}

double catalyst_magic_cost(int l) {
    if (l < 3) {
        throw DomainError("rotation costs are defined for orders >= 3");
    }
    return 1.0 + 2.0 * (l - 3);
}

namespace {

constexpr double kMus[4] = {1e-5, 1e-10, 1e-15, 1e-20};
constexpr double kDistillation[5][4] = {
    {5.1, 36.2, 70.4, 120.1},     // l = 3
    {16.7, 103.1, 186.5, 358.7},  // l = 4
    {34.8, 172.7, 333.2, 635.8},  // l = 5
    {49.0, 255.8, 486.1, 962.2},  // l = 6
    {64.7, 344.8, 671.5, 1351.2}, // l = 7
};

int mu_index(double mu) {
    for (int i = 0; i < 4; ++i) {
        if (std::abs(mu - kMus[i]) <= kMus[i] * 1e-9) {
            return i;
        }
    }
    throw DomainError("no distillation data for this infidelity");
}

}  // namespace

double distillation_cost(int l, double mu) {
    int col = mu_index(mu);
    if (l < 3 || l > 7) {
        throw DomainError("distillation costs are tabulated for orders 3..7");
    }
    return kDistillation[l - 3][col];
}

CostModel CostModel::catalyst_direct(int max_order) {
    CostModel m;
    m.kind = CostModelKind::CatalystDirect;
    for (int l = 3; l <= max_order; ++l) {
        m.table[l] = catalyst_direct_cost(l);
    }
    return m;
}

CostModel CostModel::catalyst_magic(int max_order) {
    CostModel m;
    m.kind = CostModelKind::CatalystMagic;
    for (int l = 3; l <= max_order; ++l) {
        m.table[l] = catalyst_magic_cost(l);
    }
    return m;
}

CostModel CostModel::distillation(double mu, int max_order) {
    CostModel m;
    m.kind = CostModelKind::Distillation;
    m.mu = kMus[mu_index(mu)];
    for (int l = 3; l <= max_order; ++l) {
        m.table[l] = distillation_cost(l, m.mu);
    }
    return m;
}

CostModel CostModel::custom(std::map<int, double> table) {
    CostModel m;
    m.kind = CostModelKind::Custom;
    if (table.empty()) {
        throw DomainError("custom cost table must name at least one order");
    }
    for (const auto& [l, c] : table) {
        if (l < 3) {
            throw DomainError("custom cost table keys must be orders >= 3");
        }
        if (!(c >= 0.0) || !std::isfinite(c)) {
            throw DomainError("custom cost table values must be finite and >= 0");
        }
    }
    m.table = std::move(table);
    return m;
}

double CostModel::order_cost(int l) const {
    auto it = table.find(l);
    if (it == table.end()) {
        throw DomainError("order " + std::to_string(l) + " not covered by cost model");
    }
    return it->second;
}

double CostModel::gate_cost(const BaseGate& g) const {
    return g.order <= 2 ? 0.0 : order_cost(g.order);
}

double CostModel::cheapest_rotation_cost() const {
    if (table.empty()) {
        throw DomainError("cost model has an empty rotation table");
    }
    double best = table.begin()->second;
    for (const auto& [l, c] : table) {
        best = std::min(best, c);
    }
    return best;
}

std::uint64_t CostModel::fingerprint() const {
    Crc64 crc;
    crc.update_value(static_cast<int>(kind));
    crc.update_value(mu);
    crc.update_value(static_cast<std::uint64_t>(table.size()));
    for (const auto& [l, c] : table) {
        crc.update_value(l);
        crc.update_value(c);
    }
    return crc.value();
}

namespace {

const char* kind_name(CostModelKind k) {
    switch (k) {
        case CostModelKind::CatalystDirect: return "catalyst-direct";
        case CostModelKind::CatalystMagic: return "catalyst-magic";
        case CostModelKind::Distillation: return "distillation";
        case CostModelKind::Custom: return "custom";
    }
    throw DomainError("unknown cost model kind");
}

CostModelKind kind_from_name(const std::string& name) {
    for (CostModelKind k : {CostModelKind::CatalystDirect, CostModelKind::CatalystMagic,
                            CostModelKind::Distillation, CostModelKind::Custom}) {
        if (name == kind_name(k)) {
            return k;
        }
    }
    throw FormatError("unknown cost model kind: " + name);
}

}  // namespace

std::string CostModel::to_json() const {
    nlohmann::json j;
    j["kind"] = kind_name(kind);
    if (kind == CostModelKind::Distillation) {
        j["mu"] = mu;
    }
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [l, c] : table) {
        t[std::to_string(l)] = c;
    }
    j["table"] = t;
    return j.dump(2);
}

CostModel CostModel::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad cost model JSON: ") + e.what());
    }
    CostModel m;
    try {
        m.kind = kind_from_name(j.at("kind").get<std::string>());
        m.mu = j.value("mu", 0.0);
        for (const auto& [key, val] : j.at("table").items()) {
            int l = std::stoi(key);
            if (l < 3) {
                throw FormatError("bad cost model JSON: table keys must be >= 3");
            }
            m.table[l] = val.get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad cost model JSON: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw FormatError("bad cost model JSON: non-integer table key");
    }
    return m;
}

CostModel CostModel::parse_flag(const std::string& flag, int max_order) {
    if (flag == "catalyst-direct") {
        return catalyst_direct(max_order);
    }
    if (flag == "catalyst-magic") {
        return catalyst_magic(max_order);
    }
    if (flag.rfind("distillation:", 0) == 0) {
        double mu = std::strtod(flag.c_str() + 13, nullptr);
        return distillation(mu, max_order);
    }
    if (flag.rfind("custom:", 0) == 0) {
        std::string path = flag.substr(7);
        std::ifstream in(path);
        if (!in) {
            throw IoError("cannot read cost model file: " + path);
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        return from_json(buf.str());
    }
    throw DomainError("unrecognized cost model flag: " + flag);
}

}  // namespace hiersynth
