#include "hiersynth/proportions.hpp"

#include <cmath>
#include <limits>

#include "hiersynth/errors.hpp"

namespace hiersynth {

namespace {

constexpr double kFloorSlack = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming log-sum-exp: keeps the running maximum and the sum of shifted
// exponentials so arbitrarily long streams stay stable.
class LogSum {
public:
    void add(double log_term) {
        if (log_term == kNegInf) {
            return;
        }
        if (empty_) {
            max_ = log_term;
            sum_ = 1.0;
            empty_ = false;
        } else if (log_term <= max_) {
            sum_ += std::exp(log_term - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
            max_ = log_term;
        }
    }

    bool empty() const { return empty_; }

    double value() const { return empty_ ? kNegInf : max_ + std::log(sum_); }

private:
    bool empty_ = true;
    double max_ = 0.0;
    double sum_ = 0.0;
};

void validate(const ProportionParams& params) {
    if (params.max_order < 3) {
        throw DomainError("proportion model needs max_order >= 3");
    }
    std::size_t layers = static_cast<std::size_t>(params.max_order - 2);
    if (params.costs.size() != layers) {
        throw DomainError("expected one cost per layer 3.." +
                          std::to_string(params.max_order));
    }
    for (double c : params.costs) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw DomainError("layer costs must be positive and finite");
        }
    }
    if (!params.set_sizes.empty() && params.set_sizes.size() != layers) {
        throw DomainError("set_sizes must be empty or match the layer count");
    }
    if (!(params.max_cost >= 0.0)) {
        throw DomainError("max_cost must be >= 0");
    }
}

std::uint64_t budget_floor(double remaining, double cost) {
    if (remaining < 0.0) {
        return 0;
    }
    // the slack keeps exact-ratio budgets (e.g. C a multiple of the cost)
    // from landing one lattice step short of their intended bound
    return static_cast<std::uint64_t>(std::floor(remaining / cost + kFloorSlack));
}

}  // namespace

double log_config_count(const std::vector<std::uint64_t>& counts,
                        const std::vector<std::uint64_t>& set_sizes) {
    if (counts.size() != set_sizes.size()) {
        throw DomainError("counts and set_sizes must align");
    }
    std::uint64_t total = 0;
    double acc = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        total += counts[i];
        acc += static_cast<double>(counts[i]) *
                   std::log(static_cast<double>(set_sizes[i])) -
               std::lgamma(1.0 + static_cast<double>(counts[i]));
    }
    return std::lgamma(1.0 + static_cast<double>(total)) + acc;
}

std::vector<std::uint64_t> resolved_set_sizes(const ProportionParams& params) {
    validate(params);
    std::size_t layers = static_cast<std::size_t>(params.max_order - 2);
    std::vector<std::uint64_t> sizes(layers);
    for (std::size_t i = 0; i < layers; ++i) {
        std::uint64_t fallback = 1ull << (i + 1);  // layer l = i + 3 has 2^(l-2)
        sizes[i] = params.set_sizes.empty() || params.set_sizes[i] == 0
                       ? fallback
                       : params.set_sizes[i];
    }
    return sizes;
}

void for_each_admissible(const ProportionParams& params,
                         const std::function<void(const std::vector<std::uint64_t>&)>& visit) {
    validate(params);
    std::size_t layers = static_cast<std::size_t>(params.max_order - 2);
    std::vector<std::uint64_t> k(layers, 0);
    std::vector<double> spent(layers + 1, 0.0);  // cost consumed by k[0..i)

    // odometer over the nested loops: level i ranges over
    // 0..floor((C - spent[i]) / costs[i])
    std::size_t level = 0;
    while (true) {
        if (level == layers) {
            visit(k);
            // step the innermost wheel; carry on exhaustion
            while (level > 0) {
                --level;
                double next_spent = spent[level] +
                                    static_cast<double>(k[level] + 1) * params.costs[level];
                std::uint64_t cap = budget_floor(params.max_cost - spent[level],
                                                 params.costs[level]);
                if (k[level] < cap) {
                    ++k[level];
                    spent[level + 1] = next_spent;
                    ++level;
                    break;
                }
                k[level] = 0;
                spent[level + 1] = spent[level];
            }
            if (level == 0) {
                return;
            }
        }
        // descend: reset untouched levels to zero
        for (; level < layers; ++level) {
            k[level] = 0;
            spent[level + 1] = spent[level];
        }
    }
}

std::vector<std::vector<std::uint64_t>> enumerate_admissible(const ProportionParams& params) {
    std::vector<std::vector<std::uint64_t>> out;
    for_each_admissible(params, [&](const std::vector<std::uint64_t>& k) { out.push_back(k); });
    return out;
}

ProportionResult proportions(const ProportionParams& params) {
    std::vector<std::uint64_t> sizes = resolved_set_sizes(params);
    std::size_t layers = sizes.size();

    LogSum zeta;
    LogSum denominator;
    std::vector<LogSum> numerators(layers);
    for_each_admissible(params, [&](const std::vector<std::uint64_t>& k) {
        double log_gamma = log_config_count(k, sizes);
        zeta.add(log_gamma);
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < layers; ++i) {
            total += k[i];
            if (k[i] > 0) {
                numerators[i].add(std::log(static_cast<double>(k[i])) + log_gamma);
            }
        }
        if (total > 0) {
            denominator.add(std::log(static_cast<double>(total)) + log_gamma);
        }
    });

    if (denominator.empty()) {
        throw DegenerateError("budget admits only the empty sequence; no proportions");
    }

    ProportionResult result;
    result.log_total_configs = zeta.value();
    double log_den = denominator.value();
    for (std::size_t i = 0; i < layers; ++i) {
        double value = numerators[i].empty() ? 0.0 : std::exp(numerators[i].value() - log_den);
        result.p[static_cast<int>(i) + 3] = value;
    }
    return result;
}

std::map<int, double> empirical_proportions(const GateSet& gates,
                                            const std::vector<SynthesisResult>& results) {
    std::map<int, std::uint64_t> counts;
    for (int l = 3; l <= gates.spec.max_order; ++l) {
        counts[l] = 0;
    }
    std::uint64_t total = 0;
    for (const SynthesisResult& r : results) {
        for (std::uint16_t gid : r.gate_ids) {
            const BaseGate& g = gates[gid];
            if (g.order >= 3) {
                ++counts[g.order];
                ++total;
            }
        }
    }
    if (total == 0) {
        throw DegenerateError("no rotation gates in any sequence");
    }
    std::map<int, double> out;
    for (const auto& [order, n] : counts) {
        out[order] = static_cast<double>(n) / static_cast<double>(total);
    }
    return out;
}

}  // namespace hiersynth
