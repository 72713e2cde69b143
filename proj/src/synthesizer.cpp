#include "hiersynth/synthesizer.hpp"

#include <atomic>
#include <cmath>

#include "hiersynth/errors.hpp"
#include "hiersynth/parallel.hpp"

namespace hiersynth {

namespace {

constexpr double kRadiusMargin = 0.25;

SynthesisResult make_result(const SequenceDatabase& db, std::uint32_t id,
                            double error, double epsilon) {
    SynthesisResult r;
    r.node_id = id;
    r.gate_ids = db.decode_sequence(id);
    r.gate_labels.reserve(r.gate_ids.size());
    for (std::uint16_t gid : r.gate_ids) {
        r.gate_labels.push_back(db.gate_set()[gid].label);
    }
    r.cost = db.node(id).cost;
    r.achieved_error = error;
    r.epsilon = epsilon;
    r.grew_to = db.watermark();
    return r;
}

}  // namespace

Synthesizer::Synthesizer(SequenceDatabase& db, GrowthPolicy policy)
    : db_(db), policy_(policy) {
    if (policy_.increment == 0.0) {
        policy_.increment = db_.cost_model().cheapest_rotation_cost();
    }
    if (!(policy_.increment > 0.0)) {
        throw DomainError("growth increment must be positive");
    }
    sync_index();
}

double Synthesizer::search_radius(double epsilon) const {
    return 2.0 * std::sqrt(2.0) * epsilon * (1.0 + kRadiusMargin);
}

void Synthesizer::sync_index() {
    for (; indexed_ < db_.size(); ++indexed_) {
        index_.insert(to_pauli_vector(db_.node(indexed_).combined),
                      static_cast<std::uint32_t>(indexed_));
    }
}

void Synthesizer::ensure_base() {
    if (db_.watermark() < 0.0) {
        db_.grow(0.0);  // the free Clifford layer
        sync_index();
    }
}

void Synthesizer::grow_step() {
    double next = db_.watermark() + policy_.increment;
    if (next > policy_.ceiling) {
        throw ResourceLimitError("growth ceiling of " + std::to_string(policy_.ceiling) +
                                 " reached without a match");
    }
    db_.grow(next);
    sync_index();
}

std::optional<SynthesisResult> Synthesizer::try_resolve(const GateElement& target,
                                                        double epsilon) const {
    PauliVector v = to_pauli_vector(target);
    double radius = search_radius(epsilon);
    bool found = false;
    std::uint32_t best_id = 0;
    double best_cost = 0.0;
    double best_error = 0.0;
    auto consider = [&](std::uint32_t id) {
        double err = trace_distance(db_.node(id).combined, target);
        if (err > epsilon) {
            return;
        }
        double cost = db_.node(id).cost;
        if (!found || cost < best_cost || (cost == best_cost && id < best_id)) {
            found = true;
            best_id = id;
            best_cost = cost;
            best_error = err;
        }
    };
    if (radius <= index_.mirror_band()) {
        for (const SpatialIndex::Hit& hit : index_.within_radius(v, radius)) {
            consider(hit.payload);
        }
    } else {
        // radius past the mirror band could miss wrapped candidates; such
        // coarse epsilons only occur on small databases, so scan instead
        for (std::uint32_t id = 0; id < db_.size(); ++id) {
            consider(id);
        }
    }
    if (!found) {
        return std::nullopt;
    }
    return make_result(db_, best_id, best_error, epsilon);
}

SynthesisResult Synthesizer::synthesize(const GateElement& target, double epsilon) {
    if (!(epsilon >= 0.0)) {
        throw DomainError("epsilon must be >= 0");
    }
    ensure_base();
    while (true) {
        if (auto r = try_resolve(target, epsilon)) {
            return *r;
        }
        grow_step();
    }
}

std::vector<SynthesisResult> Synthesizer::synthesize_batch(
    const std::vector<GateElement>& targets, double epsilon) {
    if (!(epsilon >= 0.0)) {
        throw DomainError("epsilon must be >= 0");
    }
    std::vector<SynthesisResult> results(targets.size());
    if (targets.empty()) {
        return results;
    }
    ensure_base();
    std::vector<std::uint8_t> done(targets.size(), 0);
    while (true) {
        std::atomic<std::size_t> unresolved{0};
        parallel_for(targets.size(), [&](std::size_t i) {
            if (done[i]) {
                return;
            }
            if (auto r = try_resolve(targets[i], epsilon)) {
                results[i] = std::move(*r);
                done[i] = 1;
            } else {
                unresolved.fetch_add(1, std::memory_order_relaxed);
            }
        });
        if (unresolved.load() == 0) {
            break;
        }
        grow_step();
    }
    // growth after a target resolved cannot produce a cheaper answer (new
    // nodes cost more than the watermark that answered it), so only the
    // final-watermark field needs refreshing
    for (SynthesisResult& r : results) {
        r.grew_to = db_.watermark();
    }
    return results;
}

std::optional<SynthesisResult> scan_synthesize(const SequenceDatabase& db,
                                               const GateElement& target,
                                               double epsilon) {
    bool found = false;
    std::uint32_t best_id = 0;
    double best_cost = 0.0;
    double best_error = 0.0;
    for (std::uint32_t id = 0; id < db.size(); ++id) {
        double err = trace_distance(db.node(id).combined, target);
        if (err > epsilon) {
            continue;
        }
        double cost = db.node(id).cost;
        if (!found || cost < best_cost || (cost == best_cost && id < best_id)) {
            found = true;
            best_id = id;
            best_cost = cost;
            best_error = err;
        }
    }
    if (!found) {
        return std::nullopt;
    }
    SynthesisResult r;
    r.node_id = best_id;
    r.gate_ids = db.decode_sequence(best_id);
    for (std::uint16_t gid : r.gate_ids) {
        r.gate_labels.push_back(db.gate_set()[gid].label);
    }
    r.cost = best_cost;
    r.achieved_error = best_error;
    r.epsilon = epsilon;
    r.grew_to = db.watermark();
    return r;
}

VerifyReport verify(const SequenceDatabase& db, const SynthesisResult& result,
                    const GateElement& target) {
    VerifyReport rep;
    GateElement acc = identity_gate();
    double cost = 0.0;
    for (std::uint16_t gid : result.gate_ids) {
        if (gid >= db.gate_set().size()) {
            return rep;  // everything false
        }
        const BaseGate& g = db.gate_set()[gid];
        acc = compose(acc, g.element);
        cost += db.cost_model().gate_cost(g);
    }
    rep.recomputed_cost = cost;
    rep.recomputed_error = trace_distance(acc, target);
    rep.cost_ok = std::abs(cost - result.cost) <= 1e-10;
    rep.error_ok = std::abs(rep.recomputed_error - result.achieved_error) <= 1e-10;
    rep.bound_ok = rep.recomputed_error <= result.epsilon + 1e-10;
    rep.pass = rep.cost_ok && rep.error_ok && rep.bound_ok;
    return rep;
}

}  // namespace hiersynth
