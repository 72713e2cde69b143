#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hiersynth/kd_tree.hpp"
#include "hiersynth/sequence_db.hpp"

namespace hiersynth {

// How the database budget is extended when a target has no match yet: the
// watermark advances by `increment` per retry (0 means the cheapest rotation
// cost of the database's model) until `ceiling`, which fires a
// ResourceLimitError instead of growing without bound.
struct GrowthPolicy {
    double increment = 0.0;
    double ceiling = 10000.0;
};

struct SynthesisResult {
    std::uint32_t node_id = 0;
    std::vector<std::uint16_t> gate_ids;   // root end first
    std::vector<std::string> gate_labels;
    double cost = 0.0;
    double achieved_error = 0.0;  // exact trace distance to the target
    double epsilon = 0.0;
    double grew_to = 0.0;         // database watermark when the answer was final
};

struct VerifyReport {
    bool pass = false;
    bool cost_ok = false;
    bool error_ok = false;
    bool bound_ok = false;
    double recomputed_cost = 0.0;
    double recomputed_error = 0.0;
};

// Candidate lookup is geometric: a ball of radius 2*sqrt(2)*epsilon*(1 +
// margin) around the target's rotation vector provably covers every gate
// within trace distance epsilon (for the epsilons this search radius keeps
// below the index mirror band; wider requests fall back to a full scan).
// Every candidate is then re-checked with the exact trace distance, and ties
// resolve to the smallest node id.
class Synthesizer {
public:
    explicit Synthesizer(SequenceDatabase& db, GrowthPolicy policy = {});

    // Cheapest database gate within epsilon, growing the database on demand.
    SynthesisResult synthesize(const GateElement& target, double epsilon);

    // Same answers as calling synthesize() per target at the final watermark,
    // but the database is grown once for the worst target, and targets are
    // searched in parallel between growth steps.
    std::vector<SynthesisResult> synthesize_batch(const std::vector<GateElement>& targets,
                                                  double epsilon);

    const SpatialIndex& index() const { return index_; }
    SequenceDatabase& database() { return db_; }
    double search_radius(double epsilon) const;

private:
    std::optional<SynthesisResult> try_resolve(const GateElement& target,
                                               double epsilon) const;
    void ensure_base();
    void grow_step();
    void sync_index();

    SequenceDatabase& db_;
    GrowthPolicy policy_;
    SpatialIndex index_;
    std::size_t indexed_ = 0;
};

// Exhaustive reference lookup: scans every accepted node with the exact trace
// distance.  Used to cross-check the indexed path.
std::optional<SynthesisResult> scan_synthesize(const SequenceDatabase& db,
                                               const GateElement& target,
                                               double epsilon);

// Recomputes cost and error of a result from its gate ids and compares
// against the stored fields at 1e-10, and the error against epsilon.
VerifyReport verify(const SequenceDatabase& db, const SynthesisResult& result,
                    const GateElement& target);

}  // namespace hiersynth
