#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hiersynth/cost_model.hpp"
#include "hiersynth/errors.hpp"
#include "hiersynth/gate_set.hpp"
#include "hiersynth/rng.hpp"
#include "hiersynth/sequence_db.hpp"
#include "hiersynth/stats.hpp"
#include "hiersynth/synthesizer.hpp"

namespace hiersynth {

// One cost-scaling study: a fixed pool of uniform random targets synthesized
// at every accuracy in the grid, sharing one growing database.
struct ExperimentSpec {
    GateSetSpec set_spec = GateSetSpec::for_max_order(3);
    CostModel cost_model = CostModel::catalyst_direct(3);
    std::vector<double> epsilons;
    std::size_t target_count = 1;
    std::uint64_t seed = 1;
    double growth_increment = 0.0;  // 0 selects the cheapest rotation cost
    double growth_ceiling = 10000.0;
    // Test hook: when nonempty these targets are used verbatim (the pool size
    // follows the list) instead of drawing from the seed.
    std::vector<GateElement> forced_targets;
};

struct ExperimentRow {
    double epsilon = 0.0;
    double mean_cost = 0.0;
    double stderr_cost = 0.0;
    std::uint64_t n = 0;
};

struct ExperimentTable {
    std::vector<ExperimentRow> rows;  // one per completed epsilon, input order
    std::uint64_t target_hash = 0;    // checksum of the drawn target pool
    double final_watermark = 0.0;
    bool partial = false;  // a growth ceiling stopped the grid early
};

// Raised when the growth ceiling interrupts a grid; carries what finished.
class ExperimentAbort : public ResourceLimitError {
public:
    ExperimentAbort(const std::string& what, ExperimentTable done)
        : ResourceLimitError(what), partial(std::move(done)) {}
    ExperimentTable partial;
};

// The experiment's target pool (forced list or seeded uniform draws).
std::vector<GateElement> experiment_targets(const ExperimentSpec& spec);
std::uint64_t hash_targets(const std::vector<GateElement>& targets);

// Runs the grid against the given database (must match the experiment's gate
// set and cost model), growing it as needed.  Accuracies are processed
// coarsest first so the database only ever grows.
ExperimentTable run_experiment(const ExperimentSpec& spec, SequenceDatabase& db);
// Convenience form that builds the database itself.
ExperimentTable run_experiment(const ExperimentSpec& spec);

// Text emission.  CSV uses 12 significant digits, '\n' newlines, and leading
// '# key=value' metadata lines; parse accepts exactly that shape.
void emit_table_csv(const ExperimentTable& table, std::ostream& out);
ExperimentTable parse_table_csv(std::istream& in);
std::string table_to_json(const ExperimentTable& table);
ExperimentTable table_from_json(const std::string& text);
void emit_fit_csv(const FitResult& fit, std::ostream& out);
FitResult parse_fit_csv(std::istream& in);
std::string fit_to_json(const FitResult& fit);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace hiersynth
