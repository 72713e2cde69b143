#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hiersynth/cost_model.hpp"
#include "hiersynth/gate.hpp"
#include "hiersynth/gate_set.hpp"

namespace hiersynth {

// Rotation-axis vectors are deduplicated on a cubic grid of this spacing.
inline constexpr double kKeyDelta = 1e-6;

// Cell coordinates of a vector on the deduplication grid.
std::array<std::int32_t, 3> key_cell(const PauliVector& v);

// Every cell a numerically-jittered copy of v may occupy: the home cell,
// neighbors across faces the vector nearly touches, and the antipodal image
// near the boundary sphere.  Membership checks probe all of these.
std::vector<std::array<std::int32_t, 3>> probe_cells(const PauliVector& v);

// One accepted sequence: the last base gate applied and a link to the prefix.
// Records are appended in acceptance order, so ids are dense and parents
// always precede children.
struct SeqNode {
    GateElement combined;        // product of the whole sequence, root first
    double cost = 0.0;           // sum of base gate costs
    std::uint32_t parent = 0;    // id of the prefix node; the root points at itself
    std::uint16_t base_gate = 0xFFFF;  // 0xFFFF marks the root
    std::uint16_t depth = 0;     // number of base gates in the sequence
};

struct DbStats {
    std::uint64_t accepted_total = 0;
    std::map<int, std::uint64_t> accepted_per_depth;
    // Across all accepted sequences, how many gates of each hierarchy order
    // appear; totals equal the sum of node depths.
    std::map<int, std::uint64_t> gate_order_histogram;
    double watermark = -1.0;
    double expanded_to = -1.0;
    std::uint64_t frontier_size = 0;
};

// Open-addressed map from grid cells to a double, used both for the set of
// accepted cells (marked with kAcceptedCell) and for the best pending cost
// per cell.  Linear probing over 24-byte slots keeps it compact enough for
// databases with tens of millions of nodes.
class CellCostMap {
public:
    static constexpr double kAcceptedCell = -1.0;

    CellCostMap();
    double* find(const std::array<std::int32_t, 3>& cell);
    const double* find(const std::array<std::int32_t, 3>& cell) const;
    void insert_or_assign(const std::array<std::int32_t, 3>& cell, double value);
    std::size_t size() const { return count_; }
    void clear();

private:
    struct Slot {
        std::int32_t a, b, c;
        double value;
    };
    void rehash(std::size_t new_cap);
    std::vector<Slot> slots_;
    std::size_t count_ = 0;
    std::size_t mask_ = 0;
};

// Cost-ordered queue of not-yet-expanded children, identified by (parent id,
// base gate id); the cost is recomputed on pop.  When every rotation cost is
// a multiple of a common quantum (true for all built-in models) a bucket
// queue gives exact integer cost comparisons and FIFO tie-breaking for free;
// otherwise a binary heap ordered by (cost, push sequence) is used.
class Frontier {
public:
    struct Item {
        std::uint32_t parent;
        std::uint16_t gate;
    };

    // quantum == 0 selects the heap fallback.
    void configure(double quantum);
    void push(double cost, std::uint32_t parent, std::uint16_t gate);
    // Least (cost, FIFO) item with cost <= max_cost, or nothing.
    std::optional<Item> pop_min(double max_cost);
    // Same item pop_min would return, without consuming it.
    std::optional<Item> peek_min(double max_cost);
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }
    // Iterates items in pop order without consuming them (for save()).
    void for_each_in_order(const std::function<void(Item)>& fn) const;

private:
    double quantum_ = 1.0;
    std::size_t count_ = 0;
    // bucket mode
    std::vector<std::vector<Item>> buckets_;
    std::vector<std::size_t> heads_;
    std::size_t floor_ = 0;
    // heap mode
    struct HeapEntry {
        double cost;
        std::uint64_t seq;
        std::uint32_t parent;
        std::uint16_t gate;
    };
    std::vector<HeapEntry> heap_;
    std::uint64_t next_seq_ = 0;
    bool use_heap_ = false;
};

inline constexpr std::uint64_t kDefaultNodeCeiling = 50'000'000;

// All sequences over a gate set whose cost stays within a growable budget,
// deduplicated so exactly one minimal-cost sequence per distinct gate is
// kept.  Expansion is a Dijkstra sweep: the cheapest pending leaf is popped;
// if its grid cell is new it is accepted and one child per base gate is
// queued (children above the current budget are regenerated by the next
// grow() call instead of being queued early).
class SequenceDatabase {
public:
    SequenceDatabase(GateSet set, CostModel model,
                     std::uint64_t node_ceiling = kDefaultNodeCeiling);

    static SequenceDatabase generate(GateSet set, CostModel model, double max_cost,
                                     std::uint64_t node_ceiling = kDefaultNodeCeiling);

    // Extends the budget to new_max_cost (>= current watermark).  Safe to
    // call after a ResourceLimitError once the ceiling has been raised.
    void grow(double new_max_cost);

    const GateSet& gate_set() const { return set_; }
    const CostModel& cost_model() const { return model_; }
    double watermark() const { return watermark_; }
    std::uint64_t node_ceiling() const { return node_ceiling_; }
    void set_node_ceiling(std::uint64_t ceiling) { node_ceiling_ = ceiling; }

    std::size_t size() const { return nodes_.size(); }
    const SeqNode& node(std::size_t id) const { return nodes_[id]; }
    const std::vector<SeqNode>& nodes() const { return nodes_; }

    // Base gate ids of the sequence for an accepted node, root end first.
    std::vector<std::uint16_t> decode_sequence(std::size_t id) const;
    // Rebuilds the gate product of a decoded sequence from scratch.
    GateElement recompose(std::size_t id) const;

    DbStats stats() const;

    void save(const std::string& path) const;
    static SequenceDatabase load(const std::string& path);

private:
    void expand_node(std::uint32_t id, double floor_cost, double max_cost);
    void push_child(std::uint32_t parent, std::uint16_t gate, double cost);
    bool cell_blocks(const PauliVector& v, double cost, bool* accepted_hit) const;
    double frontier_quantum() const;

    GateSet set_;
    CostModel model_;
    std::vector<double> gate_costs_;   // by gate id
    std::vector<SeqNode> nodes_;
    CellCostMap cells_;
    Frontier frontier_;
    double watermark_ = -1.0;    // accepted set is complete up to here
    double expanded_to_ = -1.0;  // children have been queued up to here
    std::uint64_t node_ceiling_;
};

}  // namespace hiersynth
