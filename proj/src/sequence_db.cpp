#include "hiersynth/sequence_db.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "hiersynth/crc64.hpp"
#include "hiersynth/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "database files are little-endian; big-endian hosts are unsupported");

namespace hiersynth {

namespace {

constexpr double kCostTol = 1e-9;
// Composition round-off is well below 1e-10, so a copy of a vector can only
// cross a cell face if it sits within this fraction of a cell from it.
constexpr double kCellMargin = 0.01;
// Vectors this close to the boundary sphere may also appear mirrored.
constexpr double kBoundaryBand = 10.0 * kKeyDelta;

std::int32_t cell_coord(double x) {
    return static_cast<std::int32_t>(std::llround(x / kKeyDelta));
}

// Cells of v itself: the home cell plus neighbors along axes where v lies
// within the jitter margin of a cell face (1, 2, 4 or 8 cells).
int own_cells(const PauliVector& v, std::array<std::int32_t, 3>* out) {
    std::int32_t base[3];
    int extra[3];
    for (int i = 0; i < 3; ++i) {
        double s = v[i] / kKeyDelta;
        base[i] = static_cast<std::int32_t>(std::llround(s));
        double frac = s - base[i];
        extra[i] = frac > 0.5 - kCellMargin ? 1 : (frac < -0.5 + kCellMargin ? -1 : 0);
    }
    int n = 0;
    for (int da = 0; da < 2; ++da) {
        for (int db = 0; db < 2; ++db) {
            for (int dc = 0; dc < 2; ++dc) {
                if ((da && !extra[0]) || (db && !extra[1]) || (dc && !extra[2])) {
                    continue;
                }
                out[n++] = {base[0] + da * extra[0], base[1] + db * extra[1],
                            base[2] + dc * extra[2]};
            }
        }
    }
    return n;
}

// All cells a numerically-jittered copy of v can land in; near the boundary
// sphere the antipodal representation -v is probed as well.
int collect_probe_cells(const PauliVector& v, std::array<std::int32_t, 3>* out) {
    int n = own_cells(v, out);
    double norm2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    double lim = kPi / 2 - kBoundaryBand;
    if (norm2 > lim * lim) {
        PauliVector m = {-v[0], -v[1], -v[2]};
        n += own_cells(m, out + n);
    }
    return n;
}

std::uint64_t cell_hash(const std::array<std::int32_t, 3>& c) {
    std::uint64_t h = static_cast<std::uint32_t>(c[0]);
    h = h * 0x9E3779B97F4A7C15ull + static_cast<std::uint32_t>(c[1]);
    h = h * 0xC2B2AE3D27D4EB4Full + static_cast<std::uint32_t>(c[2]);
    h ^= h >> 33;
    h *= 0xFF51AFD7ED558CCDull;
    h ^= h >> 33;
    return h;
}

constexpr std::int32_t kEmptySlot = INT32_MIN;

}  // namespace

std::array<std::int32_t, 3> key_cell(const PauliVector& v) {
    return {cell_coord(v[0]), cell_coord(v[1]), cell_coord(v[2])};
}

std::vector<std::array<std::int32_t, 3>> probe_cells(const PauliVector& v) {
    std::array<std::int32_t, 3> cells[16];
    int n = collect_probe_cells(v, cells);
    return {cells, cells + n};
}

// ---------------------------------------------------------------- CellCostMap

CellCostMap::CellCostMap() { clear(); }

void CellCostMap::clear() {
    slots_.assign(1 << 16, Slot{kEmptySlot, 0, 0, 0.0});
    mask_ = slots_.size() - 1;
    count_ = 0;
}

double* CellCostMap::find(const std::array<std::int32_t, 3>& cell) {
    std::size_t i = cell_hash(cell) & mask_;
    while (true) {
        Slot& s = slots_[i];
        if (s.a == kEmptySlot) {
            return nullptr;
        }
        if (s.a == cell[0] && s.b == cell[1] && s.c == cell[2]) {
            return &s.value;
        }
        i = (i + 1) & mask_;
    }
}

const double* CellCostMap::find(const std::array<std::int32_t, 3>& cell) const {
    return const_cast<CellCostMap*>(this)->find(cell);
}

void CellCostMap::insert_or_assign(const std::array<std::int32_t, 3>& cell,
                                   double value) {
    if (count_ * 10 >= slots_.size() * 7) {
        rehash(slots_.size() * 2);
    }
    std::size_t i = cell_hash(cell) & mask_;
    while (true) {
        Slot& s = slots_[i];
        if (s.a == kEmptySlot) {
            s = {cell[0], cell[1], cell[2], value};
            ++count_;
            return;
        }
        if (s.a == cell[0] && s.b == cell[1] && s.c == cell[2]) {
            s.value = value;
            return;
        }
        i = (i + 1) & mask_;
    }
}

void CellCostMap::rehash(std::size_t new_cap) {
    std::vector<Slot> old;
    old.swap(slots_);
    slots_.assign(new_cap, Slot{kEmptySlot, 0, 0, 0.0});
    mask_ = new_cap - 1;
    for (const Slot& s : old) {
        if (s.a == kEmptySlot) {
            continue;
        }
        std::size_t i = cell_hash({s.a, s.b, s.c}) & mask_;
        while (slots_[i].a != kEmptySlot) {
            i = (i + 1) & mask_;
        }
        slots_[i] = s;
    }
}

// ------------------------------------------------------------------ Frontier

void Frontier::configure(double quantum) {
    use_heap_ = quantum <= 0.0;
    quantum_ = use_heap_ ? 1.0 : quantum;
}

void Frontier::push(double cost, std::uint32_t parent, std::uint16_t gate) {
    if (use_heap_) {
        heap_.push_back({cost, next_seq_++, parent, gate});
        std::push_heap(heap_.begin(), heap_.end(),
                       [](const HeapEntry& a, const HeapEntry& b) {
                           return std::tie(a.cost, a.seq) > std::tie(b.cost, b.seq);
                       });
    } else {
        auto b = static_cast<std::size_t>(std::llround(cost / quantum_));
        if (b >= buckets_.size()) {
            buckets_.resize(b + 1);
            heads_.resize(b + 1, 0);
        }
        buckets_[b].push_back({parent, gate});
    }
    ++count_;
}

std::optional<Frontier::Item> Frontier::pop_min(double max_cost) {
    if (count_ == 0) {
        return std::nullopt;
    }
    if (use_heap_) {
        if (heap_.front().cost > max_cost + kCostTol) {
            return std::nullopt;
        }
        Item item{heap_.front().parent, heap_.front().gate};
        std::pop_heap(heap_.begin(), heap_.end(),
                      [](const HeapEntry& a, const HeapEntry& b) {
                          return std::tie(a.cost, a.seq) > std::tie(b.cost, b.seq);
                      });
        heap_.pop_back();
        --count_;
        return item;
    }
    auto max_b = static_cast<std::size_t>(
        std::floor(std::max(max_cost, 0.0) / quantum_ + kCostTol));
    while (floor_ < buckets_.size()) {
        if (heads_[floor_] < buckets_[floor_].size()) {
            if (floor_ > max_b) {
                return std::nullopt;
            }
            Item item = buckets_[floor_][heads_[floor_]++];
            --count_;
            return item;
        }
        // bucket exhausted; release its storage before moving on
        buckets_[floor_] = {};
        heads_[floor_] = 0;
        ++floor_;
    }
    return std::nullopt;
}

std::optional<Frontier::Item> Frontier::peek_min(double max_cost) {
    if (count_ == 0) {
        return std::nullopt;
    }
    if (use_heap_) {
        if (heap_.front().cost > max_cost + kCostTol) {
            return std::nullopt;
        }
        return Item{heap_.front().parent, heap_.front().gate};
    }
    auto max_b = static_cast<std::size_t>(
        std::floor(std::max(max_cost, 0.0) / quantum_ + kCostTol));
    while (floor_ < buckets_.size()) {
        if (heads_[floor_] < buckets_[floor_].size()) {
            if (floor_ > max_b) {
                return std::nullopt;
            }
            return buckets_[floor_][heads_[floor_]];
        }
        buckets_[floor_] = {};
        heads_[floor_] = 0;
        ++floor_;
    }
    return std::nullopt;
}

void Frontier::for_each_in_order(const std::function<void(Item)>& fn) const {
    if (use_heap_) {
        std::vector<HeapEntry> sorted = heap_;
        std::sort(sorted.begin(), sorted.end(), [](const HeapEntry& a, const HeapEntry& b) {
            return std::tie(a.cost, a.seq) < std::tie(b.cost, b.seq);
        });
        for (const HeapEntry& e : sorted) {
            fn({e.parent, e.gate});
        }
        return;
    }
    for (std::size_t b = floor_; b < buckets_.size(); ++b) {
        for (std::size_t i = heads_[b]; i < buckets_[b].size(); ++i) {
            fn(buckets_[b][i]);
        }
    }
}

// ---------------------------------------------------------- SequenceDatabase

SequenceDatabase::SequenceDatabase(GateSet set, CostModel model,
                                   std::uint64_t node_ceiling)
    : set_(std::move(set)), model_(std::move(model)), node_ceiling_(node_ceiling) {
    if (set_.size() == 0 || set_.size() > 0xFFFE) {
        throw DomainError("gate set size out of range");
    }
    gate_costs_.reserve(set_.size());
    for (const BaseGate& g : set_.gates) {
        gate_costs_.push_back(model_.gate_cost(g));
    }
    frontier_.configure(frontier_quantum());
    // the empty sequence is always the first accepted node
    SeqNode root;
    root.combined = identity_gate();
    root.cost = 0.0;
    root.parent = 0;
    root.base_gate = 0xFFFF;
    root.depth = 0;
    nodes_.push_back(root);
    cells_.insert_or_assign(key_cell(to_pauli_vector(root.combined)),
                            CellCostMap::kAcceptedCell);
}

double SequenceDatabase::frontier_quantum() const {
    // Largest grid that all rotation costs sit on; every built-in model is
    // covered (integers, multiples of 1/16, multiples of 0.1).
    for (double q : {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.1, 0.05, 0.01}) {
        bool ok = true;
        for (const auto& [l, c] : model_.table) {
            double r = c / q;
            if (std::abs(r - static_cast<double>(std::llround(r))) > 1e-6) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return q;
        }
    }
    return 0.0;  // irrational or mixed table: heap fallback
}

SequenceDatabase SequenceDatabase::generate(GateSet set, CostModel model,
                                            double max_cost,
                                            std::uint64_t node_ceiling) {
    SequenceDatabase db(std::move(set), std::move(model), node_ceiling);
    db.grow(max_cost);
    return db;
}

void SequenceDatabase::push_child(std::uint32_t parent, std::uint16_t gate,
                                  double cost) {
    GateElement g = compose(nodes_[parent].combined, set_.gates[gate].element);
    PauliVector v = to_pauli_vector(g);
    std::array<std::int32_t, 3> cells[16];
    int n = collect_probe_cells(v, cells);
    for (int i = 0; i < n; ++i) {
        const double* val = cells_.find(cells[i]);
        if (val != nullptr && (*val == CellCostMap::kAcceptedCell || *val <= cost + kCostTol)) {
            return;  // already accepted, or a pending copy at least as cheap
        }
    }
    cells_.insert_or_assign(key_cell(v), cost);
    frontier_.push(cost, parent, gate);
}

void SequenceDatabase::expand_node(std::uint32_t id, double floor_cost,
                                   double max_cost) {
    const double base = nodes_[id].cost;
    const std::size_t n_gates = set_.size();
    for (std::size_t gid = 0; gid < n_gates; ++gid) {
        double c2 = base + gate_costs_[gid];
        if (c2 <= floor_cost + kCostTol || c2 > max_cost + kCostTol) {
            continue;
        }
        push_child(id, static_cast<std::uint16_t>(gid), c2);
    }
}

void SequenceDatabase::grow(double new_max_cost) {
    if (new_max_cost < 0.0) {
        throw BudgetError("cost budget must be >= 0");
    }
    if (new_max_cost < watermark_) {
        throw BudgetError("cannot grow to a budget below the current watermark");
    }
    // Children in (expanded_to_, new_max] were deliberately never queued;
    // queue them now, in acceptance order so tie-breaking matches a fresh
    // generate() at the larger budget.
    const double floor_cost = expanded_to_;
    if (new_max_cost > expanded_to_) {
        expanded_to_ = new_max_cost;
        const std::size_t existing = nodes_.size();
        for (std::uint32_t id = 0; id < existing; ++id) {
            expand_node(id, floor_cost, new_max_cost);
        }
    }
    std::array<std::int32_t, 3> cells[16];
    while (auto item = frontier_.peek_min(new_max_cost)) {
        const SeqNode& p = nodes_[item->parent];
        GateElement g = compose(p.combined, set_.gates[item->gate].element);
        PauliVector v = to_pauli_vector(g);
        bool dup = false;
        int n = collect_probe_cells(v, cells);
        for (int i = 0; i < n && !dup; ++i) {
            const double* val = cells_.find(cells[i]);
            dup = val != nullptr && *val == CellCostMap::kAcceptedCell;
        }
        if (!dup && nodes_.size() >= node_ceiling_) {
            // The candidate is still queued, so a later grow() resumes with it.
            throw ResourceLimitError(
                "node ceiling of " + std::to_string(node_ceiling_) +
                " reached at cost " + std::to_string(p.cost + gate_costs_[item->gate]) +
                "; state is preserved, raise the ceiling and grow again");
        }
        frontier_.pop_min(new_max_cost);
        if (dup) {
            continue;
        }
        SeqNode child;
        child.combined = g;
        child.cost = p.cost + gate_costs_[item->gate];
        child.parent = item->parent;
        child.base_gate = item->gate;
        child.depth = static_cast<std::uint16_t>(p.depth + 1);
        auto id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back(child);
        cells_.insert_or_assign(key_cell(v), CellCostMap::kAcceptedCell);
        expand_node(id, -1.0, new_max_cost);
    }
    watermark_ = new_max_cost;
}

std::vector<std::uint16_t> SequenceDatabase::decode_sequence(std::size_t id) const {
    if (id >= nodes_.size()) {
        throw DomainError("node id out of range");
    }
    std::vector<std::uint16_t> seq;
    for (std::size_t cur = id; nodes_[cur].base_gate != 0xFFFF; cur = nodes_[cur].parent) {
        seq.push_back(nodes_[cur].base_gate);
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
}

GateElement SequenceDatabase::recompose(std::size_t id) const {
    GateElement acc = identity_gate();
    for (std::uint16_t gid : decode_sequence(id)) {
        acc = compose(acc, set_.gates[gid].element);
    }
    return acc;
}

DbStats SequenceDatabase::stats() const {
    DbStats s;
    s.accepted_total = nodes_.size();
    s.watermark = watermark_;
    s.expanded_to = expanded_to_;
    s.frontier_size = frontier_.size();
    for (const SeqNode& n : nodes_) {
        ++s.accepted_per_depth[n.depth];
    }
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        for (std::size_t cur = id; nodes_[cur].base_gate != 0xFFFF;
             cur = nodes_[cur].parent) {
            ++s.gate_order_histogram[set_.gates[nodes_[cur].base_gate].order];
        }
    }
    return s;
}

// -------------------------------------------------------------- file format

namespace {

constexpr char kMagic[4] = {'H', 'S', 'D', 'B'};
constexpr std::uint32_t kFormatVersion = 1;

class CrcWriter {
public:
    explicit CrcWriter(std::ostream& out) : out_(out) {}

    template <typename T>
    void pod(const T& v) {
        static_assert(std::is_trivially_copyable_v<T>);
        write(&v, sizeof v);
    }

    void write(const void* data, std::size_t len) {
        crc_.update(data, len);
        out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
    }

    std::uint64_t crc() const { return crc_.value(); }

private:
    std::ostream& out_;
    Crc64 crc_;
};

class Reader {
public:
    Reader(const char* data, std::size_t len) : data_(data), len_(len) {}

    template <typename T>
    T pod() {
        static_assert(std::is_trivially_copyable_v<T>);
        if (pos_ + sizeof(T) > len_) {
            throw FormatError("database file is truncated");
        }
        T v;
        std::memcpy(&v, data_ + pos_, sizeof v);
        pos_ += sizeof v;
        return v;
    }

    std::size_t pos() const { return pos_; }

private:
    const char* data_;
    std::size_t len_;
    std::size_t pos_ = 0;
};

}  // namespace

void SequenceDatabase::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    CrcWriter w(out);
    w.write(kMagic, 4);
    w.pod(kFormatVersion);
    w.pod(set_.spec.max_order);
    w.pod(set_.fingerprint);
    w.pod(static_cast<std::int32_t>(model_.kind));
    w.pod(model_.mu);
    w.pod(static_cast<std::uint64_t>(model_.table.size()));
    for (const auto& [l, c] : model_.table) {
        w.pod(l);
        w.pod(c);
    }
    w.pod(model_.fingerprint());
    // Queued items whose gate was accepted meanwhile would be dropped on pop
    // anyway; keep them out of the file.
    auto is_live = [&](Frontier::Item item) {
        GateElement g = compose(nodes_[item.parent].combined,
                                set_.gates[item.gate].element);
        PauliVector v = to_pauli_vector(g);
        std::array<std::int32_t, 3> cells[16];
        int n = collect_probe_cells(v, cells);
        for (int i = 0; i < n; ++i) {
            const double* val = cells_.find(cells[i]);
            if (val != nullptr && *val == CellCostMap::kAcceptedCell) {
                return false;
            }
        }
        return true;
    };
    std::uint64_t live_frontier = 0;
    frontier_.for_each_in_order([&](Frontier::Item item) {
        live_frontier += is_live(item) ? 1 : 0;
    });
    w.pod(static_cast<std::uint64_t>(nodes_.size()));
    w.pod(live_frontier);
    w.pod(watermark_);
    w.pod(expanded_to_);
    w.pod(node_ceiling_);
    for (const SeqNode& n : nodes_) {
        w.pod(static_cast<std::uint64_t>(n.parent));
        w.pod(n.base_gate);
        w.pod(n.combined);
        w.pod(n.cost);
    }
    frontier_.for_each_in_order([&](Frontier::Item item) {
        if (!is_live(item)) {
            return;
        }
        const SeqNode& p = nodes_[item.parent];
        GateElement g = compose(p.combined, set_.gates[item.gate].element);
        w.pod(static_cast<std::uint64_t>(item.parent));
        w.pod(item.gate);
        w.pod(g);
        w.pod(p.cost + gate_costs_[item.gate]);
    });
    std::uint64_t crc = w.crc();
    out.write(reinterpret_cast<const char*>(&crc), sizeof crc);
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

SequenceDatabase SequenceDatabase::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failed: " + path);
    }
    if (buf.size() < 12 + 8) {
        throw FormatError("database file is truncated");
    }
    std::uint64_t stored_crc;
    std::memcpy(&stored_crc, buf.data() + buf.size() - 8, 8);
    if (crc64(buf.data(), buf.size() - 8) != stored_crc) {
        throw FormatError("database checksum mismatch");
    }
    Reader r(buf.data(), buf.size() - 8);
    char magic[4];
    magic[0] = r.pod<char>();
    magic[1] = r.pod<char>();
    magic[2] = r.pod<char>();
    magic[3] = r.pod<char>();
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw FormatError("not a sequence database file");
    }
    if (r.pod<std::uint32_t>() != kFormatVersion) {
        throw FormatError("unsupported database format version");
    }
    int max_order = r.pod<int>();
    auto set_fp = r.pod<std::uint64_t>();
    GateSet set = build_gate_set(GateSetSpec::for_max_order(max_order));
    if (set.fingerprint != set_fp) {
        throw FormatError("gate set fingerprint mismatch");
    }
    CostModel model;
    model.kind = static_cast<CostModelKind>(r.pod<std::int32_t>());
    model.mu = r.pod<double>();
    auto table_n = r.pod<std::uint64_t>();
    for (std::uint64_t i = 0; i < table_n; ++i) {
        int l = r.pod<int>();
        model.table[l] = r.pod<double>();
    }
    if (model.fingerprint() != r.pod<std::uint64_t>()) {
        throw FormatError("cost model fingerprint mismatch");
    }
    auto n_nodes = r.pod<std::uint64_t>();
    auto n_frontier = r.pod<std::uint64_t>();
    double watermark = r.pod<double>();
    double expanded_to = r.pod<double>();
    auto ceiling = r.pod<std::uint64_t>();

    SequenceDatabase db(std::move(set), std::move(model), ceiling);
    if (n_nodes == 0) {
        throw FormatError("database file has no root node");
    }
    db.nodes_.clear();
    db.cells_.clear();
    db.nodes_.reserve(n_nodes);
    for (std::uint64_t i = 0; i < n_nodes; ++i) {
        SeqNode n;
        auto parent = r.pod<std::uint64_t>();
        n.base_gate = r.pod<std::uint16_t>();
        n.combined = r.pod<GateElement>();
        n.cost = r.pod<double>();
        if (parent >= std::max<std::uint64_t>(i, 1)) {
            throw FormatError("node parent out of order");
        }
        if (i == 0 && n.base_gate != 0xFFFF) {
            throw FormatError("first node record must be the root");
        }
        if (n.base_gate != 0xFFFF && n.base_gate >= db.set_.size()) {
            throw FormatError("node gate id out of range");
        }
        n.parent = static_cast<std::uint32_t>(parent);
        n.depth = i == 0 ? 0 : static_cast<std::uint16_t>(db.nodes_[n.parent].depth + 1);
        db.cells_.insert_or_assign(key_cell(to_pauli_vector(n.combined)),
                                   CellCostMap::kAcceptedCell);
        db.nodes_.push_back(n);
    }
    for (std::uint64_t i = 0; i < n_frontier; ++i) {
        auto parent = r.pod<std::uint64_t>();
        auto gate = r.pod<std::uint16_t>();
        r.pod<GateElement>();  // recomputable; stored for external readers
        double cost = r.pod<double>();
        if (parent >= db.nodes_.size() || gate >= db.set_.size()) {
            throw FormatError("frontier record out of range");
        }
        GateElement g = compose(db.nodes_[parent].combined, db.set_.gates[gate].element);
        auto cell = key_cell(to_pauli_vector(g));
        // keep accepted markers and cheaper pending copies intact
        double* cur = db.cells_.find(cell);
        if (cur == nullptr) {
            db.cells_.insert_or_assign(cell, cost);
        } else if (*cur != CellCostMap::kAcceptedCell && cost < *cur) {
            *cur = cost;
        }
        db.frontier_.push(cost, static_cast<std::uint32_t>(parent), gate);
    }
    if (r.pos() != buf.size() - 8) {
        throw FormatError("database file has trailing bytes");
    }
    db.watermark_ = watermark;
    db.expanded_to_ = expanded_to;
    return db;
}

}  // namespace hiersynth
