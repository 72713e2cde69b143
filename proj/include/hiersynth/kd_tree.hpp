#pragma once

#include <cstdint>
#include <vector>

#include "hiersynth/gate.hpp"

namespace hiersynth {

// 3-d kd-tree over rotation-axis vectors supporting radius queries.  Vectors
// within `mirror_band` of the boundary sphere are stored a second time at
// their antipodal image so that queries near the boundary see wrapped
// neighbors; duplicate payloads in a result keep the smaller distance.
// Queries are read-only and safe to run from several threads at once.
class SpatialIndex {
public:
    explicit SpatialIndex(double mirror_band = 0.35) : mirror_band_(mirror_band) {}

    void insert(const PauliVector& v, std::uint32_t payload);

    struct Hit {
        std::uint32_t payload;
        double distance;  // euclidean, in vector space
    };

    struct QueryStats {
        std::uint64_t visited = 0;  // tree nodes touched
    };

    // All payloads with min-image distance <= radius, sorted by
    // (distance, payload).  An infinite radius returns everything.
    std::vector<Hit> within_radius(const PauliVector& q, double radius,
                                   QueryStats* stats = nullptr) const;

    std::size_t size() const { return primary_count_; }        // inserted vectors
    std::size_t entry_count() const { return nodes_.size(); }  // incl. mirrors
    double mirror_band() const { return mirror_band_; }
    std::size_t rebuild_count() const { return rebuilds_; }

private:
    struct Node {
        double pt[3];
        std::uint32_t payload;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    void insert_entry(const double* pt, std::uint32_t payload);
    void rebuild();
    std::int32_t build_range(std::vector<std::int32_t>& ids, std::int32_t lo,
                             std::int32_t hi, int depth);

    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
    std::size_t primary_count_ = 0;
    std::size_t rebuilds_ = 0;
    double mirror_band_;
};

}  // namespace hiersynth
