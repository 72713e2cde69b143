#include "hiersynth/kd_tree.hpp"

#include <algorithm>
#include <cmath>

namespace hiersynth {

namespace {

double sq_dist(const double* a, const PauliVector& b) {
    double dx = a[0] - b[0];
    double dy = a[1] - b[1];
    double dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
}

}  // namespace

void SpatialIndex::insert(const PauliVector& v, std::uint32_t payload) {
    double pt[3] = {v[0], v[1], v[2]};
    insert_entry(pt, payload);
    ++primary_count_;
    double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (norm > kPi / 2 - mirror_band_) {
        // the same rotation seen from the far side of the ball: angle 2pi - theta
        // about the opposite axis, i.e. norm pi - |v| along -v (equal to -v only
        // exactly on the boundary sphere)
        double scale = -(kPi - norm) / norm;
        double m[3] = {scale * v[0], scale * v[1], scale * v[2]};
        insert_entry(m, payload);
    }
}

void SpatialIndex::insert_entry(const double* pt, std::uint32_t payload) {
    Node node;
    node.pt[0] = pt[0];
    node.pt[1] = pt[1];
    node.pt[2] = pt[2];
    node.payload = payload;
    auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);
    if (root_ < 0) {
        root_ = id;
        return;
    }
    std::int32_t cur = root_;
    int depth = 0;
    while (true) {
        Node& n = nodes_[static_cast<std::size_t>(cur)];
        int axis = depth % 3;
        std::int32_t& slot = pt[axis] < n.pt[axis] ? n.left : n.right;
        if (slot < 0) {
            slot = id;
            break;
        }
        cur = slot;
        ++depth;
    }
    double limit = 2.0 * std::log2(static_cast<double>(nodes_.size())) + 8.0;
    if (depth > limit) {
        rebuild();
    }
}

void SpatialIndex::rebuild() {
    std::vector<std::int32_t> ids(nodes_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        ids[i] = static_cast<std::int32_t>(i);
    }
    root_ = build_range(ids, 0, static_cast<std::int32_t>(ids.size()), 0);
    ++rebuilds_;
}

std::int32_t SpatialIndex::build_range(std::vector<std::int32_t>& ids,
                                       std::int32_t lo, std::int32_t hi, int depth) {
    if (lo >= hi) {
        return -1;
    }
    int axis = depth % 3;
    std::int32_t mid = lo + (hi - lo) / 2;
    std::nth_element(ids.begin() + lo, ids.begin() + mid, ids.begin() + hi,
                     [&](std::int32_t a, std::int32_t b) {
                         return nodes_[static_cast<std::size_t>(a)].pt[axis] <
                                nodes_[static_cast<std::size_t>(b)].pt[axis];
                     });
    std::int32_t id = ids[mid];
    Node& n = nodes_[static_cast<std::size_t>(id)];
    n.left = build_range(ids, lo, mid, depth + 1);
    n.right = build_range(ids, mid + 1, hi, depth + 1);
    return id;
}

std::vector<SpatialIndex::Hit> SpatialIndex::within_radius(const PauliVector& q,
                                                           double radius,
                                                           QueryStats* stats) const {
    std::vector<Hit> hits;
    if (root_ < 0 || !(radius >= 0.0)) {
        return hits;
    }
    bool unbounded = std::isinf(radius);
    double r2 = radius * radius;
    // explicit stack; the rebuild rule bounds tree depth well below this
    std::int32_t stack[256];
    int top = 0;
    int depth_stack[256];
    stack[top] = root_;
    depth_stack[top] = 0;
    ++top;
    while (top > 0) {
        --top;
        std::int32_t cur = stack[top];
        int depth = depth_stack[top];
        while (cur >= 0) {
            const Node& n = nodes_[static_cast<std::size_t>(cur)];
            if (stats != nullptr) {
                ++stats->visited;
            }
            double d2 = sq_dist(n.pt, q);
            if (unbounded || d2 <= r2) {
                hits.push_back({n.payload, std::sqrt(d2)});
            }
            int axis = depth % 3;
            double diff = q[axis] - n.pt[axis];
            std::int32_t near = diff < 0.0 ? n.left : n.right;
            std::int32_t far = diff < 0.0 ? n.right : n.left;
            if (far >= 0 && (unbounded || std::abs(diff) <= radius)) {
                stack[top] = far;
                depth_stack[top] = depth + 1;
                ++top;
            }
            cur = near;
            ++depth;
        }
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return a.payload < b.payload || (a.payload == b.payload && a.distance < b.distance);
    });
    // mirror entries can produce the same payload twice; keep the closer one
    std::size_t out = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (i == 0 || hits[i].payload != hits[i - 1].payload) {
            hits[out++] = hits[i];
        }
    }
    hits.resize(out);
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.payload < b.payload);
    });
    return hits;
}

}  // namespace hiersynth
