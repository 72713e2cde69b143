#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hiersynth/gate.hpp"
#include "hiersynth/kd_tree.hpp"
#include "hiersynth/rng.hpp"

using namespace hiersynth;

namespace {

double norm3(const PauliVector& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

double euclid(const PauliVector& a, const PauliVector& b) {
    double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// The same gate again, represented from the opposite hemisphere: rotation by
// theta about n equals rotation by 2*pi - theta about -n.
PauliVector antipodal_image(const PauliVector& v) {
    double n = norm3(v);
    double scale = -(kPi - n) / n;
    return {scale * v[0], scale * v[1], scale * v[2]};
}

struct RefPoint {
    PauliVector v;
    std::uint32_t payload;
};

// Brute-force min-image radius query with the same contract as the index:
// points within mirror_band of the boundary are also visible through their
// antipodal image.
std::vector<SpatialIndex::Hit> scan_within(const std::vector<RefPoint>& pts,
                                           double band, const PauliVector& q,
                                           double radius) {
    std::vector<SpatialIndex::Hit> hits;
    for (const RefPoint& p : pts) {
        double d = euclid(q, p.v);
        if (kPi / 2 - norm3(p.v) <= band) {
            d = std::min(d, euclid(q, antipodal_image(p.v)));
        }
        if (d <= radius) {
            hits.push_back({p.payload, d});
        }
    }
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
        return a.distance != b.distance ? a.distance < b.distance
                                        : a.payload < b.payload;
    });
    return hits;
}

void require_same_hits(const std::vector<SpatialIndex::Hit>& got,
                       const std::vector<SpatialIndex::Hit>& want) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i + 1 < got.size(); ++i) {
        bool ordered = got[i].distance < got[i + 1].distance ||
                       (got[i].distance == got[i + 1].distance &&
                        got[i].payload < got[i + 1].payload);
        REQUIRE(ordered);
    }
    // match by payload so ties in distance cannot flip the comparison
    std::vector<SpatialIndex::Hit> a = got, b = want;
    auto by_payload = [](const auto& x, const auto& y) { return x.payload < y.payload; };
    std::sort(a.begin(), a.end(), by_payload);
    std::sort(b.begin(), b.end(), by_payload);
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].payload == b[i].payload);
        REQUIRE(a[i].distance == doctest::Approx(b[i].distance).epsilon(1e-12));
    }
}

PauliVector random_vector(Rng& rng) { return to_pauli_vector(haar_random_gate(rng)); }

PauliVector boundary_biased(Rng& rng) {
    PauliVector v = random_vector(rng);
    double n = norm3(v);
    if (n < 1e-12) {
        return v;
    }
    double r = kPi / 2 - 0.4 * rng.uniform();
    return {v[0] / n * r, v[1] / n * r, v[2] / n * r};
}

}  // namespace

TEST_SUITE("kd_tree") {

TEST_CASE("radius queries match a brute-force scan") {
    Rng rng(11);
    SpatialIndex index;
    std::vector<RefPoint> pts;
    for (std::uint32_t i = 0; i < 20000; ++i) {
        PauliVector v = i % 3 == 0 ? boundary_biased(rng) : random_vector(rng);
        index.insert(v, i);
        pts.push_back({v, i});
    }
    REQUIRE(index.size() == pts.size());
    REQUIRE(index.entry_count() > pts.size());  // some fell in the band

    const double radii[] = {0.0, 1e-9, 0.01, 0.05, 0.2, 0.5};
    for (int trial = 0; trial < 150; ++trial) {
        PauliVector q = trial % 2 == 0 ? boundary_biased(rng) : random_vector(rng);
        for (double r : radii) {
            require_same_hits(index.within_radius(q, r),
                              scan_within(pts, index.mirror_band(), q, r));
        }
    }
}

TEST_CASE("infinite radius returns every payload once") {
    Rng rng(12);
    SpatialIndex index;
    for (std::uint32_t i = 0; i < 500; ++i) {
        index.insert(boundary_biased(rng), i);
    }
    auto hits = index.within_radius({0.1, 0.2, 0.3},
                                    std::numeric_limits<double>::infinity());
    REQUIRE(hits.size() == 500);
    std::vector<bool> seen(500, false);
    for (const auto& h : hits) {
        REQUIRE(!seen[h.payload]);
        seen[h.payload] = true;
    }
}

TEST_CASE("zero radius finds exact duplicates only") {
    SpatialIndex index;
    index.insert({0.3, 0.2, 0.1}, 7);
    index.insert({0.3, 0.2, 0.1000001}, 8);
    auto hits = index.within_radius({0.3, 0.2, 0.1}, 0.0);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].payload == 7);
    CHECK(hits[0].distance == 0.0);
}

TEST_CASE("wrapped neighbors are found across the boundary sphere") {
    SpatialIndex index;
    PauliVector u = {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
    double d1 = 2e-3, d2 = 3e-3;
    PauliVector v = {u[0] * (kPi / 2 - d1), u[1] * (kPi / 2 - d1), u[2] * (kPi / 2 - d1)};
    index.insert(v, 1);
    // almost the same gate, but its vector sits on the opposite hemisphere
    PauliVector q = {-u[0] * (kPi / 2 - d2), -u[1] * (kPi / 2 - d2), -u[2] * (kPi / 2 - d2)};
    CHECK(euclid(q, v) > 3.0);  // hopeless without the mirror
    auto hits = index.within_radius(q, 0.01);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].payload == 1);
    CHECK(hits[0].distance == doctest::Approx(d1 + d2).epsilon(1e-9));
}

TEST_CASE("a payload seen twice keeps the smaller distance") {
    SpatialIndex index;
    double d1 = 1e-3;
    PauliVector v = {0.0, 0.0, kPi / 2 - d1};
    index.insert(v, 42);
    // query between the primary and the mirror, close enough to reach both
    auto hits = index.within_radius({0.0, 0.0, kPi / 2 - 0.2}, 4.0);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].payload == 42);
    CHECK(hits[0].distance == doctest::Approx(0.2 - d1).epsilon(1e-9));
}

TEST_CASE("interleaved inserts and queries stay exact") {
    Rng rng(13);
    SpatialIndex index;
    std::vector<RefPoint> pts;
    for (int batch = 0; batch < 8; ++batch) {
        for (std::uint32_t i = 0; i < 700; ++i) {
            auto payload = static_cast<std::uint32_t>(pts.size());
            PauliVector v = boundary_biased(rng);
            index.insert(v, payload);
            pts.push_back({v, payload});
        }
        for (int t = 0; t < 20; ++t) {
            PauliVector q = random_vector(rng);
            require_same_hits(index.within_radius(q, 0.08),
                              scan_within(pts, index.mirror_band(), q, 0.08));
        }
    }
}

TEST_CASE("sorted insertion order triggers rebalancing and stays exact") {
    SpatialIndex index;
    std::vector<RefPoint> pts;
    for (std::uint32_t i = 0; i < 4000; ++i) {
        double t = -0.7 + 1.4 * static_cast<double>(i) / 4000.0;
        PauliVector v = {t, 0.5 * t, 0.25 * t + 0.1};
        index.insert(v, i);
        pts.push_back({v, i});
    }
    CHECK(index.rebuild_count() > 0);

    Rng rng(15);
    for (int t = 0; t < 50; ++t) {
        PauliVector q = random_vector(rng);
        require_same_hits(index.within_radius(q, 0.1),
                          scan_within(pts, index.mirror_band(), q, 0.1));
    }
    SpatialIndex::QueryStats stats;
    index.within_radius({0.0, 0.0, 0.1}, 0.01, &stats);
    CHECK(stats.visited < index.entry_count() / 4);
}

TEST_CASE("empty index returns nothing") {
    SpatialIndex index;
    CHECK(index.size() == 0);
    CHECK(index.within_radius({0.1, 0.0, 0.0}, 10.0).empty());
}

TEST_CASE("tree pruning visits a small fraction of entries") {
    Rng rng(14);
    SpatialIndex index;
    for (std::uint32_t i = 0; i < 100000; ++i) {
        index.insert(random_vector(rng), i);
    }
    std::vector<double> fractions;
    for (int t = 0; t < 100; ++t) {
        SpatialIndex::QueryStats stats;
        index.within_radius(random_vector(rng), 0.03, &stats);
        fractions.push_back(static_cast<double>(stats.visited) /
                            static_cast<double>(index.entry_count()));
    }
    std::sort(fractions.begin(), fractions.end());
    CHECK(fractions[fractions.size() / 2] < 0.05);
}

}  // TEST_SUITE
