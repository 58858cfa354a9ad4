#pragma once

// Cluster analysis and front geometry on radial samples.
//
// The radial front is defined operationally as the outer boundary of the
// "filled" origin component: flood the vacant ocean inward from the sample
// boundary, take the non-ocean component H0 containing the origin, and trace
// the hull of H0's occupied cluster. Whenever the dense-phase event holds
// this coincides with the unique two-arm interface; it stays well-defined
// even when that event marginally fails.
//
// Hull walk: the walk state is (o, v, w) where {o, v} is the primal edge
// being crossed (o occupied on the right of the motion, v vacant on the
// left) and w is the third site of the triangle being entered. If w is
// occupied the next edge is (w, v), else (o, w); the next triangle is the
// reflection of the current one through the new edge (third site o + v - w
// style arithmetic). Dual vertices have degree 3, so no tie-breaking is
// needed.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "frontlab/fits.hpp"
#include "frontlab/lattice.hpp"
#include "frontlab/percolation.hpp"

namespace frontlab {

struct Cluster {
    std::int64_t size = 0;
    double diameter = 0.0;
};

struct ClusterReport {
    std::vector<Cluster> clusters;
    std::optional<std::size_t> origin_cluster;  // index, when the origin is occupied
    double max_diameter = 0.0;
};

namespace detail {

class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

  private:
    std::vector<std::uint32_t> parent_;
};

}  // namespace detail

// Union-find over occupied sites with 6-neighbor adjacency. Cluster labels
// are deterministic (smallest region index wins). The diameter is the
// largest extent of the site set projected on the three lattice axes, in
// Euclidean units; it matches the Euclidean diameter up to a factor in
// [sqrt(3)/2, 1].
inline ClusterReport connected_clusters(const PercolationSample& sample) {
    const Region& reg = sample.region();
    const auto n = reg.size();
    detail::UnionFind uf(n);
    static constexpr std::array<SitePos, 3> kScanDirs = {SitePos{1, 0}, SitePos{0, 1},
                                                         SitePos{-1, 1}};
    reg.for_each([&](SitePos z) {
        const auto iz = reg.index_of(z);
        if (!sample.occupied_at(iz)) return;
        for (const SitePos& d : kScanDirs) {
            const SitePos w = z + d;
            if (reg.contains(w)) {
                const auto iw = reg.index_of(w);
                if (sample.occupied_at(iw)) uf.unite(static_cast<std::uint32_t>(iz),
                                                     static_cast<std::uint32_t>(iw));
            }
        }
    });

    // Aggregate extremes per root, assigning cluster indices in first-touch
    // (enumeration) order so labels are reproducible.
    struct Extremes {
        std::int64_t size = 0;
        std::int64_t p_min[3] = {INT64_MAX, INT64_MAX, INT64_MAX};
        std::int64_t p_max[3] = {INT64_MIN, INT64_MIN, INT64_MIN};
    };
    std::unordered_map<std::uint32_t, std::size_t> index_of_root;
    std::vector<Extremes> acc;
    reg.for_each([&](SitePos z) {
        const auto i = reg.index_of(z);
        if (!sample.occupied_at(i)) return;
        const auto root = uf.find(static_cast<std::uint32_t>(i));
        auto [it, fresh] = index_of_root.try_emplace(root, acc.size());
        if (fresh) acc.emplace_back();
        auto& e = acc[it->second];
        ++e.size;
        // Projections (x2) onto the axes at 0, 60 and 120 degrees.
        const std::int64_t proj[3] = {2ll * z.a + z.b, z.a + 2ll * z.b,
                                      static_cast<std::int64_t>(z.b) - z.a};
        for (int k = 0; k < 3; ++k) {
            e.p_min[k] = std::min(e.p_min[k], proj[k]);
            e.p_max[k] = std::max(e.p_max[k], proj[k]);
        }
    });

    ClusterReport report;
    report.clusters.reserve(acc.size());
    for (const auto& e : acc) {
        std::int64_t extent = 0;
        for (int k = 0; k < 3; ++k) extent = std::max(extent, e.p_max[k] - e.p_min[k]);
        report.clusters.push_back({e.size, 0.5 * static_cast<double>(extent)});
        report.max_diameter = std::max(report.max_diameter, report.clusters.back().diameter);
    }
    if (sample.occupied({0, 0})) {
        report.origin_cluster =
            index_of_root.at(uf.find(static_cast<std::uint32_t>(reg.index_of({0, 0}))));
    }
    return report;
}

enum class Phase { Dilute, Dense };

struct PhaseReport {
    Phase verdict = Phase::Dilute;
    double max_diameter = 0.0;
    double threshold = 0.0;
};

// Dilute iff every cluster has diameter <= c log n.
inline PhaseReport classify_phase(double n, const PercolationSample& sample, double c) {
    if (c <= 0) throw std::invalid_argument("classify_phase: c > 0");
    const auto report = connected_clusters(sample);
    PhaseReport out;
    out.max_diameter = report.max_diameter;
    out.threshold = c * std::log(n);
    out.verdict = report.max_diameter <= out.threshold ? Phase::Dilute : Phase::Dense;
    return out;
}

struct FrontCurve {
    std::vector<InterfaceEdge> edges;  // closed loop, step k crosses edges[k]
    std::vector<Vec2> vertices;        // dual vertex entered by step k
    int winding = 0;                   // around the origin; +-1 for a valid front
    double min_radius = 0.0;
    double max_radius = 0.0;
    double mean_radius = 0.0;
};

struct FrontError {
    enum class Kind {
        OceanReachedCore,   // no separating interface: dilute configuration
        TracerFailed,       // internal: walk did not close
    };
    Kind kind;
    std::string message;
};

struct FrontResult {
    std::optional<FrontCurve> front;
    std::optional<FrontError> error;
    bool ok() const { return front.has_value(); }
};

// Extracts the interface surrounding the origin:
//  1. flood the vacant ocean from the region boundary;
//  2. fail if the ocean reaches disk(inner_r);
//  3. flood H = non-ocean sites from the origin (the filled component H0);
//  4. hull-walk the outer boundary of H0; the loop winds once around 0.
// Sites outside the sample region count as vacant ocean.
inline FrontResult extract_front(const PercolationSample& sample, double inner_r,
                                 double outer_r = 0.0) {
    const Region& reg = sample.region();
    FrontResult result;
    if (!reg.contains({0, 0})) {
        throw std::invalid_argument("extract_front: region must contain the origin");
    }
    if (outer_r > 0.0) {
        if (inner_r >= outer_r) throw std::invalid_argument("extract_front: inner_r < outer_r");
        if (reg.kind() == Region::Kind::Disk && reg.params()[0] < outer_r) {
            throw std::invalid_argument("extract_front: sample does not cover disk(outer_r)");
        }
    }

    constexpr std::uint8_t kOcean = 1, kIsland = 2;
    std::vector<std::uint8_t> label(reg.size(), 0);
    std::vector<SitePos> stack;

    // Ocean seeds: vacant sites on the region hull (any neighbor missing).
    reg.for_each([&](SitePos z) {
        const auto i = reg.index_of(z);
        if (sample.occupied_at(i)) return;
        for (const SitePos& off : kNeighborOffsets) {
            if (!reg.contains(z + off)) {
                label[i] = kOcean;
                stack.push_back(z);
                return;
            }
        }
    });
    const double inner_sq = inner_r * inner_r;
    bool reached_core = false;
    while (!stack.empty()) {
        const SitePos z = stack.back();
        stack.pop_back();
        if (static_cast<double>(norm_sq(z)) <= inner_sq) reached_core = true;
        for (const SitePos& off : kNeighborOffsets) {
            const SitePos w = z + off;
            if (!reg.contains(w) || sample.occupied(w)) continue;
            auto& mark = label[reg.index_of(w)];
            if (mark == 0) {
                mark = kOcean;
                stack.push_back(w);
            }
        }
    }
    if (reached_core) {
        result.error = {FrontError::Kind::OceanReachedCore,
                        "ocean reaches disk(inner_r): no separating interface"};
        return result;
    }

    // Filled origin component H0 and its topmost site.
    SitePos top{0, 0};
    {
        const auto i0 = reg.index_of({0, 0});
        label[i0] = kIsland;
        stack.push_back({0, 0});
        while (!stack.empty()) {
            const SitePos z = stack.back();
            stack.pop_back();
            if (z.b > top.b || (z.b == top.b && z.a > top.a)) top = z;
            for (const SitePos& off : kNeighborOffsets) {
                const SitePos w = z + off;
                if (!reg.contains(w)) continue;
                auto& mark = label[reg.index_of(w)];
                if (mark == 0) {
                    mark = kIsland;
                    stack.push_back(w);
                }
            }
        }
    }

    // Hull walk with occupied sites on the right of the motion; starts on
    // the edge above the topmost island site, heading east.
    auto occupied = [&](SitePos z) { return sample.occupied(z); };
    const SitePos o0 = top;
    const SitePos v0 = top + SitePos{0, 1};
    const SitePos w0 = top + SitePos{1, 0};
    FrontCurve curve;
    SitePos o = o0, v = v0, w = w0;
    const std::uint64_t max_steps = 12 * reg.size() + 16;
    double radius_sum = 0.0;
    for (std::uint64_t step = 0;; ++step) {
        if (step > max_steps) {
            result.error = {FrontError::Kind::TracerFailed, "hull walk failed to close"};
            return result;
        }
        curve.edges.push_back({o, v});
        const Vec2 vertex = detail::face_centroid(o, v, w);
        curve.vertices.push_back(vertex);
        const double r = std::sqrt(vertex.x * vertex.x + vertex.y * vertex.y);
        radius_sum += r;
        if (step == 0) {
            curve.min_radius = curve.max_radius = r;
        } else {
            curve.min_radius = std::min(curve.min_radius, r);
            curve.max_radius = std::max(curve.max_radius, r);
        }
        SitePos no, nv, dropped;
        if (occupied(w)) {
            no = w;
            nv = v;
            dropped = o;
        } else {
            no = o;
            nv = w;
            dropped = v;
        }
        // The next triangle is the reflection of {o, v, w} through the new
        // edge, i.e. its third vertex is no + nv - dropped.
        w = no + nv - dropped;
        o = no;
        v = nv;
        if (o == o0 && v == v0 && w == w0) break;
    }
    curve.mean_radius = radius_sum / static_cast<double>(curve.vertices.size());

    // Winding around the origin: signed crossings of the positive x-axis.
    // Dual vertex ordinates are never 0 (their triple row sum is not 0 mod 3).
    int winding = 0;
    const std::size_t m = curve.vertices.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& p = curve.vertices[i];
        const Vec2& q = curve.vertices[(i + 1) % m];
        if ((p.y > 0) != (q.y > 0)) {
            const double x_cross = p.x + (q.x - p.x) * (0.0 - p.y) / (q.y - p.y);
            if (x_cross > 0) winding += q.y > p.y ? 1 : -1;
        }
    }
    curve.winding = winding;
    result.front = std::move(curve);
    return result;
}

struct FrontStatistics {
    std::int64_t length = 0;
    double max_outward = 0.0;  // max radius - r_star
    double max_inward = 0.0;   // r_star - min radius
    double mean_radius = 0.0;
};

inline FrontStatistics front_statistics(const FrontCurve& front, double r_star) {
    FrontStatistics s;
    s.length = static_cast<std::int64_t>(front.edges.size());
    s.max_outward = front.max_radius - r_star;
    s.max_inward = r_star - front.min_radius;
    s.mean_radius = front.mean_radius;
    return s;
}

// All dual edges in the mid annulus whose occupied endpoint connects to
// disk(inner_target_r) through occupied sites and whose vacant endpoint
// connects past disk(outer_target_r) through vacant sites. Two flood fills
// plus an edge scan; when the dense-phase event holds this is exactly the
// set of front edges in the annulus.
inline std::vector<InterfaceEdge> two_arm_edges(const PercolationSample& sample, double mid_r1,
                                                double mid_r2, double inner_target_r,
                                                double outer_target_r) {
    if (!(inner_target_r < mid_r1 && mid_r1 < mid_r2 && mid_r2 < outer_target_r)) {
        throw std::invalid_argument("two_arm_edges: need inner < mid annulus < outer");
    }
    const Region& reg = sample.region();
    constexpr std::uint8_t kToInner = 1, kToOuter = 2;
    std::vector<std::uint8_t> mark(reg.size(), 0);
    std::vector<SitePos> stack;

    const double inner_sq = inner_target_r * inner_target_r;
    const double outer_sq = outer_target_r * outer_target_r;
    reg.for_each([&](SitePos z) {
        const auto i = reg.index_of(z);
        const auto r2 = static_cast<double>(norm_sq(z));
        if (sample.occupied_at(i) && r2 <= inner_sq) {
            mark[i] = kToInner;
            stack.push_back(z);
        } else if (!sample.occupied_at(i) && r2 > outer_sq) {
            mark[i] = kToOuter;
            stack.push_back(z);
        }
    });
    while (!stack.empty()) {
        const SitePos z = stack.back();
        stack.pop_back();
        const auto mz = mark[reg.index_of(z)];
        for (const SitePos& off : kNeighborOffsets) {
            const SitePos w = z + off;
            if (!reg.contains(w)) continue;
            const auto iw = reg.index_of(w);
            if (mark[iw] != 0) continue;
            if (sample.occupied_at(iw) == (mz == kToInner)) {
                mark[iw] = mz;
                stack.push_back(w);
            }
        }
    }

    // Edge midpoint radius in the annulus: 4 |mid|^2 = |e(z) + e(w)|^2 is an
    // exact integer in axial coordinates.
    const double lo4 = 4.0 * mid_r1 * mid_r1, hi4 = 4.0 * mid_r2 * mid_r2;
    std::vector<InterfaceEdge> out;
    static constexpr std::array<SitePos, 3> kScanDirs = {SitePos{1, 0}, SitePos{0, 1},
                                                         SitePos{-1, 1}};
    reg.for_each([&](SitePos z) {
        for (const SitePos& d : kScanDirs) {
            const SitePos w = z + d;
            if (!reg.contains(w)) continue;
            const std::int64_t m4 = norm_sq(z) + norm_sq(w) + 2 * z.a * w.a + z.a * w.b +
                                    z.b * w.a + 2 * static_cast<std::int64_t>(z.b) * w.b;
            if (!(static_cast<double>(m4) > lo4 && static_cast<double>(m4) <= hi4)) continue;
            const auto iz = reg.index_of(z), iw = reg.index_of(w);
            if (mark[iz] == kToInner && mark[iw] == kToOuter) {
                out.push_back({z, w});
            } else if (mark[iw] == kToInner && mark[iz] == kToOuter) {
                out.push_back({w, z});
            }
        }
    });
    std::sort(out.begin(), out.end());
    return out;
}

// Dual edges of a front that lie in the mid annulus (same midpoint rule as
// two_arm_edges), canonically sorted for set comparison.
inline std::vector<InterfaceEdge> front_edges_in_annulus(const FrontCurve& front, double mid_r1,
                                                         double mid_r2) {
    const double lo4 = 4.0 * mid_r1 * mid_r1, hi4 = 4.0 * mid_r2 * mid_r2;
    std::vector<InterfaceEdge> out;
    for (const auto& e : front.edges) {
        const std::int64_t m4 = norm_sq(e.occ) + norm_sq(e.vac) + 2 * e.occ.a * e.vac.a +
                                e.occ.a * e.vac.b + e.occ.b * e.vac.a +
                                2 * static_cast<std::int64_t>(e.occ.b) * e.vac.b;
        if (static_cast<double>(m4) > lo4 && static_cast<double>(m4) <= hi4) out.push_back(e);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Box-counting dimension of a polyline: count boxes of side s touched by the
// curve, fit -slope of log count against log s. Scales must be strictly
// increasing, >= 4 of them, spanning at least a factor 4.
inline ScalingFit box_counting_dimension(const std::vector<Vec2>& points, bool closed,
                                         const std::vector<double>& scales) {
    if (points.size() < 2) throw std::invalid_argument("box_counting_dimension: degenerate curve");
    if (scales.size() < 4) throw std::invalid_argument("box_counting_dimension: needs >= 4 scales");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] <= 0 || (i > 0 && scales[i] <= scales[i - 1])) {
            throw std::invalid_argument("box_counting_dimension: scales must increase");
        }
    }
    if (scales.back() < 4.0 * scales.front()) {
        throw std::invalid_argument("box_counting_dimension: scales must span a factor >= 4");
    }
    std::vector<std::pair<double, double>> pts;
    const std::size_t segs = closed ? points.size() : points.size() - 1;
    for (double s : scales) {
        std::unordered_set<std::uint64_t> boxes;
        auto mark = [&](double x, double y) {
            const auto bx = static_cast<std::int64_t>(std::floor(x / s)) + (1 << 20);
            const auto by = static_cast<std::int64_t>(std::floor(y / s)) + (1 << 20);
            boxes.insert((static_cast<std::uint64_t>(bx) << 21) | static_cast<std::uint64_t>(by));
        };
        for (std::size_t i = 0; i < segs; ++i) {
            const Vec2& p = points[i];
            const Vec2& q = points[(i + 1) % points.size()];
            const double len = std::hypot(q.x - p.x, q.y - p.y);
            const int pieces = 1 + static_cast<int>(std::ceil(len / (0.5 * s)));
            for (int k = 0; k <= pieces; ++k) {
                const double f = static_cast<double>(k) / pieces;
                mark(p.x + f * (q.x - p.x), p.y + f * (q.y - p.y));
            }
        }
        pts.emplace_back(s, static_cast<double>(boxes.size()));
    }
    if (pts.back().second < 4.0) {
        throw std::invalid_argument("box_counting_dimension: curve covers fewer boxes than scales");
    }
    return fit_scaling(std::move(pts));
}

inline double dimension_from_fit(const ScalingFit& fit) { return -fit.slope; }

}  // namespace frontlab
