#pragma once

// Inhomogeneous Bernoulli site percolation on the triangular lattice:
// sampling, crossing events, the characteristic-length estimator L_eps(p),
// and the strip gradient model with its front.
//
// Conventions that make p_c = 1/2 arguments exact on this lattice:
//  - crossing "sides" of a parallelogram are the full site columns a = a1 and
//    a = a2 (horizontal), or the full rows b = b1 and b = b2 (vertical);
//  - vacant connectivity uses the same 6-neighbor adjacency as occupied
//    connectivity (site percolation on T is self-matching), so on a rhombus
//    an occupied horizontal crossing exists iff a vacant vertical crossing
//    does not.
//
// An "interface" is a curve on the dual hexagonal lattice bordered by
// occupied sites on one side and vacant sites on the other. Dual vertices
// are centroids of lattice triangles; the triangle {p, q, w} is keyed by the
// integer coordinate sums (p+q+w), which are unique per face.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "frontlab/lattice.hpp"
#include "frontlab/parallel.hpp"
#include "frontlab/rng.hpp"

namespace frontlab {

struct Provenance {
    enum class Kind { Bernoulli, FromOccupancy };
    Kind kind = Kind::Bernoulli;
    std::uint64_t seed = 0;
};

class PercolationSample {
  public:
    PercolationSample(Region region, std::vector<std::uint8> status, Provenance prov)
        : region_(std::move(region)), status_(std::move(status)), prov_(prov) {
        if (status_.size() != region_.size()) {
            throw std::invalid_argument("PercolationSample: status/region size mismatch");
        }
    }

    const Region& region() const { return region_; }
    const Provenance& provenance() const { return prov_; }

    bool occupied_at(std::uint64_t index) const { return status_[index] != 0; }
    bool occupied(SitePos z) const { return region_.contains(z) && status_[region_.index_of(z)] != 0; }

    std::uint64_t occupied_count() const {
        std::uint64_t n = 0;
        for (auto s : status_) n += s;
        return n;
    }

  private:
    Region region_;
    std::vector<std::uint8> status_;
    Provenance prov_;
};

// Independent per-site draws; the randomness is keyed by (seed, a, b), so a
// sample restricted to a sub-region is literally the sample of the
// sub-region, and worker count cannot matter.
inline PercolationSample sample_bernoulli(const std::function<double(SitePos)>& param,
                                          const Region& region, std::uint64_t seed) {
    std::vector<std::uint8> status(region.size(), 0);
    region.for_each([&](SitePos z) {
        const double p = param(z);
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("sample_bernoulli: p outside [0,1]");
        Rng rng(site_key(seed, z.a, z.b));
        status[region.index_of(z)] = rng.next_double() < p ? 1 : 0;
    });
    return PercolationSample(region, std::move(status), {Provenance::Kind::Bernoulli, seed});
}

enum class Direction { Horizontal, Vertical };
enum class Polarity { Occupied, Vacant };

// True iff a path of polarity-status sites joins the two opposite sides of
// the parallelogram, using full 6-neighbor adjacency. Flood fill from one
// side.
inline bool has_crossing(const PercolationSample& sample, std::int32_t a1, std::int32_t a2,
                         std::int32_t b1, std::int32_t b2, Direction dir, Polarity polarity) {
    if (a1 > a2 || b1 > b2) throw std::invalid_argument("has_crossing: bad parallelogram");
    const Region& reg = sample.region();
    auto inside = [&](SitePos z) { return z.a >= a1 && z.a <= a2 && z.b >= b1 && z.b <= b2; };
    if (reg.kind() == Region::Kind::Parallelogram) {
        const auto& p = reg.params();
        if (a1 < p[0] || a2 > p[1] || b1 < p[2] || b2 > p[3]) {
            throw std::invalid_argument("has_crossing: parallelogram not contained in region");
        }
    } else {
        bool ok = true;
        for (std::int32_t a = a1; ok && a <= a2; ++a) {
            for (std::int32_t b = b1; b <= b2; ++b) {
                if (!reg.contains({a, b})) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) throw std::invalid_argument("has_crossing: parallelogram not contained in region");
    }

    const std::int64_t width = b2 - b1 + 1;
    auto local = [&](SitePos z) { return (z.a - a1) * width + (z.b - b1); };
    auto wants = [&](SitePos z) {
        return sample.occupied(z) == (polarity == Polarity::Occupied);
    };
    std::vector<std::uint8> seen(static_cast<std::size_t>(a2 - a1 + 1) * width, 0);
    std::vector<SitePos> stack;
    if (dir == Direction::Horizontal) {
        for (std::int32_t b = b1; b <= b2; ++b) {
            if (wants({a1, b})) {
                seen[local({a1, b})] = 1;
                stack.push_back({a1, b});
            }
        }
    } else {
        for (std::int32_t a = a1; a <= a2; ++a) {
            if (wants({a, b1})) {
                seen[local({a, b1})] = 1;
                stack.push_back({a, b1});
            }
        }
    }
    while (!stack.empty()) {
        const SitePos z = stack.back();
        stack.pop_back();
        if (dir == Direction::Horizontal ? z.a == a2 : z.b == b2) return true;
        for (const SitePos& off : kNeighborOffsets) {
            const SitePos w = z + off;
            if (!inside(w)) continue;
            auto& mark = seen[local(w)];
            if (mark) continue;
            mark = 1;
            if (wants(w)) {
                stack.push_back(w);
            }
        }
    }
    return false;
}

struct CharLengthPoint {
    std::int32_t n = 0;
    double p_hat = 0.0;
    double upper95 = 0.0;  // Wilson upper bound at ~97.5%
};

struct CharLengthEstimate {
    double p = 0.0;
    double epsilon = 0.25;
    std::int64_t length = 0;
    bool infinite = false;
    std::int32_t samples_per_size = 0;
    std::vector<CharLengthPoint> curve;
};

namespace detail {

inline double wilson_upper(double p_hat, std::int64_t n) {
    const double z = 1.959963984540054;  // 97.5% normal quantile
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p_hat + z2 / (2.0 * n);
    const double rad = z * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n));
    return (center + rad) / denom;
}

}  // namespace detail

// L_eps(p): smallest rhombus size n at which the probability of an occupied
// horizontal crossing drops to eps (p < 1/2; vacant crossings for p > 1/2,
// which the occupied/vacant swap maps back to 1 - p with identical draws, so
// L(p) = L(1-p) holds exactly under matched seeds).
//
// The exact minimum over all integers is statistically meaningless at fixed
// sample counts, so n runs over a geometric mesh (ratio 1.25) and the
// estimate is the smallest tested n whose Wilson upper confidence bound
// falls below eps.
inline CharLengthEstimate estimate_characteristic_length(double p, double epsilon,
                                                         std::int32_t samples_per_size,
                                                         std::uint64_t seed,
                                                         std::int32_t n_cap = 4096,
                                                         int threads = 0) {
    if (samples_per_size < 1000) {
        throw std::invalid_argument("estimate_characteristic_length: needs >= 1000 samples per size");
    }
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("estimate_characteristic_length: p in (0,1)");
    CharLengthEstimate est;
    est.p = p;
    est.epsilon = epsilon;
    est.samples_per_size = samples_per_size;
    if (p == 0.5) {
        est.infinite = true;
        est.length = std::numeric_limits<std::int64_t>::max();
        return est;
    }
    if (threads <= 0) threads = default_thread_count();
    const double eff_p = std::min(p, 1.0 - p);

    std::int32_t n = 2;
    while (n <= n_cap) {
        std::vector<std::uint8> crossed(samples_per_size, 0);
        parallel_for(samples_per_size, threads, [&](std::int64_t rep) {
            const std::uint64_t s = derive_key(derive_key(seed, static_cast<std::uint64_t>(n)),
                                               static_cast<std::uint64_t>(rep));
            auto sample = sample_bernoulli([eff_p](SitePos) { return eff_p; },
                                           Region::parallelogram(0, n, 0, n), s);
            crossed[rep] =
                has_crossing(sample, 0, n, 0, n, Direction::Horizontal, Polarity::Occupied) ? 1 : 0;
        });
        std::int64_t k = 0;
        for (auto c : crossed) k += c;
        const double p_hat = static_cast<double>(k) / samples_per_size;
        const double upper = detail::wilson_upper(p_hat, samples_per_size);
        est.curve.push_back({n, p_hat, upper});
        if (upper <= epsilon) {
            est.length = n;
            return est;
        }
        n = std::max(n + 1, static_cast<std::int32_t>(std::lround(n * 1.25)));
    }
    est.infinite = true;
    est.length = std::numeric_limits<std::int64_t>::max();
    return est;
}

// Strip gradient percolation: parallelogram [0, ell] x [0, N] with
// p(y) = 1 - y/N. Row 0 is deterministically occupied, row N vacant.
inline PercolationSample strip_gradient_sample(std::int32_t n_gradient, std::int32_t ell,
                                               std::uint64_t seed) {
    if (n_gradient < 4 || ell < 1) throw std::invalid_argument("strip_gradient_sample: N >= 4, ell >= 1");
    const double nn = n_gradient;
    return sample_bernoulli([nn](SitePos z) { return 1.0 - static_cast<double>(z.b) / nn; },
                            Region::strip(ell, n_gradient), seed);
}

// ---- dual-lattice plumbing -------------------------------------------------

// A front edge: primal pair with the occupied site first.
struct InterfaceEdge {
    SitePos occ;
    SitePos vac;

    friend bool operator==(const InterfaceEdge& x, const InterfaceEdge& y) {
        return x.occ == y.occ && x.vac == y.vac;
    }
    friend bool operator<(const InterfaceEdge& x, const InterfaceEdge& y) {
        return x.occ != y.occ ? x.occ < y.occ : x.vac < y.vac;
    }
};

namespace detail {

// The two triangles containing edge {p, q} have third vertices
// p + rot(-60)(q-p) and p + rot(+60)(q-p).
inline std::array<SitePos, 2> edge_thirds(SitePos p, SitePos q) {
    const SitePos d = q - p;
    return {p + SitePos{d.a + d.b, -d.a}, p + SitePos{-d.b, d.a + d.b}};
}

// Faces are keyed by coordinate sums; offsets keep the packed key positive.
inline std::uint64_t face_key(SitePos p, SitePos q, SitePos w) {
    const std::int64_t sa = static_cast<std::int64_t>(p.a) + q.a + w.a + (3u << 20);
    const std::int64_t sb = static_cast<std::int64_t>(p.b) + q.b + w.b + (3u << 20);
    return (static_cast<std::uint64_t>(sa) << 23) | static_cast<std::uint64_t>(sb);
}

inline Vec2 face_centroid(SitePos p, SitePos q, SitePos w) {
    const double sa = (static_cast<double>(p.a) + q.a + w.a) / 3.0;
    const double sb = (static_cast<double>(p.b) + q.b + w.b) / 3.0;
    return {sa + 0.5 * sb, 0.5 * kSqrt3 * sb};
}

// Row coordinate (in lattice rows, i.e. units of b) of a face centroid.
inline double face_row(SitePos p, SitePos q, SitePos w) {
    return (static_cast<double>(p.b) + q.b + w.b) / 3.0;
}

}  // namespace detail

struct StripFront {
    bool found = false;
    std::string diagnostic;
    std::vector<InterfaceEdge> edges;     // the spanning path, ordered left to right
    std::vector<Vec2> vertices;           // dual vertices along the path
    std::int64_t length = 0;              // number of dual edges
    double max_deviation = 0.0;           // max |row - N/2| over dual vertices
    bool unique_front = true;             // exactly one spanning interface
    std::int32_t secondary_arcs = 0;      // non-spanning interface pieces
};

// The front of a strip sample: the interface between the phase attached to
// the bottom side and the vacant phase attached to the top side, as a dual
// path spanning the strip left to right.
//
// Implementation: flood the "ocean" (vacant sites connected to the top row)
// and the bottom phase (complement component of the bottom row); collect all
// dual edges separating them. Interior dual vertices carry exactly zero or
// two such edges, so the set decomposes into boundary-to-boundary paths; the
// front is the unique path with one end on each vertical side.
inline StripFront strip_front(const PercolationSample& sample) {
    const Region& reg = sample.region();
    if (reg.kind() != Region::Kind::Parallelogram) {
        throw std::invalid_argument("strip_front: sample region must be a parallelogram");
    }
    const auto a1 = static_cast<std::int32_t>(reg.params()[0]);
    const auto a2 = static_cast<std::int32_t>(reg.params()[1]);
    const auto b1 = static_cast<std::int32_t>(reg.params()[2]);
    const auto b2 = static_cast<std::int32_t>(reg.params()[3]);
    const double mid_row = 0.5 * (static_cast<double>(b1) + b2);

    StripFront out;
    constexpr std::uint8_t kOcean = 1, kBottom = 2;
    std::vector<std::uint8> label(reg.size(), 0);
    std::vector<SitePos> stack;

    // Ocean: vacant flood from the top row.
    for (std::int32_t a = a1; a <= a2; ++a) {
        const SitePos z{a, b2};
        if (!sample.occupied(z)) {
            label[reg.index_of(z)] = kOcean;
            stack.push_back(z);
        }
    }
    while (!stack.empty()) {
        const SitePos z = stack.back();
        stack.pop_back();
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
    for (std::int32_t a = a1; a <= a2; ++a) {
        if (label[reg.index_of({a, b1})] == kOcean) {
            out.diagnostic = "no spanning interface: a vacant crossing joins top and bottom";
            return out;
        }
    }

    // Bottom phase: non-ocean flood from the bottom row.
    for (std::int32_t a = a1; a <= a2; ++a) {
        const SitePos z{a, b1};
        label[reg.index_of(z)] = kBottom;
        stack.push_back(z);
    }
    while (!stack.empty()) {
        const SitePos z = stack.back();
        stack.pop_back();
        for (const SitePos& off : kNeighborOffsets) {
            const SitePos w = z + off;
            if (!reg.contains(w)) continue;
            auto& mark = label[reg.index_of(w)];
            if (mark == 0) {
                mark = kBottom;
                stack.push_back(w);
            }
        }
    }

    // Interface edges between the bottom phase (occupied side) and the ocean.
    std::vector<InterfaceEdge> edges;
    static constexpr std::array<SitePos, 3> kScanDirs = {SitePos{1, 0}, SitePos{0, 1},
                                                         SitePos{-1, 1}};
    reg.for_each([&](SitePos z) {
        for (const SitePos& d : kScanDirs) {
            const SitePos w = z + d;
            if (!reg.contains(w)) continue;
            const auto lz = label[reg.index_of(z)];
            const auto lw = label[reg.index_of(w)];
            if (lz == kBottom && lw == kOcean && sample.occupied(z)) {
                edges.push_back({z, w});
            } else if (lw == kBottom && lz == kOcean && sample.occupied(w)) {
                edges.push_back({w, z});
            }
        }
    });
    if (edges.empty()) {
        out.diagnostic = "no spanning interface: top phase never meets the bottom phase";
        return out;
    }

    // Dual-vertex incidence. A face is traversable iff its three sites are
    // inside the strip; an edge with an outside face is a path endpoint.
    enum Side : std::uint8 { kNone = 0, kLeft, kRight, kBottomSide, kTopSide };
    auto face_side = [&](SitePos w) -> Side {
        if (w.a < a1) return kLeft;
        if (w.a > a2) return kRight;
        if (w.b < b1) return kBottomSide;
        if (w.b > b2) return kTopSide;
        return kNone;
    };
    std::unordered_map<std::uint64_t, std::pair<std::int32_t, std::int32_t>> incidence;
    incidence.reserve(edges.size() * 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (const SitePos& w : detail::edge_thirds(edges[i].occ, edges[i].vac)) {
            if (face_side(w) != kNone) continue;
            auto [it, fresh] = incidence.try_emplace(detail::face_key(edges[i].occ, edges[i].vac, w),
                                                     std::pair<std::int32_t, std::int32_t>{-1, -1});
            auto& slot = it->second;
            (slot.first < 0 ? slot.first : slot.second) = static_cast<std::int32_t>(i);
        }
    }

    // Walk each path from its endpoint edges.
    std::vector<std::uint8> visited(edges.size(), 0);
    std::int32_t spanning_count = 0;
    for (std::size_t start = 0; start < edges.size(); ++start) {
        if (visited[start]) continue;
        std::array<Side, 2> end_sides{kNone, kNone};
        int n_invalid = 0;
        for (const SitePos& w : detail::edge_thirds(edges[start].occ, edges[start].vac)) {
            const Side s = face_side(w);
            if (s != kNone) end_sides[n_invalid++] = s;
        }
        if (n_invalid == 0) continue;  // interior of some path; reached from an endpoint

        std::vector<std::int32_t> path;
        std::vector<Vec2> verts;
        double max_dev = 0.0;
        Side other_end = kNone;
        std::int32_t cur = static_cast<std::int32_t>(start);
        // Enter through the first invalid face; traverse valid faces onward.
        const auto start_thirds = detail::edge_thirds(edges[start].occ, edges[start].vac);
        SitePos avoid = face_side(start_thirds[0]) != kNone ? start_thirds[0] : start_thirds[1];
        for (;;) {
            visited[cur] = 1;
            path.push_back(cur);
            const auto thirds = detail::edge_thirds(edges[cur].occ, edges[cur].vac);
            const SitePos next_third = thirds[0] == avoid ? thirds[1] : thirds[0];
            const Side s = face_side(next_third);
            if (s != kNone) {
                other_end = s;
                break;
            }
            verts.push_back(detail::face_centroid(edges[cur].occ, edges[cur].vac, next_third));
            max_dev = std::max(
                max_dev, std::fabs(detail::face_row(edges[cur].occ, edges[cur].vac, next_third) -
                                   mid_row));
            const std::uint64_t shared =
                detail::face_key(edges[cur].occ, edges[cur].vac, next_third);
            const auto& slot = incidence.find(shared)->second;
            const std::int32_t next = slot.first == cur ? slot.second : slot.first;
            if (next < 0) {
                // Interior dual vertices carry 0 or 2 interface edges; a dead
                // end here means the labelling is inconsistent.
                throw std::logic_error("strip_front: interface path ended at an interior vertex");
            }
            // Relative to the next edge, the shared face is whichever of its
            // thirds reproduces the face key.
            const auto nt = detail::edge_thirds(edges[next].occ, edges[next].vac);
            avoid = detail::face_key(edges[next].occ, edges[next].vac, nt[0]) == shared ? nt[0]
                                                                                        : nt[1];
            cur = next;
        }

        const Side first_end = end_sides[0];
        const bool spans = (first_end == kLeft && other_end == kRight) ||
                           (first_end == kRight && other_end == kLeft);
        if (!spans) {
            ++out.secondary_arcs;
            continue;
        }
        ++spanning_count;
        if (spanning_count > 1) continue;

        // Orient left to right.
        if (first_end == kRight) {
            std::reverse(path.begin(), path.end());
            std::reverse(verts.begin(), verts.end());
        }
        out.edges.reserve(path.size());
        for (std::int32_t i : path) out.edges.push_back(edges[i]);
        out.vertices = std::move(verts);
        out.max_deviation = max_dev;
        out.length = static_cast<std::int64_t>(out.edges.size());
        out.found = true;
    }

    if (!out.found) {
        out.diagnostic = "no spanning interface found among interface paths";
        return out;
    }
    // Uniqueness in the sense of the front: exactly one spanning interface.
    // Non-spanning arcs are reported separately.
    out.unique_front = (spanning_count == 1);
    return out;
}

}  // namespace frontlab
