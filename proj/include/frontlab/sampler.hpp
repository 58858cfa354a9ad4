#pragma once

// Stochastic engines producing occupancy fields.
//
//   simulate_particles   n independent walkers started at the origin,
//                        stepped with uniform 6-neighbor moves
//   sample_poisson_field independent Poisson(n pi_t(z)) counts per site
//   simulate_source      fresh Poisson(mu) arrivals at the origin each step
//   chen_stein_bound     pi_t(A): the total-variation price of swapping the
//                        exact-n configuration on A for the Poissonian one
//   occupancy_to_percolation   counts >= 1 becomes occupied
//
// Randomness discipline (see rng.hpp): walkers draw from streams keyed by
// their global index, sites from streams keyed by (a, b). Fields are
// bit-identical for any thread count, and engines parallelize over particle
// blocks or site chunks.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "frontlab/lattice.hpp"
#include "frontlab/occupation.hpp"
#include "frontlab/parallel.hpp"
#include "frontlab/percolation.hpp"
#include "frontlab/rng.hpp"
#include "frontlab/walk_kernel.hpp"

namespace frontlab {

enum class FieldMode { ExactN, PoissonField, Source };
enum class KernelMode { Exact, Lclt };

struct OccupancyField {
    FieldMode mode = FieldMode::ExactN;
    std::int64_t n = 0;    // walkers (exact-n)
    double mu = 0.0;       // arrival rate (source)
    std::int64_t t = 0;
    std::uint64_t seed = 0;
    std::unordered_map<SitePos, std::uint32_t, SitePosHash> counts;
    std::int64_t total = 0;
    double cutoff_loss = 0.0;  // expected particles dropped by the lclt hard cutoff

    std::uint32_t count_at(SitePos z) const {
        const auto it = counts.find(z);
        return it == counts.end() ? 0u : it->second;
    }
};

namespace detail {

inline constexpr std::int64_t kParticleBlock = 8192;
// Sub-stream tags (arbitrary distinct constants).
inline constexpr std::uint64_t kTagParticles = 0x7061727469636c65ull;
inline constexpr std::uint64_t kTagBirths = 0x6269727468737465ull;

struct BlockCounts {
    std::vector<std::unordered_map<SitePos, std::uint32_t, SitePosHash>> per_snapshot;
};

}  // namespace detail

inline constexpr std::int64_t kDefaultWalkTimeCap = 20'000'000;

// n walkers, fields emitted at each snapshot time. Positions are stored per
// particle (Theta(n) memory); cost is Theta(n) per unit time.
inline std::vector<OccupancyField> simulate_particles(std::int64_t n,
                                                      const std::vector<std::int64_t>& snapshots,
                                                      std::uint64_t seed, int threads = 0,
                                                      std::int64_t time_cap = kDefaultWalkTimeCap) {
    if (n < 1) throw std::invalid_argument("simulate_particles: n >= 1");
    if (snapshots.empty() || !std::is_sorted(snapshots.begin(), snapshots.end()) ||
        snapshots.front() < 0) {
        throw std::invalid_argument("simulate_particles: snapshots must be sorted and >= 0");
    }
    if (snapshots.back() > time_cap) {
        throw resource_error("simulate_particles: max snapshot exceeds time cap");
    }
    if (threads <= 0) threads = default_thread_count();

    const std::uint64_t particle_base = derive_key(seed, detail::kTagParticles);
    const std::int64_t t_max = snapshots.back();
    const std::int64_t blocks = (n + detail::kParticleBlock - 1) / detail::kParticleBlock;
    std::vector<detail::BlockCounts> block_results(blocks);

    parallel_for(blocks, threads, [&](std::int64_t blk) {
        auto& result = block_results[blk].per_snapshot;
        result.resize(snapshots.size());
        const std::int64_t lo = blk * detail::kParticleBlock;
        const std::int64_t hi = std::min(n, lo + detail::kParticleBlock);
        for (std::int64_t p = lo; p < hi; ++p) {
            Rng rng(derive_key(particle_base, static_cast<std::uint64_t>(p)));
            SitePos z{0, 0};
            std::int64_t at = 0;
            for (std::size_t s = 0; s < snapshots.size(); ++s) {
                for (std::int64_t k = snapshots[s] - at; k > 0; --k) {
                    z = z + kNeighborOffsets[rng.next_below(6)];
                }
                at = snapshots[s];
                ++result[s][z];
            }
        }
    });

    std::vector<OccupancyField> out(snapshots.size());
    for (std::size_t s = 0; s < snapshots.size(); ++s) {
        out[s].mode = FieldMode::ExactN;
        out[s].n = n;
        out[s].t = snapshots[s];
        out[s].seed = seed;
        for (auto& blk : block_results) {
            for (const auto& [site, c] : blk.per_snapshot[s]) out[s].counts[site] += c;
        }
        out[s].total = n;
    }
    return out;
}

// Poisson(mu) arrivals at the origin at every time 0..t (snapshot at t sees
// batch ages 0..t), then independent walks; deterministic given the seed.
inline std::vector<OccupancyField> simulate_source(double mu,
                                                   const std::vector<std::int64_t>& snapshots,
                                                   std::uint64_t seed, int threads = 0,
                                                   std::int64_t time_cap = kDefaultWalkTimeCap) {
    if (mu <= 0) throw std::invalid_argument("simulate_source: mu > 0");
    if (snapshots.empty() || !std::is_sorted(snapshots.begin(), snapshots.end()) ||
        snapshots.front() < 0) {
        throw std::invalid_argument("simulate_source: snapshots must be sorted and >= 0");
    }
    if (snapshots.back() > time_cap) {
        throw resource_error("simulate_source: max snapshot exceeds time cap");
    }
    if (threads <= 0) threads = default_thread_count();
    const std::int64_t t_max = snapshots.back();

    // Batch sizes come from a dedicated stream so they are independent of
    // how particles are later distributed over workers.
    Rng births(derive_key(seed, detail::kTagBirths));
    std::vector<std::int64_t> batch(t_max + 1);
    std::vector<std::int64_t> first_index(t_max + 2, 0);
    for (std::int64_t u = 0; u <= t_max; ++u) {
        batch[u] = static_cast<std::int64_t>(births.next_poisson(mu));
        first_index[u + 1] = first_index[u] + batch[u];
    }
    const std::int64_t n_total = first_index[t_max + 1];

    const std::uint64_t particle_base = derive_key(seed, detail::kTagParticles);
    const std::int64_t blocks = (n_total + detail::kParticleBlock - 1) / detail::kParticleBlock;
    std::vector<detail::BlockCounts> block_results(std::max<std::int64_t>(blocks, 1));

    parallel_for(std::max<std::int64_t>(blocks, 1), threads, [&](std::int64_t blk) {
        auto& result = block_results[blk].per_snapshot;
        result.resize(snapshots.size());
        const std::int64_t lo = blk * detail::kParticleBlock;
        const std::int64_t hi = std::min(n_total, lo + detail::kParticleBlock);
        for (std::int64_t p = lo; p < hi; ++p) {
            const auto born_it = std::upper_bound(first_index.begin(), first_index.end(), p);
            const std::int64_t born = (born_it - first_index.begin()) - 1;
            Rng rng(derive_key(particle_base, static_cast<std::uint64_t>(p)));
            SitePos z{0, 0};
            std::int64_t at = born;
            for (std::size_t s = 0; s < snapshots.size(); ++s) {
                if (snapshots[s] < born) continue;
                for (std::int64_t k = snapshots[s] - at; k > 0; --k) {
                    z = z + kNeighborOffsets[rng.next_below(6)];
                }
                at = snapshots[s];
                ++result[s][z];
            }
        }
    });

    std::vector<OccupancyField> out(snapshots.size());
    for (std::size_t s = 0; s < snapshots.size(); ++s) {
        out[s].mode = FieldMode::Source;
        out[s].mu = mu;
        out[s].t = snapshots[s];
        out[s].seed = seed;
        for (auto& blk : block_results) {
            for (const auto& [site, c] : blk.per_snapshot[s]) out[s].counts[site] += c;
        }
        out[s].total = first_index[snapshots[s] + 1];
    }
    return out;
}

// Cutoff radius beyond which the lclt field engine treats expected counts
// (bounded by the Hoeffding envelope) as hard zeros: fewer than 1e-3
// particles expected per site.
inline double lclt_cutoff_radius(double n, double t, double hoeffding_c) {
    return std::sqrt(std::max(0.0, 2.0 * t * std::log(n * hoeffding_c * 1e3)));
}

// Independent Poisson(n pi_t(z)) counts on the region. kernel_mode Exact uses
// a convolved kernel (within the convolution cap; pass one in to reuse it),
// kernel_mode Lclt substitutes pi_bar_t(||z||) with a hard zero beyond
// lclt_cutoff_radius, enabling t far past the cap; the expected count lost
// to the cutoff is recorded in the field.
inline OccupancyField sample_poisson_field(std::int64_t n, std::int64_t t, const Region& region,
                                           KernelMode kernel_mode, std::uint64_t seed,
                                           const WalkField* kernel = nullptr, int threads = 0) {
    if (n < 1 || t < 0) throw std::invalid_argument("sample_poisson_field: n >= 1, t >= 0");
    if (threads <= 0) threads = default_thread_count();
    std::unique_ptr<WalkField> owned;
    if (kernel_mode == KernelMode::Exact && kernel == nullptr) {
        owned = std::make_unique<WalkField>(exact_distribution(static_cast<std::int32_t>(t)));
        kernel = owned.get();
    }
    const double nn = static_cast<double>(n);
    const double cutoff_sq = [&] {
        const double r = lclt_cutoff_radius(nn, static_cast<double>(t), calibration::kHoeffdingC);
        return r * r;
    }();

    OccupancyField field;
    field.mode = FieldMode::PoissonField;
    field.n = n;
    field.t = t;
    field.seed = seed;

    const auto& spans = region.spans();
    std::vector<std::vector<std::pair<SitePos, std::uint32_t>>> chunk_hits(spans.size());
    parallel_chunks(static_cast<std::int64_t>(spans.size()), threads,
                    [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t si = lo; si < hi; ++si) {
            const auto& sp = spans[si];
            auto& hits = chunk_hits[si];
            for (std::int32_t b = sp.b_lo; b <= sp.b_hi; ++b) {
                const SitePos z{sp.a, b};
                double mean;
                if (kernel_mode == KernelMode::Exact) {
                    mean = nn * kernel->value(z);
                } else {
                    const auto r2 = static_cast<double>(norm_sq(z));
                    mean = (t >= 1 && r2 <= cutoff_sq) ? nn * lclt_density(t, std::sqrt(r2)) : 0.0;
                }
                if (mean <= 0.0) continue;
                Rng rng(site_key(seed, z.a, z.b));
                const auto c = rng.next_poisson(mean);
                if (c > 0) hits.emplace_back(z, static_cast<std::uint32_t>(c));
            }
        }
    });
    for (auto& hits : chunk_hits) {
        for (const auto& [site, c] : hits) {
            field.counts.emplace(site, c);
            field.total += c;
        }
    }
    if (kernel_mode == KernelMode::Lclt && t >= 1) {
        // Expected counts the untruncated field would put past the cutoff:
        // n * integral of pi_bar over the exterior (site density 2/sqrt(3))
        // collapses to n * exp(-r_cut^2 / t).
        const double tt = static_cast<double>(t);
        field.cutoff_loss = nn * std::exp(-cutoff_sq / tt);
    }
    return field;
}

// pi_t(A) for a finite region, from an exact kernel. By Chen-Stein, the
// exact-n configuration restricted to A couples with the Poisson-field
// configuration except with probability at most this value.
inline double chen_stein_bound(const WalkField& kernel, const Region& region) {
    double sum = 0.0, carry = 0.0;
    region.for_each([&](SitePos z) {
        const double y = kernel.value(z) - carry;
        const double s = sum + y;
        carry = (s - sum) - y;
        sum = s;
    });
    return std::min(1.0, sum);
}

// Same sum with the LCLT density instead of the exact kernel: an estimate
// (relative error O(t^{-3/4}) inside the validity disk, negligible absolute
// contribution beyond), for times past the convolution cap.
inline double chen_stein_bound_lclt(std::int64_t t, const Region& region) {
    double sum = 0.0;
    region.for_each([&](SitePos z) { sum += lclt_density(t, norm(z)); });
    return std::min(1.0, sum);
}

// Site occupied iff it holds at least one particle, restricted to region.
inline PercolationSample occupancy_to_percolation(const OccupancyField& field,
                                                  const Region& region) {
    std::vector<std::uint8_t> status(region.size(), 0);
    for (const auto& [site, c] : field.counts) {
        if (c > 0 && region.contains(site)) status[region.index_of(site)] = 1;
    }
    return PercolationSample(region, std::move(status),
                             {Provenance::Kind::FromOccupancy, field.seed});
}

}  // namespace frontlab
