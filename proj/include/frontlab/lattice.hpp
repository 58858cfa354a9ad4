#pragma once

// Triangular-lattice geometry in axial integer coordinates (a, b), i.e. the
// site a + b*e^{i pi/3} in the complex plane. Adjacency, norms and region
// constructors shared by every other header.
//
// The square-lattice embedding x + e^{i pi/3} y -> x + i y (NW-SE diagonals
// added on every face of Z^2) is a useful mental picture for why results
// transfer from Z^2, but all computations here stay in axial coordinates:
// integer arithmetic gives exact adjacency and hashing.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace frontlab {

struct SitePos {
    std::int32_t a = 0;
    std::int32_t b = 0;

    friend bool operator==(SitePos lhs, SitePos rhs) { return lhs.a == rhs.a && lhs.b == rhs.b; }
    friend bool operator!=(SitePos lhs, SitePos rhs) { return !(lhs == rhs); }
    friend bool operator<(SitePos lhs, SitePos rhs) {
        return lhs.a != rhs.a ? lhs.a < rhs.a : lhs.b < rhs.b;
    }
    friend SitePos operator+(SitePos lhs, SitePos rhs) {
        return {lhs.a + rhs.a, lhs.b + rhs.b};
    }
    friend SitePos operator-(SitePos lhs, SitePos rhs) {
        return {lhs.a - rhs.a, lhs.b - rhs.b};
    }
};

struct SitePosHash {
    std::size_t operator()(SitePos z) const {
        std::uint64_t k = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(z.a)) << 32) |
                          static_cast<std::uint32_t>(z.b);
        k = (k ^ (k >> 30)) * 0xBF58476D1CE4E5B9ull;
        k = (k ^ (k >> 27)) * 0x94D049BB133111EBull;
        return static_cast<std::size_t>(k ^ (k >> 31));
    }
};

// The six neighbor offsets in counterclockwise order starting at angle 0.
inline constexpr std::array<SitePos, 6> kNeighborOffsets = {
    SitePos{1, 0}, SitePos{0, 1}, SitePos{-1, 1},
    SitePos{-1, 0}, SitePos{0, -1}, SitePos{1, -1}};

inline std::array<SitePos, 6> neighbors(SitePos z) {
    std::array<SitePos, 6> out;
    for (int i = 0; i < 6; ++i) out[i] = z + kNeighborOffsets[i];
    return out;
}

inline std::int64_t norm_sq(SitePos z) {
    const std::int64_t a = z.a, b = z.b;
    return a * a + a * b + b * b;
}

inline double norm(SitePos z) { return std::sqrt(static_cast<double>(norm_sq(z))); }

// Graph distance; equals (|a| + |b| + |a+b|) / 2.
inline std::int64_t hex_distance(SitePos z, SitePos w) {
    const std::int64_t da = z.a - w.a, db = z.b - w.b;
    return (std::llabs(da) + std::llabs(db) + std::llabs(da + db)) / 2;
}

// Rotation by -60 degrees; applying it six times is the identity.
inline SitePos rotate60(SitePos z) { return {z.a + z.b, -z.a}; }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline constexpr double kSqrt3 = 1.7320508075688772935;

// Euclidean embedding of a site: (a + b/2, b*sqrt(3)/2).
inline Vec2 embed(SitePos z) {
    return {z.a + 0.5 * z.b, 0.5 * kSqrt3 * z.b};
}

// Nearest lattice site to a point of the plane (cube rounding).
inline SitePos nearest_site(double x, double y) {
    const double bf = y / (0.5 * kSqrt3);
    const double af = x - 0.5 * bf;
    const double cf = -af - bf;
    double ra = std::round(af), rb = std::round(bf), rc = std::round(cf);
    const double da = std::fabs(ra - af), db = std::fabs(rb - bf), dc = std::fabs(rc - cf);
    if (da > db && da > dc) {
        ra = -rb - rc;
    } else if (db > dc) {
        rb = -ra - rc;
    }
    return {static_cast<std::int32_t>(ra), static_cast<std::int32_t>(rb)};
}

// A finite site set with deterministic lexicographic-(a, b) enumeration.
// Disks are {norm <= r}, annuli are {r < norm <= r'}. Per fixed a the b
// values covered form at most two contiguous spans, which makes membership
// and indexing O(1).
class Region {
  public:
    enum class Kind { Parallelogram, Disk, Annulus };

    struct Span {
        std::int32_t a;
        std::int32_t b_lo;
        std::int32_t b_hi;  // inclusive
        std::uint64_t offset;
    };

    static Region parallelogram(std::int32_t a1, std::int32_t a2, std::int32_t b1,
                                std::int32_t b2) {
        if (a1 > a2 || b1 > b2) throw std::invalid_argument("parallelogram: empty corner order");
        Region r;
        r.kind_ = Kind::Parallelogram;
        r.params_ = {static_cast<double>(a1), static_cast<double>(a2), static_cast<double>(b1),
                     static_cast<double>(b2)};
        for (std::int32_t a = a1; a <= a2; ++a) r.push_span(a, b1, b2);
        r.finish();
        return r;
    }

    // Strip [0, ell] x [0, height] used by the gradient model.
    static Region strip(std::int32_t ell, std::int32_t height) {
        return parallelogram(0, ell, 0, height);
    }

    static Region disk(double radius) {
        if (radius < 0) throw std::invalid_argument("disk: negative radius");
        Region r;
        r.kind_ = Kind::Disk;
        r.params_ = {radius};
        const double r2 = radius * radius;
        const auto a_max = static_cast<std::int32_t>(std::floor(2.0 * radius / kSqrt3)) + 1;
        for (std::int32_t a = -a_max; a <= a_max; ++a) {
            auto [lo, hi] = b_interval(a, r2);
            if (lo <= hi) r.push_span(a, lo, hi);
        }
        r.finish();
        return r;
    }

    static Region annulus(double inner, double outer) {
        if (inner < 0) throw std::invalid_argument("annulus: negative radius");
        if (inner >= outer) throw std::invalid_argument("annulus: requires inner < outer");
        Region r;
        r.kind_ = Kind::Annulus;
        r.params_ = {inner, outer};
        const double ri2 = inner * inner, ro2 = outer * outer;
        const auto a_max = static_cast<std::int32_t>(std::floor(2.0 * outer / kSqrt3)) + 1;
        for (std::int32_t a = -a_max; a <= a_max; ++a) {
            auto [lo, hi] = b_interval(a, ro2);
            if (lo > hi) continue;
            auto [ilo, ihi] = b_interval(a, ri2);
            if (ilo > ihi) {
                r.push_span(a, lo, hi);
            } else {
                if (lo <= ilo - 1) r.push_span(a, lo, ilo - 1);
                if (ihi + 1 <= hi) r.push_span(a, ihi + 1, hi);
            }
        }
        r.finish();
        return r;
    }

    Kind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    std::uint64_t size() const { return size_; }
    const std::vector<Span>& spans() const { return spans_; }

    std::int32_t a_min() const { return a_min_; }
    std::int32_t a_max() const { return a_max_; }
    std::int32_t b_min() const { return b_min_; }
    std::int32_t b_max() const { return b_max_; }

    bool contains(SitePos z) const {
        if (z.a < a_min_ || z.a > a_max_) return false;
        for (std::uint32_t i = row_begin_[z.a - a_min_]; i < row_begin_[z.a - a_min_ + 1]; ++i) {
            if (z.b >= spans_[i].b_lo && z.b <= spans_[i].b_hi) return true;
        }
        return false;
    }

    // Dense index in enumeration order; the site must belong to the region.
    std::uint64_t index_of(SitePos z) const {
        for (std::uint32_t i = row_begin_[z.a - a_min_]; i < row_begin_[z.a - a_min_ + 1]; ++i) {
            if (z.b >= spans_[i].b_lo && z.b <= spans_[i].b_hi) {
                return spans_[i].offset + static_cast<std::uint64_t>(z.b - spans_[i].b_lo);
            }
        }
        throw std::invalid_argument("index_of: site outside region");
    }

    SitePos site_at(std::uint64_t index) const {
        std::size_t lo = 0, hi = spans_.size();
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (spans_[mid].offset <= index ? lo : hi) = mid;
        }
        const Span& s = spans_[lo];
        return {s.a, static_cast<std::int32_t>(s.b_lo + (index - s.offset))};
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (const Span& s : spans_) {
            for (std::int32_t b = s.b_lo; b <= s.b_hi; ++b) fn(SitePos{s.a, b});
        }
    }

  private:
    // b-range of {norm_sq <= r2} at fixed a, with boundary correction so the
    // result is exact regardless of sqrt rounding.
    static std::pair<std::int32_t, std::int32_t> b_interval(std::int32_t a, double r2) {
        const double disc = 4.0 * r2 - 3.0 * static_cast<double>(a) * a;
        if (disc < 0) return {1, 0};
        const double s = std::sqrt(disc);
        auto lo = static_cast<std::int32_t>(std::ceil((-a - s) / 2.0));
        auto hi = static_cast<std::int32_t>(std::floor((-a + s) / 2.0));
        while (lo <= hi && static_cast<double>(norm_sq({a, lo})) > r2) ++lo;
        while (static_cast<double>(norm_sq({a, lo - 1})) <= r2) --lo;
        while (lo <= hi && static_cast<double>(norm_sq({a, hi})) > r2) --hi;
        while (static_cast<double>(norm_sq({a, hi + 1})) <= r2) ++hi;
        return {lo, hi};
    }

    void push_span(std::int32_t a, std::int32_t b_lo, std::int32_t b_hi) {
        spans_.push_back({a, b_lo, b_hi, size_});
        size_ += static_cast<std::uint64_t>(b_hi - b_lo + 1);
        b_min_ = std::min(b_min_, b_lo);
        b_max_ = std::max(b_max_, b_hi);
    }

    void finish() {
        if (spans_.empty()) {
            a_min_ = 0;
            a_max_ = -1;
            b_min_ = 0;
            b_max_ = -1;
            row_begin_ = {0, 0};
            return;
        }
        a_min_ = spans_.front().a;
        a_max_ = spans_.back().a;
        row_begin_.assign(static_cast<std::size_t>(a_max_ - a_min_) + 2, 0);
        for (std::size_t i = 0; i < spans_.size(); ++i) {
            row_begin_[spans_[i].a - a_min_ + 1] = static_cast<std::uint32_t>(i + 1);
        }
        for (std::size_t i = 1; i < row_begin_.size(); ++i) {
            row_begin_[i] = std::max(row_begin_[i], row_begin_[i - 1]);
        }
    }

    Kind kind_ = Kind::Parallelogram;
    std::vector<double> params_;
    std::vector<Span> spans_;
    std::vector<std::uint32_t> row_begin_;
    std::uint64_t size_ = 0;
    std::int32_t a_min_ = 0, a_max_ = -1, b_min_ = 0, b_max_ = -1;
};

}  // namespace frontlab
