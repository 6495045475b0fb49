#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "stochtop/cech.hpp"
#include "stochtop/core.hpp"
#include "stochtop/grid.hpp"
#include "stochtop/homology.hpp"
#include "stochtop/manifold.hpp"
#include "stochtop/miniball.hpp"

namespace stochtop {

/// An index-k critical point of the distance function of a sample: k+1
/// generators whose circumcentre lies in their convex hull and whose open
/// circumball contains no other sample point.
struct CriticalPoint {
    int index = 0;
    std::vector<std::uint32_t> generators;  // sorted sample indices, |..| = index+1
    Point center;
    double radius = 0.0;
    double boundary_dist = 0.0;
};

enum class RegionFilter { All, InteriorOnly, CollarOnly };

/// Half-open critical value range (r_lo, r_hi] plus an optional collar /
/// interior split at depth r0.  Index-0 points (value exactly 0) are
/// included when r_lo == 0.
struct CriticalQuery {
    double r_lo = 0.0;
    double r_hi = 0.0;
    int index = 0;
    RegionFilter region = RegionFilter::All;
    double r0 = 0.0;
};

struct EnumerationStats {
    std::size_t candidates = 0;
    std::size_t degenerate = 0;
    std::size_t accepted = 0;
};

/// Circumcentre of 1..d+1 lifted points (unique equidistant point of their
/// affine hull).  Affinely dependent input yields std::nullopt, never a
/// fabricated centre.
inline std::optional<Circumsphere> circumcenter(const std::vector<Vec3>& lifted, int dim) {
    if (lifted.empty() || static_cast<int>(lifted.size()) > dim + 1)
        throw DomainError("circumcenter: need 1..d+1 points");
    return circumsphere_in_hull(lifted.data(), static_cast<int>(lifted.size()), dim);
}

namespace detail {

constexpr double kHullTol = 1e-12;
constexpr double kEmptyBallTol = 1e-12;

inline std::optional<CriticalPoint> make_critical(const ManifoldModel& m,
                                                  const PointSample& sample,
                                                  const NeighborGrid& grid,
                                                  const std::vector<std::uint32_t>& subset,
                                                  EnumerationStats* stats) {
    const int d = m.dim();
    const int k = static_cast<int>(subset.size()) - 1;
    if (stats) ++stats->candidates;

    const Point& base = sample.points[subset[0]];
    std::vector<Vec3> lifted;
    lifted.reserve(subset.size());
    for (std::uint32_t idx : subset) {
        if (m.distance_unchecked(base, sample.points[idx]) >= m.injectivity_radius())
            throw ChartError("is_critical: cluster diameter at or beyond injectivity radius");
        lifted.push_back(m.nearest_lift_unchecked(base, sample.points[idx]));
    }

    auto cs = circumsphere_in_hull(lifted.data(), static_cast<int>(lifted.size()), d);
    if (!cs) {
        if (stats) ++stats->degenerate;
        return std::nullopt;
    }
    for (int i = 0; i <= k; ++i)
        if (cs->bary[i] < -kHullTol) return std::nullopt;  // centre outside hull

    const Point center = m.wrap(cs->center);
    if (grid.any_other_in_open_ball(center, cs->radius, subset, kEmptyBallTol))
        return std::nullopt;

    CriticalPoint cp;
    cp.index = k;
    cp.generators = subset;
    cp.center = center;
    cp.radius = cs->radius;
    cp.boundary_dist = m.boundary_distance(center);
    if (stats) ++stats->accepted;
    return cp;
}

inline bool in_range(double rho, double r_lo, double r_hi) {
    if (rho == 0.0) return r_lo == 0.0 && r_hi >= 0.0;
    return rho > r_lo && rho <= r_hi;
}

inline bool in_region(double delta, RegionFilter region, double r0) {
    switch (region) {
        case RegionFilter::All: return true;
        case RegionFilter::InteriorOnly: return delta > r0;
        case RegionFilter::CollarOnly: return delta <= r0;
    }
    return true;
}

}  // namespace detail

/// Tests whether the subset Y of sample indices induces a critical point:
/// circumcentre exists, lies in conv(Y) (barycentric coordinates >= -1e-12),
/// and the open circumball contains no other sample point (1e-12 inward
/// tolerance, so the generators themselves never disqualify Y).
inline std::optional<CriticalPoint> is_critical(const ManifoldModel& m,
                                                const PointSample& sample,
                                                const NeighborGrid& grid,
                                                std::vector<std::uint32_t> subset,
                                                EnumerationStats* stats = nullptr) {
    std::sort(subset.begin(), subset.end());
    return detail::make_critical(m, sample, grid, subset, stats);
}

inline std::optional<CriticalPoint> is_critical(const ManifoldModel& m,
                                                const PointSample& sample,
                                                std::vector<std::uint32_t> subset) {
    NeighborGrid grid(m, sample.points, std::max(1e-9, 0.45 * m.injectivity_radius()));
    return is_critical(m, sample, grid, std::move(subset));
}

/// All index-k critical points with value in (r_lo, r_hi] passing the region
/// filter, ordered by (value, generators).  Candidate subsets come from the
/// 2*r_hi neighbor graph: every generator lies on a sphere of radius
/// rho <= r_hi, so larger diameters are impossible.
inline std::vector<CriticalPoint> enumerate_critical_points(const ManifoldModel& m,
                                                            const PointSample& sample,
                                                            const CriticalQuery& query,
                                                            const NeighborGrid& grid,
                                                            EnumerationStats* stats = nullptr) {
    if (query.r_lo < 0.0 || query.r_hi < query.r_lo)
        throw DomainError("enumerate_critical_points: need 0 <= r_lo <= r_hi");
    if (!(2.0 * query.r_hi < m.injectivity_radius()))
        throw ChartError("enumerate_critical_points: 2*r_hi at or beyond injectivity radius");

    std::vector<CriticalPoint> out;
    const int k = query.index;
    if (k < 0) throw DomainError("enumerate_critical_points: negative index");

    if (k == 0) {
        if (query.r_lo == 0.0)
            for (std::uint32_t i = 0; i < sample.size(); ++i) {
                CriticalPoint cp;
                cp.index = 0;
                cp.generators = {i};
                cp.center = sample.points[i];
                cp.radius = 0.0;
                cp.boundary_dist = m.boundary_distance(cp.center);
                if (detail::in_region(cp.boundary_dist, query.region, query.r0))
                    out.push_back(std::move(cp));
            }
        return out;
    }
    if (k > m.dim() || sample.size() < static_cast<std::size_t>(k) + 1) return out;

    const double diam = 2.0 * query.r_hi;
    const auto adj = grid.higher_adjacency(diam);

    // Ordered expansion over subsets {base < v_1 < ... < v_k} with pairwise
    // distances <= 2*r_hi.
    std::vector<std::uint32_t> subset;
    std::vector<std::vector<std::uint32_t>> cands(static_cast<std::size_t>(k) + 1);
    struct Frame {
        int level;
        std::size_t next;
    };
    std::vector<Frame> frames;

    for (std::uint32_t base = 0; base < sample.size(); ++base) {
        if (adj[base].size() < static_cast<std::size_t>(k)) continue;
        subset.assign(1, base);
        cands[1] = adj[base];
        frames.assign(1, Frame{1, 0});
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next >= cands[f.level].size()) {
                frames.pop_back();
                subset.pop_back();
                continue;
            }
            const std::uint32_t v = cands[f.level][f.next++];
            subset.push_back(v);
            if (f.level == k) {
                if (auto cp = detail::make_critical(m, sample, grid, subset, stats)) {
                    if (detail::in_range(cp->radius, query.r_lo, query.r_hi) &&
                        detail::in_region(cp->boundary_dist, query.region, query.r0))
                        out.push_back(std::move(*cp));
                }
                subset.pop_back();
            } else {
                detail::intersect_higher(cands[f.level], adj[v], cands[f.level + 1]);
                if (!cands[f.level + 1].empty()) {
                    frames.push_back(Frame{f.level + 1, 0});
                } else {
                    subset.pop_back();
                }
            }
        }
    }

    std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.radius != b.radius) return a.radius < b.radius;
        return a.generators < b.generators;
    });
    return out;
}

inline std::vector<CriticalPoint> enumerate_critical_points(const ManifoldModel& m,
                                                            const PointSample& sample,
                                                            const CriticalQuery& query) {
    NeighborGrid grid(m, sample.points, std::max(1e-9, 2.0 * query.r_hi));
    return enumerate_critical_points(m, sample, query, grid);
}

struct EulerCheck {
    long chi_complex = 0;
    long chi_morse = 0;
    bool equal = false;
};

/// Compares the Euler characteristic of the full-dimensional Cech complex at
/// radius r with the alternating count of critical points with value <= r.
/// The complex is built without a dimension cap: cliques above dimension d
/// occur routinely and their simplices enter the Euler sum.
inline EulerCheck morse_euler_check(const ManifoldModel& m, const PointSample& sample,
                                    double r) {
    if (!(r > 0.0)) throw DomainError("morse_euler_check: radius must be positive");
    NeighborGrid grid(m, sample.points, std::max(1e-9, 2.0 * r));

    EulerCheck out;
    long alternating = 0;
    for (int k = 0; k <= m.dim(); ++k) {
        CriticalQuery q;
        q.r_lo = 0.0;
        q.r_hi = r;
        q.index = k;
        const auto crit = enumerate_critical_points(m, sample, q, grid);
        for (const CriticalPoint& cp : crit)
            if (std::abs(cp.radius - r) <= 1e-12 * std::max(1.0, r))
                throw NonGenericRadius("morse_euler_check: critical value ties the radius");
        alternating += (k % 2 == 0 ? 1 : -1) * static_cast<long>(crit.size());
    }
    out.chi_morse = alternating;

    const int full_cap = sample.points.empty() ? 0 : static_cast<int>(sample.size()) - 1;
    const CechComplex complex = build_cech(m, sample, r, std::max(full_cap, 0));
    out.chi_complex = euler_characteristic(complex);
    out.equal = out.chi_complex == out.chi_morse;
    return out;
}

}  // namespace stochtop
