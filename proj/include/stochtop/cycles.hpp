#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "stochtop/core.hpp"
#include "stochtop/grid.hpp"
#include "stochtop/manifold.hpp"
#include "stochtop/morse.hpp"
#include "stochtop/special.hpp"

namespace stochtop {

/// Closed annulus around a centre (outer radius rho, inner radius eps*rho),
/// intersected with the manifold.  With an aperture it is the partial
/// annulus: only chart directions making angle >= pi/2 - phi_angle/2 with
/// the boundary normal are kept (the cap toward the boundary is sliced off).
struct Aperture {
    double phi_angle = 0.0;
    Vec3 normal{0.0, 0.0, 0.0};  // unit vector toward the nearest boundary point
};

struct AnnulusSpec {
    Point center;
    double rho = 0.0;
    double eps = 0.0;
    std::optional<Aperture> aperture;
};

struct CoverageResult {
    bool certified = false;
    double margin = 0.0;
    double net_spacing = 0.0;
    std::size_t net_points = 0;
};

enum class CycleKind { Theta, ThetaLike };

/// A detected cycle-inducing critical point with its certification data.
struct ThetaRecord {
    CriticalPoint critical;
    CycleKind kind = CycleKind::Theta;
    double value = 0.0;  // phi for Theta records, psi for Theta-like records
    bool certified = false;
    double net_spacing = 0.0;
    double margin = 0.0;
};

namespace detail {

inline double dist_origin_point(const Vec3& a, int dim) { return vnorm(a, dim); }

inline double dist_origin_segment(const Vec3& a, const Vec3& b, int dim) {
    const Vec3 ab = vsub(b, a);
    const double len2 = vnorm2(ab, dim);
    if (len2 <= 0.0) return vnorm(a, dim);
    double t = -vdot(a, ab, dim) / len2;
    t = std::min(1.0, std::max(0.0, t));
    return vnorm(vadd(a, vscale(ab, t)), dim);
}

// Closest distance from the origin to a filled triangle (Ericson's
// closest-point construction).
inline double dist_origin_triangle(const Vec3& a, const Vec3& b, const Vec3& c, int dim) {
    const Vec3 ab = vsub(b, a), ac = vsub(c, a);
    const Vec3 ap = vscale(a, -1.0);
    const double d1 = vdot(ab, ap, dim), d2 = vdot(ac, ap, dim);
    if (d1 <= 0.0 && d2 <= 0.0) return vnorm(a, dim);
    const Vec3 bp = vscale(b, -1.0);
    const double d3 = vdot(ab, bp, dim), d4 = vdot(ac, bp, dim);
    if (d3 >= 0.0 && d4 <= d3) return vnorm(b, dim);
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0)
        return vnorm(vadd(a, vscale(ab, d1 / (d1 - d3))), dim);
    const Vec3 cp = vscale(c, -1.0);
    const double d5 = vdot(ab, cp, dim), d6 = vdot(ac, cp, dim);
    if (d6 >= 0.0 && d5 <= d6) return vnorm(c, dim);
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0)
        return vnorm(vadd(a, vscale(ac, d2 / (d2 - d6))), dim);
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return vnorm(vadd(b, vscale(vsub(c, b), w)), dim);
    }
    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    return vnorm(vadd(a, vadd(vscale(ab, v), vscale(ac, w))), dim);
}

inline double dist_origin_facet(const Vec3* pts, int count, int dim) {
    switch (count) {
        case 1: return dist_origin_point(pts[0], dim);
        case 2: return dist_origin_segment(pts[0], pts[1], dim);
        case 3: return dist_origin_triangle(pts[0], pts[1], pts[2], dim);
    }
    throw DomainError("dist_origin_facet: facet size must be 1..3");
}

// Lift the generators and the centre of a critical point into the chart of
// its first generator.
struct LiftedCritical {
    std::vector<Vec3> gens;
    Vec3 center{0.0, 0.0, 0.0};
};

inline LiftedCritical lift_critical(const ManifoldModel& m, const PointSample& sample,
                                    const CriticalPoint& cp) {
    LiftedCritical out;
    const Point& base = sample.points[cp.generators[0]];
    out.gens.reserve(cp.generators.size());
    for (std::uint32_t g : cp.generators)
        out.gens.push_back(m.nearest_lift_unchecked(base, sample.points[g]));
    out.center = m.nearest_lift_unchecked(base, cp.center);
    return out;
}

}  // namespace detail

/// phi(Y) = (1 / 2 rho) * dist(origin, boundary of conv{2(c - y_i)}) in the
/// flat chart at the centre: the normalized depth of the origin inside the
/// gradient simplex.  Zero when the origin is outside or on that boundary.
inline double phi_of(const ManifoldModel& m, const PointSample& sample,
                     const CriticalPoint& cp) {
    const int k = cp.index;
    if (k < 1 || k > m.dim()) throw DomainError("phi_of: index must be in 1..d");
    if (!(cp.radius > 0.0)) return 0.0;
    const int d = m.dim();
    const auto lifted = detail::lift_critical(m, sample, cp);

    // Gradient vertices of the squared-distance functions at the centre.
    std::vector<Vec3> grad(k + 1);
    for (int i = 0; i <= k; ++i) grad[i] = vscale(vsub(lifted.center, lifted.gens[i]), 2.0);

    // Origin strictly inside the gradient simplex <=> centre strictly inside
    // conv(Y); otherwise phi = 0.
    auto cs = circumsphere_in_hull(lifted.gens.data(), k + 1, d);
    if (!cs) return 0.0;
    for (int i = 0; i <= k; ++i)
        if (cs->bary[i] <= 0.0) return 0.0;

    double min_dist = std::numeric_limits<double>::infinity();
    std::array<Vec3, 3> facet{};
    for (int omit = 0; omit <= k; ++omit) {
        int cnt = 0;
        for (int i = 0; i <= k; ++i)
            if (i != omit) facet[cnt++] = grad[i];
        min_dist = std::min(min_dist, detail::dist_origin_facet(facet.data(), cnt, d));
    }
    return min_dist / (2.0 * cp.radius);
}

/// Deterministic dense sampling of the boundary of the simplex conv(Y):
/// every (k-1)-face gets at least `per_facet` points.
inline std::vector<Vec3> sample_simplex_boundary(const std::vector<Vec3>& verts, int dim,
                                                 int per_facet) {
    const int k = static_cast<int>(verts.size()) - 1;
    std::vector<Vec3> out;
    std::array<Vec3, 3> facet{};
    for (int omit = 0; omit <= k; ++omit) {
        int cnt = 0;
        for (int i = 0; i <= k; ++i)
            if (i != omit) facet[cnt++] = verts[i];
        if (cnt == 1) {
            out.push_back(facet[0]);
        } else if (cnt == 2) {
            const int steps = std::max(1, per_facet - 1);
            for (int t = 0; t <= steps; ++t) {
                const double s = static_cast<double>(t) / steps;
                out.push_back(vadd(facet[0], vscale(vsub(facet[1], facet[0]), s)));
            }
        } else if (cnt == 3) {
            int grid = 1;
            while ((grid + 1) * (grid + 2) / 2 < per_facet) ++grid;
            for (int i = 0; i <= grid; ++i)
                for (int j = 0; i + j <= grid; ++j) {
                    const double u = static_cast<double>(i) / grid;
                    const double v = static_cast<double>(j) / grid;
                    Vec3 p = vscale(facet[0], 1.0 - u - v);
                    p = vadd(p, vscale(facet[1], u));
                    p = vadd(p, vscale(facet[2], v));
                    out.push_back(p);
                }
        } else {
            throw DomainError("sample_simplex_boundary: facet size must be 1..3");
        }
        (void)dim;
    }
    return out;
}

/// psi(Y, phi_angle) = (1/2) sup { eps >= 0 : boundary of conv(Y) lies in
/// the partial annulus A^(phi_angle)_eps(c) }, evaluated on a deterministic
/// dense sampling of the simplex boundary.  Returns 0 as soon as a sampled
/// point violates the angular constraint (the simplex then traverses the
/// part of the annulus sliced off by the manifold boundary).  For critical
/// points farther than rho from the boundary the aperture is meaningless and
/// the phi path is used instead.
inline double psi_of(const ManifoldModel& m, const PointSample& sample, const CriticalPoint& cp,
                     double phi_angle, int per_facet = 1024) {
    const int k = cp.index;
    if (k < 1 || k > m.dim()) throw DomainError("psi_of: index must be in 1..d");
    if (!(phi_angle > 0.0) || !(phi_angle < std::numbers::pi))
        throw DomainError("psi_of: phi_angle must be in (0, pi)");
    if (cp.boundary_dist > cp.radius) return phi_of(m, sample, cp);
    if (!(cp.radius > 0.0)) return 0.0;

    const int d = m.dim();
    const auto lifted = detail::lift_critical(m, sample, cp);
    const Vec3 normal = m.boundary_direction(cp.center);
    const double sin_half = std::sin(0.5 * phi_angle);

    const auto boundary_samples = sample_simplex_boundary(lifted.gens, d, per_facet);
    double min_rel = 1.0;
    for (const Vec3& x : boundary_samples) {
        const Vec3 u = vsub(x, lifted.center);
        const double ru = vnorm(u, d);
        if (ru < 1e-15) return 0.0;
        if (vdot(u, normal, d) > ru * sin_half) return 0.0;  // angular violation
        min_rel = std::min(min_rel, ru / cp.radius);
    }
    return 0.5 * min_rel;
}

/// Conservative net certification that every point of the region (an annulus
/// / partial annulus, or all of M when `annulus` is null) lies within
/// rho_cover of the sample.  A grid net of spacing s covers the region; if
/// every net point is within rho_cover - s of the sample, true coverage
/// follows.  One-sided: may under-report coverage, never over-reports.
inline CoverageResult region_covered(const ManifoldModel& m, const NeighborGrid& grid,
                                     const AnnulusSpec* annulus, double rho_cover,
                                     double spacing = 0.0) {
    if (!(rho_cover > 0.0)) throw DomainError("region_covered: rho_cover must be positive");
    double s = spacing > 0.0 ? spacing : rho_cover / 20.0;
    if (s >= rho_cover) throw DomainError("region_covered: net spacing must be below rho_cover");
    if (annulus) {
        if (!(annulus->eps > 0.0 && annulus->eps < 1.0))
            throw DomainError("region_covered: annulus eps must be in (0,1)");
        if (!(annulus->rho > 0.0)) throw DomainError("region_covered: annulus rho required");
    }

    const int d = m.dim();
    const double sqrt_d = std::sqrt(static_cast<double>(d));
    const double pitch_target = 2.0 * s / sqrt_d * 0.999;
    const double infl = s;  // >= half cell diagonal; inflated tests keep the net covering

    CoverageResult out;
    out.net_spacing = s;
    out.margin = std::numeric_limits<double>::infinity();

    auto test_point = [&](const Vec3& chart) {
        if (annulus) {
            const Vec3 u = vsub(chart, annulus->center.c);
            const double ru = vnorm(u, d);
            if (ru < annulus->eps * annulus->rho - infl || ru > annulus->rho + infl) return;
            if (annulus->aperture) {
                const double sin_half = std::sin(0.5 * annulus->aperture->phi_angle);
                if (vdot(u, annulus->aperture->normal, d) > ru * sin_half + 2.0 * infl) return;
            }
        }
        if (!m.contains_chart(chart, infl)) return;
        const Point net_point = m.clamp_to_manifold(chart);
        ++out.net_points;
        const double dist = grid.nearest_distance(net_point, rho_cover);
        out.margin = std::min(out.margin, rho_cover - s - dist);
    };

    Vec3 lo{0.0, 0.0, 0.0};
    Vec3 extent{0.0, 0.0, 0.0};
    if (annulus) {
        for (int a = 0; a < d; ++a) {
            lo[a] = annulus->center.c[a] - annulus->rho - 2.0 * s;
            extent[a] = 2.0 * (annulus->rho + 2.0 * s);
        }
    } else {
        for (int a = 0; a < d; ++a) {
            if (m.kind() == ManifoldKind::SolidDisk) {
                lo[a] = -m.shape()[0];
                extent[a] = 2.0 * m.shape()[0];
            } else {
                lo[a] = 0.0;
                extent[a] = m.shape()[a];
            }
        }
    }

    std::array<int, 3> cells{1, 1, 1};
    Vec3 pitch{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) {
        cells[a] = std::max(1, static_cast<int>(std::ceil(extent[a] / pitch_target)));
        pitch[a] = extent[a] / cells[a];
    }
    Vec3 chart{0.0, 0.0, 0.0};
    for (int i0 = 0; i0 < cells[0]; ++i0) {
        chart[0] = lo[0] + (i0 + 0.5) * pitch[0];
        for (int i1 = 0; i1 < (d > 1 ? cells[1] : 1); ++i1) {
            if (d > 1) chart[1] = lo[1] + (i1 + 0.5) * pitch[1];
            for (int i2 = 0; i2 < (d > 2 ? cells[2] : 1); ++i2) {
                if (d > 2) chart[2] = lo[2] + (i2 + 0.5) * pitch[2];
                test_point(chart);
            }
        }
    }

    if (out.net_points == 0) {
        // Region empty of net points: nothing to certify against.
        out.margin = 0.0;
        out.certified = true;
        return out;
    }
    out.certified = out.margin >= 0.0;
    return out;
}

/// Detector scales: r from the configured Lambda, the near-boundary band
/// depth delta = r / log n, the aperture phi_angle = c_phi / log n, and the
/// bracketing radii r1 = r (1 - 1/(2 c_g^2 Lambda^2)), r2 = r (1 + 1/Lambda).
struct DetectorParams {
    double r1 = 0.0;
    double r = 0.0;
    double r2 = 0.0;
    double delta = 0.0;
    double phi_angle = 0.0;
    double eps_min = 0.05;
};

struct DetectorTuning {
    double c_phi = 1.0;
    double c_g = 1.0;
    double eps_min = 0.05;
    double net_spacing = 0.0;  // 0 -> auto rho_cover / 20
    int psi_facet_samples = 1024;
};

inline DetectorParams default_detector_params(double n, int d, double lambda,
                                              const DetectorTuning& tuning = {}) {
    if (!(n >= 3.0)) throw DomainError("default_detector_params: n must be >= 3");
    DetectorParams p;
    p.r = radius_for_lambda(n, d, lambda);
    const double log_n = std::log(n);
    p.delta = p.r / log_n;
    p.phi_angle = tuning.c_phi / log_n;
    p.r1 = p.r * (1.0 - 1.0 / (2.0 * tuning.c_g * tuning.c_g * lambda * lambda));
    p.r2 = p.r * (1.0 + 1.0 / lambda);
    p.eps_min = tuning.eps_min;
    return p;
}

namespace detail {

inline void validate_detector_args(const ManifoldModel& m, double r1, double r, double r2,
                                   double eps_min) {
    if (!(r1 < r && r < r2)) throw DomainError("theta detector: need r1 < r < r2");
    if (!(r1 >= 0.0)) throw DomainError("theta detector: r1 must be >= 0");
    if (!(eps_min > 0.0 && eps_min < 1.0))
        throw DomainError("theta detector: eps_min must be in (0,1)");
    if (!(2.0 * r2 < m.injectivity_radius()))
        throw ChartError("theta detector: 2*r2 at or beyond injectivity radius");
}

inline void sort_records(std::vector<ThetaRecord>& records) {
    std::sort(records.begin(), records.end(), [](const ThetaRecord& a, const ThetaRecord& b) {
        if (a.critical.radius != b.critical.radius) return a.critical.radius < b.critical.radius;
        return a.critical.generators < b.critical.generators;
    });
}

}  // namespace detail

/// Theta-cycles: interior critical points (1 <= k <= d-1) with value in
/// (r1, r], an empty r2-ball apart from their generators, phi >= eps_min and
/// a certified eps_min-annulus.  Every returned record is certified, hence
/// induces a new non-trivial k-cycle at its critical value.
inline std::vector<ThetaRecord> detect_theta_cycles(const ManifoldModel& m,
                                                    const PointSample& sample, double r1,
                                                    double r, double r2, double eps_min,
                                                    const DetectorTuning& tuning = {}) {
    detail::validate_detector_args(m, r1, r, r2, eps_min);
    std::vector<ThetaRecord> records;
    if (sample.points.empty()) return records;
    NeighborGrid grid(m, sample.points, r);

    for (int k = 1; k <= m.dim() - 1; ++k) {
        CriticalQuery q;
        q.r_lo = r1;
        q.r_hi = r;
        q.index = k;
        for (const CriticalPoint& cp : enumerate_critical_points(m, sample, q, grid)) {
            if (!(cp.boundary_dist > r2)) continue;
            if (grid.any_other_in_open_ball(cp.center, r2, cp.generators)) continue;
            const double phi = phi_of(m, sample, cp);
            if (phi < eps_min) continue;
            AnnulusSpec annulus;
            annulus.center = cp.center;
            annulus.rho = cp.radius;
            annulus.eps = eps_min;
            const auto cover =
                region_covered(m, grid, &annulus, cp.radius, tuning.net_spacing);
            if (!cover.certified) continue;
            records.push_back(
                {cp, CycleKind::Theta, phi, true, cover.net_spacing, cover.margin});
        }
    }
    detail::sort_records(records);
    return records;
}

/// Theta-like-cycles: near-boundary critical points (centre depth within
/// [delta, 2*delta]) whose simplex is approximately boundary-tangential
/// (psi >= eps_min) with a certified partial annulus.
inline std::vector<ThetaRecord> detect_theta_like_cycles(const ManifoldModel& m,
                                                         const PointSample& sample, double r1,
                                                         double r, double r2, double eps_min,
                                                         double delta, double phi_angle,
                                                         const DetectorTuning& tuning = {}) {
    detail::validate_detector_args(m, r1, r, r2, eps_min);
    if (!(delta > 0.0 && delta < r)) throw DomainError("theta detector: need 0 < delta < r");
    if (!(phi_angle > 0.0 && phi_angle < std::numbers::pi))
        throw DomainError("theta detector: phi_angle must be in (0, pi)");
    std::vector<ThetaRecord> records;
    if (sample.points.empty()) return records;
    NeighborGrid grid(m, sample.points, r);

    for (int k = 1; k <= m.dim() - 1; ++k) {
        CriticalQuery q;
        q.r_lo = r1;
        q.r_hi = r;
        q.index = k;
        for (const CriticalPoint& cp : enumerate_critical_points(m, sample, q, grid)) {
            if (!(cp.boundary_dist >= delta && cp.boundary_dist <= 2.0 * delta)) continue;
            if (grid.any_other_in_open_ball(cp.center, r2, cp.generators)) continue;
            const double psi =
                psi_of(m, sample, cp, phi_angle, tuning.psi_facet_samples);
            if (psi < eps_min) continue;
            AnnulusSpec annulus;
            annulus.center = cp.center;
            annulus.rho = cp.radius;
            annulus.eps = eps_min;
            annulus.aperture = Aperture{phi_angle, m.boundary_direction(cp.center)};
            const auto cover =
                region_covered(m, grid, &annulus, cp.radius, tuning.net_spacing);
            if (!cover.certified) continue;
            records.push_back(
                {cp, CycleKind::ThetaLike, psi, true, cover.net_spacing, cover.margin});
        }
    }
    detail::sort_records(records);
    return records;
}

}  // namespace stochtop
