#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "stochtop/core.hpp"
#include "stochtop/rng.hpp"
#include "stochtop/special.hpp"

namespace stochtop {

enum class ManifoldKind { FlatTorus, FlatCylinder, SolidDisk };

inline const char* kind_name(ManifoldKind k) {
    switch (k) {
        case ManifoldKind::FlatTorus: return "torus";
        case ManifoldKind::FlatCylinder: return "cylinder";
        case ManifoldKind::SolidDisk: return "disk";
    }
    return "?";
}

/// A point in the manifold's fundamental-domain chart.  Periodic coordinates
/// live in [0, L); the disk uses plain Cartesian coordinates with |x| <= R.
struct Point {
    Vec3 c{0.0, 0.0, 0.0};
};

/// Flat compact manifold, with or without boundary.
///
/// Supported models: the flat torus (periodic box, no boundary), the flat
/// cylinder (periodic in the first d-1 axes, an interval [0, L] in the
/// last), and the closed round disk in the plane.  All are flat, so geodesic
/// normal coordinates are globally Euclidean and every curvature correction
/// term vanishes identically; distances are Euclidean after unwrapping
/// periodic axes.
class ManifoldModel {
public:
    static ManifoldModel flat_torus(const std::vector<double>& lengths) {
        ManifoldModel m;
        m.kind_ = ManifoldKind::FlatTorus;
        m.dim_ = static_cast<int>(lengths.size());
        if (m.dim_ < 2 || m.dim_ > 3) throw DomainError("flat_torus: dim must be 2 or 3");
        double vol = 1.0, shortest = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m.dim_; ++i) {
            if (!(lengths[i] > 0.0)) throw DomainError("flat_torus: lengths must be positive");
            m.shape_[i] = lengths[i];
            vol *= lengths[i];
            shortest = std::min(shortest, lengths[i]);
        }
        m.volume_ = vol;
        m.has_boundary_ = false;
        m.injectivity_ = 0.5 * shortest;
        m.periodic_axes_ = m.dim_;
        return m;
    }

    static ManifoldModel flat_cylinder(const std::vector<double>& periods,
                                       double interval_length) {
        ManifoldModel m;
        m.kind_ = ManifoldKind::FlatCylinder;
        m.dim_ = static_cast<int>(periods.size()) + 1;
        if (m.dim_ < 2 || m.dim_ > 3) throw DomainError("flat_cylinder: dim must be 2 or 3");
        if (!(interval_length > 0.0))
            throw DomainError("flat_cylinder: interval length must be positive");
        double vol = interval_length, shortest = std::numeric_limits<double>::infinity();
        for (int i = 0; i + 1 < m.dim_; ++i) {
            if (!(periods[i] > 0.0)) throw DomainError("flat_cylinder: periods must be positive");
            m.shape_[i] = periods[i];
            vol *= periods[i];
            shortest = std::min(shortest, periods[i]);
        }
        m.shape_[m.dim_ - 1] = interval_length;
        m.volume_ = vol;
        m.has_boundary_ = true;
        m.injectivity_ = 0.5 * shortest;
        m.periodic_axes_ = m.dim_ - 1;
        return m;
    }

    static ManifoldModel solid_disk(double radius) {
        ManifoldModel m;
        m.kind_ = ManifoldKind::SolidDisk;
        m.dim_ = 2;
        if (!(radius > 0.0)) throw DomainError("solid_disk: radius must be positive");
        m.shape_[0] = radius;
        m.volume_ = std::numbers::pi * radius * radius;
        m.has_boundary_ = true;
        // No periodic identifications; chart computations are unconstrained.
        m.injectivity_ = std::numeric_limits<double>::infinity();
        m.periodic_axes_ = 0;
        return m;
    }

    /// Unit-volume instance of a model kind (all side lengths 1; disk radius
    /// 1/sqrt(pi)).
    static ManifoldModel unit_volume(ManifoldKind kind, int dim) {
        switch (kind) {
            case ManifoldKind::FlatTorus:
                return flat_torus(std::vector<double>(dim, 1.0));
            case ManifoldKind::FlatCylinder:
                return flat_cylinder(std::vector<double>(dim - 1, 1.0), 1.0);
            case ManifoldKind::SolidDisk:
                if (dim != 2) throw DomainError("solid_disk supports d = 2 only");
                return solid_disk(1.0 / std::sqrt(std::numbers::pi));
        }
        throw DomainError("unit_volume: unknown kind");
    }

    ManifoldKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double total_volume() const { return volume_; }
    bool has_boundary() const { return has_boundary_; }
    double injectivity_radius() const { return injectivity_; }
    const Vec3& shape() const { return shape_; }
    int periodic_axes() const { return periodic_axes_; }

    void validate(const Point& p) const {
        if (kind_ == ManifoldKind::SolidDisk) {
            const double R = shape_[0];
            if (vnorm(p.c, 2) > R * (1.0 + 1e-12))
                throw DomainError("point outside disk");
            return;
        }
        for (int i = 0; i < dim_; ++i) {
            const bool periodic = i < periodic_axes_;
            const double hi = shape_[i];
            if (periodic) {
                if (!(p.c[i] >= 0.0 && p.c[i] < hi))
                    throw DomainError("periodic coordinate outside [0, L)");
            } else {
                if (!(p.c[i] >= 0.0 && p.c[i] <= hi))
                    throw DomainError("interval coordinate outside [0, L]");
            }
        }
    }

    /// Geodesic distance.  Torus/cylinder: minimum over periodic translates;
    /// disk: Euclidean (the disk is convex).
    double distance(const Point& p, const Point& q) const {
        validate(p);
        validate(q);
        return distance_unchecked(p, q);
    }

    double distance_unchecked(const Point& p, const Point& q) const {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) {
            double d = std::abs(p.c[i] - q.c[i]);
            if (i < periodic_axes_) d = std::min(d, shape_[i] - d);
            s += d * d;
        }
        return std::sqrt(s);
    }

    /// Euclidean representative of p nearest to base in the chart around
    /// base; |lift(p) - lift(base)| equals the geodesic distance.
    Vec3 nearest_lift(const Point& base, const Point& p) const {
        if (distance_unchecked(base, p) >= injectivity_)
            throw ChartError("nearest_lift: point at or beyond injectivity radius");
        return nearest_lift_unchecked(base, p);
    }

    Vec3 nearest_lift_unchecked(const Point& base, const Point& p) const {
        Vec3 out{0.0, 0.0, 0.0};
        for (int i = 0; i < dim_; ++i) {
            double delta = p.c[i] - base.c[i];
            if (i < periodic_axes_) {
                const double L = shape_[i];
                delta -= L * std::round(delta / L);
            }
            out[i] = base.c[i] + delta;
        }
        return out;
    }

    /// Distance to the boundary; +infinity for the torus.
    double boundary_distance(const Point& p) const {
        switch (kind_) {
            case ManifoldKind::FlatTorus:
                return std::numeric_limits<double>::infinity();
            case ManifoldKind::FlatCylinder: {
                const double t = p.c[dim_ - 1];
                return std::min(t, shape_[dim_ - 1] - t);
            }
            case ManifoldKind::SolidDisk:
                return shape_[0] - vnorm(p.c, 2);
        }
        return 0.0;
    }

    /// Unit chart vector at p pointing toward the nearest boundary point.
    /// Exact gradient of -boundary_distance (closed form; no differencing).
    Vec3 boundary_direction(const Point& p) const {
        switch (kind_) {
            case ManifoldKind::FlatCylinder: {
                Vec3 n{0.0, 0.0, 0.0};
                const double t = p.c[dim_ - 1];
                n[dim_ - 1] = (t <= 0.5 * shape_[dim_ - 1]) ? -1.0 : 1.0;
                return n;
            }
            case ManifoldKind::SolidDisk: {
                const double len = vnorm(p.c, 2);
                if (len < 1e-300) return Vec3{1.0, 0.0, 0.0};
                return vscale(p.c, 1.0 / len);
            }
            case ManifoldKind::FlatTorus:
                throw DomainError("boundary_direction: torus has no boundary");
        }
        throw DomainError("boundary_direction: unknown kind");
    }

    /// Exact volume of the r-collar of the boundary.
    double collar_volume(double r) const {
        if (r < 0.0) throw DomainError("collar_volume: negative r");
        switch (kind_) {
            case ManifoldKind::FlatTorus:
                return 0.0;
            case ManifoldKind::FlatCylinder: {
                if (!(r < 0.5 * shape_[dim_ - 1]))
                    throw DomainError("collar_volume: r must be below L/2");
                double cross = 1.0;
                for (int i = 0; i + 1 < dim_; ++i) cross *= shape_[i];
                return 2.0 * r * cross;
            }
            case ManifoldKind::SolidDisk: {
                const double R = shape_[0];
                if (!(r < R)) throw DomainError("collar_volume: r must be below R");
                return std::numbers::pi * (R * R - (R - r) * (R - r));
            }
        }
        return 0.0;
    }

    /// Map chart coordinates back into the fundamental domain (wrap periodic
    /// axes; bounded axes are only tolerance-clamped, not projected).
    Point wrap(const Vec3& chart) const {
        Point p;
        for (int i = 0; i < dim_; ++i) {
            double v = chart[i];
            if (i < periodic_axes_) {
                const double L = shape_[i];
                v -= L * std::floor(v / L);
                if (v >= L) v = 0.0;  // guard v == L after rounding
            }
            p.c[i] = v;
        }
        if (kind_ == ManifoldKind::FlatCylinder) {
            double& t = p.c[dim_ - 1];
            const double L = shape_[dim_ - 1];
            if (t < 0.0 && t > -1e-12) t = 0.0;
            if (t > L && t < L + 1e-12) t = L;
        } else if (kind_ == ManifoldKind::SolidDisk) {
            const double R = shape_[0];
            const double len = vnorm(p.c, 2);
            if (len > R && len < R * (1.0 + 1e-12)) p.c = vscale(p.c, R / len);
        }
        return p;
    }

    /// True if the chart point lies in M (bounded axes within range; the
    /// periodic axes impose nothing).
    bool contains_chart(const Vec3& chart, double tol = 0.0) const {
        switch (kind_) {
            case ManifoldKind::FlatTorus:
                return true;
            case ManifoldKind::FlatCylinder: {
                const double t = chart[dim_ - 1];
                return t >= -tol && t <= shape_[dim_ - 1] + tol;
            }
            case ManifoldKind::SolidDisk:
                return vnorm(chart, 2) <= shape_[0] + tol;
        }
        return false;
    }

    /// Nearest-point projection of a chart point onto M, then wrapped into
    /// the fundamental domain.  M is convex in the chart for every model, so
    /// this is the metric projection.
    Point clamp_to_manifold(const Vec3& chart) const {
        Vec3 v = chart;
        if (kind_ == ManifoldKind::FlatCylinder) {
            const double L = shape_[dim_ - 1];
            v[dim_ - 1] = std::min(std::max(v[dim_ - 1], 0.0), L);
        } else if (kind_ == ManifoldKind::SolidDisk) {
            const double R = shape_[0];
            const double len = vnorm(v, 2);
            if (len > R) v = vscale(v, R / len);
        }
        return wrap(v);
    }

private:
    ManifoldKind kind_ = ManifoldKind::FlatTorus;
    int dim_ = 2;
    Vec3 shape_{1.0, 1.0, 1.0};
    double volume_ = 1.0;
    bool has_boundary_ = false;
    double injectivity_ = 0.5;
    int periodic_axes_ = 2;
};

/// A realization of a homogeneous Poisson process on a manifold.
struct PointSample {
    std::vector<Point> points;
    double intensity = 0.0;
    std::uint64_t seed = 0;

    std::size_t size() const { return points.size(); }
};

/// Draw N ~ Poisson(n * Vol(M)) points i.i.d. uniformly on M.  Deterministic
/// given (model, n, seed); the disk uses the polar inverse CDF so no
/// rejection loop perturbs the stream.
inline PointSample sample_poisson(const ManifoldModel& m, double n, std::uint64_t seed) {
    if (!(n > 0.0)) throw DomainError("sample_poisson: intensity must be positive");
    SplitMix64 rng(seed);
    const long count = poisson_draw(rng, n * m.total_volume());
    PointSample sample;
    sample.intensity = n;
    sample.seed = seed;
    sample.points.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        Point p;
        if (m.kind() == ManifoldKind::SolidDisk) {
            const double R = m.shape()[0];
            const double rad = R * std::sqrt(rng.next_unit());
            const double ang = 2.0 * std::numbers::pi * rng.next_unit();
            p.c[0] = rad * std::cos(ang);
            p.c[1] = rad * std::sin(ang);
        } else {
            for (int a = 0; a < m.dim(); ++a) {
                double v = m.shape()[a] * rng.next_unit();
                if (a < m.periodic_axes() && v >= m.shape()[a]) v = 0.0;
                p.c[a] = v;
            }
        }
        sample.points.push_back(p);
    }
    return sample;
}

}  // namespace stochtop
