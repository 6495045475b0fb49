#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "stochtop/core.hpp"
#include "stochtop/rng.hpp"

namespace stochtop {

struct Ball {
    Vec3 center{0.0, 0.0, 0.0};
    double radius = -1.0;  // radius < 0 encodes the empty ball

    bool contains(const Vec3& p, int dim, double tol) const {
        return radius >= 0.0 && vdist(center, p, dim) <= radius + tol;
    }
};

/// Circumsphere of 1..dim+1 affinely independent points: the unique point of
/// their affine hull equidistant from all of them, found by equalizing
/// squared distances.  Also reports the barycentric coordinates of the
/// centre with respect to the input points.
struct Circumsphere {
    Vec3 center{0.0, 0.0, 0.0};
    double radius = 0.0;
    std::array<double, 4> bary{1.0, 0.0, 0.0, 0.0};
};

inline std::optional<Circumsphere> circumsphere_in_hull(const Vec3* pts, int m, int dim,
                                                        double rel_tol = 1e-12) {
    if (m < 1 || m > dim + 1) return std::nullopt;
    Circumsphere out;
    if (m == 1) {
        out.center = pts[0];
        out.radius = 0.0;
        return out;
    }
    const int k = m - 1;
    std::array<Vec3, 3> e{};
    for (int i = 0; i < k; ++i) e[i] = vsub(pts[i + 1], pts[0]);

    // Solve (2 e_i . e_j) lambda = |e_i|^2 by Gaussian elimination with
    // partial pivoting; k <= 3.
    double a[3][4] = {};
    double scale = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) a[i][j] = 2.0 * vdot(e[i], e[j], dim);
        a[i][k] = vnorm2(e[i], dim);
        scale = std::max(scale, std::abs(a[i][i]));
    }
    if (scale <= 0.0) return std::nullopt;  // coincident points
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < rel_tol * scale) return std::nullopt;  // degenerate
        if (piv != col)
            for (int c = 0; c <= k; ++c) std::swap(a[piv][c], a[col][c]);
        for (int r = col + 1; r < k; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
        }
    }
    double lambda[3] = {};
    for (int r = k - 1; r >= 0; --r) {
        double s = a[r][k];
        for (int c = r + 1; c < k; ++c) s -= a[r][c] * lambda[c];
        lambda[r] = s / a[r][r];
    }

    out.center = pts[0];
    double lam_sum = 0.0;
    for (int i = 0; i < k; ++i) {
        out.center = vadd(out.center, vscale(e[i], lambda[i]));
        out.bary[i + 1] = lambda[i];
        lam_sum += lambda[i];
    }
    out.bary[0] = 1.0 - lam_sum;
    out.radius = vdist(out.center, pts[0], dim);
    return out;
}

namespace detail {

// Smallest ball enclosing at most dim+1 support points, by brute force over
// circumspheres of subsets.  Fallback for (near-)degenerate supports, where
// the circumsphere of the full support does not exist.
inline Ball small_set_ball(const Vec3* pts, int m, int dim) {
    Ball best;
    best.radius = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::array<Vec3, 4> sub{};
        int cnt = 0;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) sub[cnt++] = pts[i];
        if (cnt > dim + 1) continue;
        auto cs = circumsphere_in_hull(sub.data(), cnt, dim);
        if (!cs) continue;
        bool all_in = true;
        for (int i = 0; i < m && all_in; ++i)
            all_in = vdist(cs->center, pts[i], dim) <= cs->radius + 1e-12;
        if (all_in && cs->radius < best.radius) {
            best.center = cs->center;
            best.radius = cs->radius;
        }
    }
    if (!std::isfinite(best.radius)) best.radius = -1.0;
    return best;
}

class WelzlSolver {
public:
    WelzlSolver(const Vec3* pts, std::size_t n, int dim) : dim_(dim), work_(pts, pts + n) {
        // Deterministic shuffle; guards against adversarial insertion orders
        // without perturbing reproducibility.
        if (work_.size() > 8) {
            SplitMix64 rng(0x9E3779B97F4A7C15ULL ^ work_.size());
            for (std::size_t i = work_.size() - 1; i > 0; --i) {
                const std::size_t j = rng.next_u64() % (i + 1);
                std::swap(work_[i], work_[j]);
            }
        }
    }

    Ball solve() {
        std::array<Vec3, 4> support{};
        return mb(work_.size(), support, 0);
    }

private:
    Ball ball_of_support(const std::array<Vec3, 4>& support, int ns) const {
        if (ns == 0) return Ball{};
        auto cs = circumsphere_in_hull(support.data(), ns, dim_);
        if (cs) return Ball{cs->center, cs->radius};
        return small_set_ball(support.data(), ns, dim_);
    }

    Ball mb(std::size_t n, std::array<Vec3, 4>& support, int ns) {
        Ball b = ball_of_support(support, ns);
        if (ns == dim_ + 1) return b;
        for (std::size_t i = 0; i < n; ++i) {
            if (!b.contains(work_[i], dim_, 1e-13)) {
                support[ns] = work_[i];
                b = mb(i, support, ns + 1);
                // Move-to-front keeps hard points early in later passes.
                const Vec3 hard = work_[i];
                for (std::size_t j = i; j > 0; --j) work_[j] = work_[j - 1];
                work_[0] = hard;
            }
        }
        return b;
    }

    int dim_;
    std::vector<Vec3> work_;
};

}  // namespace detail

/// Exact smallest enclosing ball of a nonempty point set in dimension 2 or 3
/// (Welzl's move-to-front algorithm with an in-hull circumsphere basis;
/// direct formulas for one, two or three points).
inline Ball min_enclosing_ball(const std::vector<Vec3>& pts, int dim) {
    if (pts.empty()) throw DomainError("min_enclosing_ball: empty input");
    if (pts.size() == 1) return Ball{pts[0], 0.0};
    if (pts.size() == 2) {
        Ball b;
        b.center = vscale(vadd(pts[0], pts[1]), 0.5);
        b.radius = 0.5 * vdist(pts[0], pts[1], dim);
        return b;
    }
    if (pts.size() == 3) return detail::small_set_ball(pts.data(), 3, dim);
    detail::WelzlSolver solver(pts.data(), pts.size(), dim);
    return solver.solve();
}

}  // namespace stochtop
