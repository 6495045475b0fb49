#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "stochtop/core.hpp"
#include "stochtop/manifold.hpp"

namespace stochtop {

/// Bucket grid over the fundamental domain with periodic wrapping handled at
/// query time (no point duplication, so no duplicate pairs at seams).
///
/// Range queries return supersets that are then filtered by exact geodesic
/// distance.  One instance serves one sample; queries are not synchronized,
/// so share instances across threads read-only only via distinct objects.
class NeighborGrid {
public:
    NeighborGrid(const ManifoldModel& m, const std::vector<Point>& points, double cell_target)
        : model_(&m), points_(&points) {
        if (!(cell_target > 0.0)) throw DomainError("NeighborGrid: cell size must be positive");
        const int d = m.dim();
        for (int a = 0; a < d; ++a) {
            double origin = 0.0, extent;
            if (m.kind() == ManifoldKind::SolidDisk) {
                origin = -m.shape()[0];
                extent = 2.0 * m.shape()[0];
            } else {
                extent = m.shape()[a];
            }
            origin_[a] = origin;
            extent_[a] = extent;
            ncells_[a] = std::max(1, static_cast<int>(std::floor(extent / cell_target)));
            cell_len_[a] = extent / ncells_[a];
            wrap_[a] = a < m.periodic_axes();
        }
        int total = 1;
        for (int a = 0; a < d; ++a) total *= ncells_[a];
        buckets_.assign(static_cast<std::size_t>(total), {});
        for (std::uint32_t i = 0; i < points.size(); ++i)
            buckets_[flat_index(cell_of(points[i]))].push_back(i);
    }

    const ManifoldModel& model() const { return *model_; }

    /// Indices of all points with distance <= cutoff from q (including any
    /// point equal to q), ascending.
    std::vector<std::uint32_t> indices_within(const Point& q, double cutoff) const {
        std::vector<std::uint32_t> out;
        visit_box(q, cutoff, [&](std::uint32_t j) {
            if (model_->distance_unchecked(q, (*points_)[j]) <= cutoff) out.push_back(j);
            return false;
        });
        std::sort(out.begin(), out.end());
        return out;
    }

    /// True iff some point not in `exclude` (sorted) lies strictly inside the
    /// open ball of the given radius, with an inward tolerance.
    bool any_other_in_open_ball(const Point& q, double radius,
                                const std::vector<std::uint32_t>& exclude,
                                double tol = 1e-12) const {
        const double thresh = radius - tol;
        return visit_box(q, radius, [&](std::uint32_t j) {
            if (std::binary_search(exclude.begin(), exclude.end(), j)) return false;
            return model_->distance_unchecked(q, (*points_)[j]) < thresh;
        });
    }

    /// Exact distance from q to the nearest sample point (+inf when the
    /// sample is empty).  `cap_hint` sizes the first search box; the box is
    /// grown until the result is provably exact.
    double nearest_distance(const Point& q, double cap_hint) const {
        if (points_->empty()) return std::numeric_limits<double>::infinity();
        double cap = cap_hint > 0.0 ? cap_hint : min_cell_len();
        for (;;) {
            double best = std::numeric_limits<double>::infinity();
            const bool exhaustive = covers_domain(cap);
            visit_box(q, cap, [&](std::uint32_t j) {
                best = std::min(best, model_->distance_unchecked(q, (*points_)[j]));
                return false;
            });
            if (best <= cap || exhaustive) return best;
            cap *= 2.0;
        }
    }

    /// Calls f(i, j, dist) for every unordered pair with distance <= cutoff,
    /// i < j, in ascending (i, j) order.
    template <typename F>
    void for_each_pair(double cutoff, F&& f) const {
        std::vector<std::uint32_t> js;
        for (std::uint32_t i = 0; i < points_->size(); ++i) {
            js.clear();
            visit_box((*points_)[i], cutoff, [&](std::uint32_t j) {
                if (j > i) js.push_back(j);
                return false;
            });
            std::sort(js.begin(), js.end());
            for (std::uint32_t j : js) {
                const double dist = model_->distance_unchecked((*points_)[i], (*points_)[j]);
                if (dist <= cutoff) f(i, j, dist);
            }
        }
    }

    /// Sorted neighbor lists restricted to higher indices, for ordered clique
    /// expansion: adj[i] = { j > i : dist(p_i, p_j) <= cutoff }.
    std::vector<std::vector<std::uint32_t>> higher_adjacency(double cutoff) const {
        std::vector<std::vector<std::uint32_t>> adj(points_->size());
        for_each_pair(cutoff, [&](std::uint32_t i, std::uint32_t j, double) {
            adj[i].push_back(j);
        });
        return adj;
    }

private:
    using CellIdx = std::array<int, 3>;

    double min_cell_len() const {
        double m = cell_len_[0];
        for (int a = 1; a < model_->dim(); ++a) m = std::min(m, cell_len_[a]);
        return m;
    }

    bool covers_domain(double cap) const {
        for (int a = 0; a < model_->dim(); ++a) {
            const int span = span_for(a, cap);
            if (wrap_[a]) {
                if (2 * span + 1 < ncells_[a]) return false;
            } else {
                if (span < ncells_[a] - 1) return false;
            }
        }
        return true;
    }

    int span_for(int a, double cutoff) const {
        return static_cast<int>(std::ceil(cutoff / cell_len_[a]));
    }

    CellIdx cell_of(const Point& p) const {
        CellIdx c{0, 0, 0};
        for (int a = 0; a < model_->dim(); ++a) {
            int idx = static_cast<int>(std::floor((p.c[a] - origin_[a]) / cell_len_[a]));
            c[a] = std::min(std::max(idx, 0), ncells_[a] - 1);
        }
        return c;
    }

    std::size_t flat_index(const CellIdx& c) const {
        std::size_t idx = 0;
        for (int a = 0; a < model_->dim(); ++a) idx = idx * ncells_[a] + c[a];
        return idx;
    }

    // Unique per-axis candidate indices within `span` cells of `center`.
    void axis_candidates(int a, int center, int span, std::vector<int>& out) const {
        out.clear();
        const int n = ncells_[a];
        if (wrap_[a]) {
            if (2 * span + 1 >= n) {
                for (int i = 0; i < n; ++i) out.push_back(i);
                return;
            }
            for (int di = -span; di <= span; ++di) {
                int idx = (center + di) % n;
                if (idx < 0) idx += n;
                out.push_back(idx);
            }
            std::sort(out.begin(), out.end());
        } else {
            const int lo = std::max(0, center - span);
            const int hi = std::min(n - 1, center + span);
            for (int i = lo; i <= hi; ++i) out.push_back(i);
        }
    }

    // Visits every point index in the box of cells within `cutoff` of q.
    // The visitor returns true to stop early; visit_box reports whether it
    // stopped.
    template <typename F>
    bool visit_box(const Point& q, double cutoff, F&& f) const {
        const int d = model_->dim();
        const CellIdx center = cell_of(q);
        thread_local std::array<std::vector<int>, 3> axis;
        for (int a = 0; a < d; ++a) axis_candidates(a, center[a], span_for(a, cutoff), axis[a]);
        CellIdx c{0, 0, 0};
        const std::size_t n0 = axis[0].size();
        const std::size_t n1 = d > 1 ? axis[1].size() : 1;
        const std::size_t n2 = d > 2 ? axis[2].size() : 1;
        for (std::size_t i0 = 0; i0 < n0; ++i0) {
            c[0] = axis[0][i0];
            for (std::size_t i1 = 0; i1 < n1; ++i1) {
                if (d > 1) c[1] = axis[1][i1];
                for (std::size_t i2 = 0; i2 < n2; ++i2) {
                    if (d > 2) c[2] = axis[2][i2];
                    for (std::uint32_t j : buckets_[flat_index(c)])
                        if (f(j)) return true;
                }
            }
        }
        return false;
    }

    const ManifoldModel* model_;
    const std::vector<Point>* points_;
    Vec3 origin_{0, 0, 0};
    Vec3 extent_{0, 0, 0};
    Vec3 cell_len_{0, 0, 0};
    std::array<int, 3> ncells_{1, 1, 1};
    std::array<bool, 3> wrap_{false, false, false};
    std::vector<std::vector<std::uint32_t>> buckets_;
};

}  // namespace stochtop
