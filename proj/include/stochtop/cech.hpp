#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <vector>

#include "stochtop/core.hpp"
#include "stochtop/grid.hpp"
#include "stochtop/manifold.hpp"
#include "stochtop/miniball.hpp"

namespace stochtop {

/// A simplex of the complex: strictly increasing vertex indices plus the
/// radius of the smallest enclosing ball of its vertices (its filtration
/// value).
struct Simplex {
    std::vector<std::uint32_t> vertices;
    double filtration = 0.0;

    int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

/// Cech complex of a point sample at radius r, truncated at dimension
/// `cap`.  A vertex set is a simplex iff the smallest ball enclosing its
/// lifted representatives has radius <= r (closed-ball convention), which is
/// the nonempty-intersection test for the r-balls in a Euclidean chart.
struct CechComplex {
    std::vector<std::vector<Simplex>> by_dim;  // by_dim[k] sorted by (filtration, vertices)
    double radius = 0.0;
    int cap = 0;

    int max_dim() const {
        for (int k = static_cast<int>(by_dim.size()) - 1; k >= 0; --k)
            if (!by_dim[k].empty()) return k;
        return -1;
    }

    /// True when every simplex of the untruncated complex with dim <= k is
    /// present.  Dimensions up to the cap are always fully enumerated, and if
    /// the cap dimension came out empty nothing larger can exist.
    bool complete_up_to(int k) const { return k <= cap || max_dim() < cap; }

    std::size_t total_simplices() const {
        std::size_t n = 0;
        for (const auto& dim : by_dim) n += dim.size();
        return n;
    }
};

/// Number of simplices per dimension 0..max_dim.
inline std::vector<std::size_t> simplex_counts(const CechComplex& c) {
    std::vector<std::size_t> counts;
    const int top = c.max_dim();
    for (int k = 0; k <= std::max(top, 0); ++k)
        counts.push_back(k < static_cast<int>(c.by_dim.size()) ? c.by_dim[k].size() : 0);
    return counts;
}

namespace detail {

// Sorted intersection of a sorted list with adj[v], keeping entries > v.
inline void intersect_higher(const std::vector<std::uint32_t>& current,
                             const std::vector<std::uint32_t>& adj_v,
                             std::vector<std::uint32_t>& out) {
    out.clear();
    std::set_intersection(current.begin(), current.end(), adj_v.begin(), adj_v.end(),
                          std::back_inserter(out));
}

}  // namespace detail

/// Build the Cech complex.  Requires 2r < injectivity radius so that every
/// candidate simplex fits in one Euclidean chart.  Simplices above dimension
/// `cap` are not enumerated.
inline CechComplex build_cech(const ManifoldModel& m, const PointSample& sample, double r,
                              int cap) {
    if (!(r > 0.0)) throw DomainError("build_cech: radius must be positive");
    if (cap < 0) throw DomainError("build_cech: dimension cap must be >= 0");
    if (!(2.0 * r < m.injectivity_radius()))
        throw ChartError("build_cech: radius too large for chart (2r >= injectivity radius)");

    const int d = m.dim();
    const auto& pts = sample.points;
    CechComplex complex;
    complex.radius = r;
    complex.cap = cap;
    complex.by_dim.assign(static_cast<std::size_t>(cap) + 1, {});

    auto& verts = complex.by_dim[0];
    verts.reserve(pts.size());
    for (std::uint32_t i = 0; i < pts.size(); ++i) verts.push_back({{i}, 0.0});
    if (cap == 0 || pts.empty()) return complex;

    NeighborGrid grid(m, pts, 2.0 * r);
    const auto adj = grid.higher_adjacency(2.0 * r);

    // Depth-first ordered expansion: each simplex is produced exactly once,
    // by extending with strictly larger vertex indices.
    std::vector<std::uint32_t> stack_verts;
    std::vector<Vec3> lifted;
    std::vector<std::vector<std::uint32_t>> cands(static_cast<std::size_t>(cap) + 1);

    struct Frame {
        int level;
        std::size_t next;
    };
    std::vector<Frame> frames;

    for (std::uint32_t base = 0; base < pts.size(); ++base) {
        if (adj[base].empty()) continue;
        stack_verts.assign(1, base);
        lifted.assign(1, pts[base].c);
        cands[1] = adj[base];
        frames.assign(1, Frame{1, 0});
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next >= cands[f.level].size()) {
                frames.pop_back();
                stack_verts.pop_back();
                lifted.pop_back();
                continue;
            }
            const std::uint32_t v = cands[f.level][f.next++];
            lifted.push_back(m.nearest_lift_unchecked(pts[base], pts[v]));
            stack_verts.push_back(v);
            const Ball ball = min_enclosing_ball(lifted, d);
            if (ball.radius <= r) {
                complex.by_dim[f.level].push_back({stack_verts, ball.radius});
                if (f.level < cap) {
                    const int next_level = f.level + 1;
                    detail::intersect_higher(cands[f.level], adj[v], cands[next_level]);
                    if (!cands[next_level].empty()) {
                        frames.push_back(Frame{next_level, 0});
                        continue;
                    }
                }
            }
            stack_verts.pop_back();
            lifted.pop_back();
        }
    }

    for (auto& dim : complex.by_dim)
        std::sort(dim.begin(), dim.end(), [](const Simplex& a, const Simplex& b) {
            if (a.filtration != b.filtration) return a.filtration < b.filtration;
            return a.vertices < b.vertices;
        });
    return complex;
}

/// Plain-text face list, one "dim v0 ... vk filtration" line per simplex,
/// for cross-checking against external tools.
inline void export_face_list(const CechComplex& c, std::ostream& os) {
    char buf[64];
    for (const auto& dim : c.by_dim) {
        for (const Simplex& s : dim) {
            os << s.dim();
            for (std::uint32_t v : s.vertices) os << ' ' << v;
            std::snprintf(buf, sizeof(buf), " %.17g", s.filtration);
            os << buf << '\n';
        }
    }
}

}  // namespace stochtop
