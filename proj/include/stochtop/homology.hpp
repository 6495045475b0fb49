#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "stochtop/cech.hpp"
#include "stochtop/core.hpp"
#include "stochtop/manifold.hpp"

namespace stochtop {

/// Sparse boundary matrix over GF(2): one column per k-simplex, each column
/// the sorted row indices of its (k-1)-faces.  Column addition is symmetric
/// difference.
struct BoundaryMatrix {
    int k = 0;  // maps C_k -> C_{k-1}
    std::size_t rows = 0;
    std::vector<std::vector<std::uint32_t>> columns;
};

namespace detail {

// Ordinal of each simplex within its dimension, keyed by vertex list.
inline std::map<std::vector<std::uint32_t>, std::uint32_t> index_of_dim(
    const CechComplex& c, int k) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> idx;
    if (k < 0 || k >= static_cast<int>(c.by_dim.size())) return idx;
    for (std::uint32_t i = 0; i < c.by_dim[k].size(); ++i)
        idx.emplace(c.by_dim[k][i].vertices, i);
    return idx;
}

inline void xor_columns(std::vector<std::uint32_t>& target,
                        const std::vector<std::uint32_t>& source) {
    std::vector<std::uint32_t> merged;
    merged.reserve(target.size() + source.size());
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(merged));
    target = std::move(merged);
}

// Standard column reduction; returns the rank.  `cleared` marks columns
// known to reduce to zero (the clearing optimization), which are skipped.
// `pivot_rows`, when given, collects the low entries of the reduced columns.
inline std::size_t reduce_rank(BoundaryMatrix& bm, const std::vector<bool>* cleared,
                               std::vector<bool>* pivot_rows) {
    std::vector<std::int64_t> owner_of_low(bm.rows, -1);
    std::size_t rank = 0;
    for (std::size_t j = 0; j < bm.columns.size(); ++j) {
        if (cleared && (*cleared)[j]) {
            bm.columns[j].clear();
            continue;
        }
        auto& col = bm.columns[j];
        while (!col.empty()) {
            const std::uint32_t low = col.back();
            const std::int64_t other = owner_of_low[low];
            if (other < 0) break;
            xor_columns(col, bm.columns[static_cast<std::size_t>(other)]);
        }
        if (!col.empty()) {
            owner_of_low[col.back()] = static_cast<std::int64_t>(j);
            if (pivot_rows) (*pivot_rows)[col.back()] = true;
            ++rank;
        }
    }
    return rank;
}

}  // namespace detail

/// Boundary matrix of the k-simplices (zero map for k = 0).  Columns follow
/// the complex's (filtration, vertex) order.
inline BoundaryMatrix boundary_matrix(const CechComplex& c, int k) {
    if (k < 0 || k >= static_cast<int>(c.by_dim.size()))
        throw DomainError("boundary_matrix: k exceeds built dimension");
    BoundaryMatrix bm;
    bm.k = k;
    if (k == 0) {
        bm.rows = 0;
        bm.columns.assign(c.by_dim[0].size(), {});
        return bm;
    }
    bm.rows = c.by_dim[k - 1].size();
    const auto face_index = detail::index_of_dim(c, k - 1);
    bm.columns.reserve(c.by_dim[k].size());
    std::vector<std::uint32_t> face;
    for (const Simplex& s : c.by_dim[k]) {
        std::vector<std::uint32_t> col;
        col.reserve(s.vertices.size());
        for (std::size_t omit = 0; omit < s.vertices.size(); ++omit) {
            face.clear();
            for (std::size_t i = 0; i < s.vertices.size(); ++i)
                if (i != omit) face.push_back(s.vertices[i]);
            auto it = face_index.find(face);
            if (it == face_index.end())
                throw DomainError("boundary_matrix: complex is not face-closed");
            col.push_back(it->second);
        }
        std::sort(col.begin(), col.end());
        bm.columns.push_back(std::move(col));
    }
    return bm;
}

/// Betti numbers beta_0..beta_kmax.  `upper_bound_only[k]` flags degrees
/// whose value could only be an upper bound because the dimension cap hid
/// potential (k+1)-simplices.
struct BettiVector {
    std::vector<long> beta;
    std::vector<bool> upper_bound_only;

    bool any_upper_bound() const {
        for (bool b : upper_bound_only)
            if (b) return true;
        return false;
    }
};

/// Ranks via column reduction with clearing, processed from the top
/// dimension down.
inline BettiVector betti_numbers(const CechComplex& c, int kmax) {
    if (kmax < 0) throw DomainError("betti_numbers: kmax must be >= 0");
    const int top = std::min<int>(kmax + 1, static_cast<int>(c.by_dim.size()) - 1);

    // rank[k] = rank of the boundary map C_k -> C_{k-1}.
    std::vector<std::size_t> rank(static_cast<std::size_t>(top) + 2, 0);
    std::vector<bool> cleared_below;
    for (int k = top; k >= 1; --k) {
        BoundaryMatrix bm = boundary_matrix(c, k);
        std::vector<bool> pivots(bm.rows, false);
        const std::vector<bool>* cleared = (k == top) ? nullptr : &cleared_below;
        rank[k] = detail::reduce_rank(bm, cleared, &pivots);
        cleared_below = std::move(pivots);
    }

    BettiVector out;
    for (int k = 0; k <= kmax; ++k) {
        const std::size_t n_k =
            k < static_cast<int>(c.by_dim.size()) ? c.by_dim[k].size() : 0;
        const long beta = static_cast<long>(n_k) - static_cast<long>(rank[k]) -
                          static_cast<long>(k + 1 <= top ? rank[k + 1] : 0);
        out.beta.push_back(beta);
        out.upper_bound_only.push_back(!c.complete_up_to(k + 1));
    }
    return out;
}

/// Euler characteristic: alternating sum of simplex counts.
inline long euler_characteristic(const CechComplex& c) {
    long chi = 0;
    int sign = 1;
    for (const auto& dim : c.by_dim) {
        chi += sign * static_cast<long>(dim.size());
        sign = -sign;
    }
    return chi;
}

/// Betti numbers of the model space itself, truncated at kmax.
inline BettiVector reference_betti(const ManifoldModel& m, int kmax) {
    std::vector<long> full;
    switch (m.kind()) {
        case ManifoldKind::FlatTorus:
            full = m.dim() == 2 ? std::vector<long>{1, 2, 1} : std::vector<long>{1, 3, 3, 1};
            break;
        case ManifoldKind::FlatCylinder:
            full = m.dim() == 2 ? std::vector<long>{1, 1} : std::vector<long>{1, 2, 1};
            break;
        case ManifoldKind::SolidDisk:
            full = {1, 0};
            break;
    }
    BettiVector out;
    for (int k = 0; k <= kmax; ++k) {
        out.beta.push_back(k < static_cast<int>(full.size()) ? full[k] : 0);
        out.upper_bound_only.push_back(false);
    }
    return out;
}

/// Per-degree equality flags plus their conjunction.  Over a field,
/// isomorphism in degree k is equality of the k-th Betti numbers.
struct HomologyMatch {
    std::vector<bool> degree_match;
    bool all = true;
};

inline HomologyMatch homology_matches(const BettiVector& observed, const BettiVector& reference,
                                      int kmax) {
    if (static_cast<int>(observed.beta.size()) <= kmax ||
        static_cast<int>(reference.beta.size()) <= kmax)
        throw DomainError("homology_matches: vectors shorter than kmax");
    HomologyMatch out;
    for (int k = 0; k <= kmax; ++k) {
        const bool ok = observed.beta[k] == reference.beta[k];
        out.degree_match.push_back(ok);
        out.all = out.all && ok;
    }
    return out;
}

/// beta_0 by union-find over edges; used as an independent cross-check.
inline long component_count(const CechComplex& c) {
    const std::size_t n = c.by_dim.empty() ? 0 : c.by_dim[0].size();
    std::vector<std::uint32_t> parent(n);
    for (std::uint32_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    if (c.by_dim.size() > 1)
        for (const Simplex& e : c.by_dim[1]) {
            const auto a = find(e.vertices[0]), b = find(e.vertices[1]);
            if (a != b) parent[a] = b;
        }
    long comps = 0;
    for (std::uint32_t i = 0; i < n; ++i)
        if (find(i) == i) ++comps;
    return comps;
}

}  // namespace stochtop
