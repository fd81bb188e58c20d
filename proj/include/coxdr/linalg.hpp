#pragma once

#include "coxdr/rational.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace coxdr {

using RationalMatrix = std::vector<RationalVector>;

struct RowEchelon {
    RationalMatrix rows;              // reduced row echelon form, zero rows dropped
    std::vector<std::size_t> pivots;  // pivot column of each row
    std::size_t rank() const { return rows.size(); }
};

/// Gauss-Jordan elimination over the rationals.
inline RowEchelon row_reduce(RationalMatrix m, std::size_t cols) {
    for (const auto& r : m)
        if (r.size() != cols)
            throw std::invalid_argument("row_reduce: ragged matrix");
    RowEchelon out;
    std::size_t lead = 0;
    for (std::size_t c = 0; c < cols && lead < m.size(); ++c) {
        std::size_t p = lead;
        while (p < m.size() && sgn(m[p][c]) == 0)
            ++p;
        if (p == m.size())
            continue;
        std::swap(m[p], m[lead]);
        Rational inv = 1 / m[lead][c];
        for (auto& x : m[lead])
            x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == lead || sgn(m[r][c]) == 0)
                continue;
            Rational f = m[r][c];
            for (std::size_t k = c; k < cols; ++k)
                if (sgn(m[lead][k]) != 0)
                    m[r][k] -= f * m[lead][k];
        }
        out.pivots.push_back(c);
        ++lead;
    }
    m.resize(lead);
    out.rows = std::move(m);
    return out;
}

inline std::size_t rank(const RationalMatrix& m, std::size_t cols) { return row_reduce(m, cols).rank(); }

/// Basis of {x : m x = 0}.
inline RationalMatrix nullspace(const RationalMatrix& m, std::size_t cols) {
    auto re = row_reduce(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : re.pivots)
        is_pivot[p] = true;
    RationalMatrix basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free])
            continue;
        RationalVector v = zeros(cols);
        v[free] = 1;
        for (std::size_t r = 0; r < re.rows.size(); ++r)
            v[re.pivots[r]] = -re.rows[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Some solution of m x = b, if one exists.
inline std::optional<RationalVector> solve(const RationalMatrix& m, const RationalVector& b, std::size_t cols) {
    if (m.size() != b.size())
        throw std::invalid_argument("solve: row count mismatch");
    RationalMatrix aug = m;
    for (std::size_t i = 0; i < aug.size(); ++i)
        aug[i].push_back(b[i]);
    auto re = row_reduce(aug, cols + 1);
    RationalVector x = zeros(cols);
    for (std::size_t r = 0; r < re.rows.size(); ++r) {
        if (re.pivots[r] == cols)
            return std::nullopt;
        x[re.pivots[r]] = re.rows[r][cols];
    }
    return x;
}

struct AffineHull {
    RationalVector base;            // a point of the hull (the first input point)
    RationalMatrix directions;      // reduced echelon basis of the direction space
    std::vector<std::size_t> pivots;  // coordinates onto which projection is injective
    std::size_t dimension = 0;
};

inline AffineHull affine_hull(const std::vector<RationalVector>& points) {
    if (points.empty())
        throw std::invalid_argument("affine_hull: empty input");
    const std::size_t n = points.front().size();
    RationalMatrix diffs;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].size() != n)
            throw std::invalid_argument("affine_hull: dimension mismatch");
        diffs.push_back(points[i] - points.front());
    }
    auto re = row_reduce(std::move(diffs), n);
    AffineHull h;
    h.base = points.front();
    h.directions = std::move(re.rows);
    h.pivots = std::move(re.pivots);
    h.dimension = h.directions.size();
    return h;
}

inline RationalVector project(const RationalVector& p, const std::vector<std::size_t>& coords) {
    RationalVector r;
    r.reserve(coords.size());
    for (auto c : coords)
        r.push_back(p.at(c));
    return r;
}

/// Orthogonal projection of v onto the complement of span(basis).
inline RationalVector project_off(const RationalVector& v, const RationalMatrix& basis) {
    // Gram-Schmidt over the rationals; basis assumed linearly independent.
    RationalMatrix ortho;
    for (const auto& b : basis) {
        RationalVector w = b;
        for (const auto& o : ortho)
            w = w - (dot(w, o) / dot(o, o)) * o;
        if (!is_zero(w))
            ortho.push_back(std::move(w));
    }
    RationalVector r = v;
    for (const auto& o : ortho)
        r = r - (dot(r, o) / dot(o, o)) * o;
    return r;
}

} // namespace coxdr
