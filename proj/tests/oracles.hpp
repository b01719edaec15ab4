// Independent reference implementations used only by the tests.  None of
// these call into the library's numerics; they work on plain std::vector.

#ifndef RELUCX_TEST_ORACLES_HPP
#define RELUCX_TEST_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "relucx/model.hpp"

namespace oracle_ref {

using Mat = std::vector<std::vector<double>>;
using Vec = std::vector<double>;

struct PlainLayer
{
    Mat w;
    Vec b;
};

inline std::vector<PlainLayer> to_plain(const relucx::ReluNetwork& net)
{
    std::vector<PlainLayer> out;
    for (const auto& l : net.layers()) {
        PlainLayer p;
        for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
            p.w.emplace_back();
            for (Eigen::Index c = 0; c < l.weights.cols(); ++c)
                p.w.back().push_back(l.weights(r, c));
            p.b.push_back(l.bias(r));
        }
        out.push_back(std::move(p));
    }
    return out;
}

/// Pre-activations of every unit, layer after layer.
inline Vec forward(const std::vector<PlainLayer>& layers, Vec x)
{
    Vec all;
    for (std::size_t t = 0; t < layers.size(); ++t) {
        Vec pre(layers[t].b);
        for (std::size_t r = 0; r < pre.size(); ++r)
            for (std::size_t c = 0; c < x.size(); ++c)
                pre[r] += layers[t].w[r][c] * x[c];
        all.insert(all.end(), pre.begin(), pre.end());
        x = pre;
        for (auto& v : x)
            v = std::max(v, 0.0);
    }
    return all;
}

/// Gaussian elimination with partial pivoting; nullopt when (near) singular.
inline std::optional<Vec> solve(Mat a, Vec b)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col]))
                piv = r;
        if (std::abs(a[piv][col]) < 1e-12)
            return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col)
                continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c)
                a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = b[i] / a[i][i];
    return x;
}

inline int sign_of(double v, double tol)
{
    return v > tol ? 1 : (v < -tol ? -1 : 0);
}

/**
 * Vertices of a one-hidden-layer net by brute force: every n0-subset of the
 * n1 + 1 node maps, under every activation pattern of the hidden units, is
 * solved and kept when the pattern agrees with the solution.  Returns the
 * sign sequences, with zeros at the solved equations.
 */
inline std::set<std::vector<int>> shallow_vertices(const relucx::ReluNetwork& net)
{
    const auto layers = to_plain(net);
    const std::size_t n0 = static_cast<std::size_t>(net.input_dim());
    const std::size_t n1 = layers[0].b.size();
    const std::size_t total = n1 + 1;
    std::set<std::vector<int>> out;

    std::vector<std::size_t> subset(n0);
    std::vector<bool> pick(total, false);
    std::fill(pick.end() - static_cast<long>(n0), pick.end(), true);
    do {
        subset.clear();
        for (std::size_t i = 0; i < total; ++i)
            if (pick[i])
                subset.push_back(i);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n1); ++mask) {
            // Output functional under this activation pattern.
            Vec out_w(n0, 0.0);
            double out_b = layers[1].b[0];
            for (std::size_t u = 0; u < n1; ++u) {
                if (!((mask >> u) & 1))
                    continue;
                for (std::size_t c = 0; c < n0; ++c)
                    out_w[c] += layers[1].w[0][u] * layers[0].w[u][c];
                out_b += layers[1].w[0][u] * layers[0].b[u];
            }
            Mat a;
            Vec rhs;
            for (std::size_t e : subset) {
                if (e < n1) {
                    a.push_back(layers[0].w[e]);
                    rhs.push_back(-layers[0].b[e]);
                }
                else {
                    a.push_back(out_w);
                    rhs.push_back(-out_b);
                }
            }
            const auto x = solve(a, rhs);
            if (!x)
                continue;
            const Vec vals = forward(layers, *x);
            bool ok = true;
            std::vector<int> signs(total);
            for (std::size_t i = 0; i < total; ++i) {
                const bool solved = std::find(subset.begin(), subset.end(), i) != subset.end();
                if (solved) {
                    signs[i] = 0;
                    if (std::abs(vals[i]) > 1e-7)
                        ok = false;
                    continue;
                }
                signs[i] = sign_of(vals[i], 1e-9);
                if (signs[i] == 0)
                    ok = false;
                if (i < n1 && ((mask >> i) & 1) != (signs[i] > 0 ? 1u : 0u))
                    ok = false;
            }
            // Hidden units on their own hyperplane contribute nothing either way.
            if (ok)
                out.insert(signs);
        }
    } while (std::next_permutation(pick.begin(), pick.end()));
    return out;
}

/// Dense GF(2) rank by row reduction on a byte matrix.
inline std::size_t naive_gf2_rank(std::vector<std::vector<std::uint8_t>> m)
{
    if (m.empty())
        return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && !m[piv][c])
            ++piv;
        if (piv == rows)
            continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = 0; r < rows; ++r)
            if (r != rank && m[r][c])
                for (std::size_t k = c; k < cols; ++k)
                    m[r][k] ^= m[rank][k];
        ++rank;
    }
    return rank;
}

inline std::uint64_t binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

/// Connected components of a graph given as an edge list (union-find).
inline std::size_t components(std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
{
    std::vector<std::size_t> parent(vertices);
    for (std::size_t i = 0; i < vertices; ++i)
        parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t count = vertices;
    for (const auto& [a, b] : edges) {
        const auto ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[ra] = rb;
            --count;
        }
    }
    return count;
}

}   // namespace oracle_ref

#endif
