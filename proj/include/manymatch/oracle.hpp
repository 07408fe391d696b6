#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "manymatch/penalty1d.hpp"
#include "manymatch/prism.hpp"
#include "manymatch/radical.hpp"

namespace manymatch::oracle {

// Square matrix of costs; nullopt marks an absent edge.
template <class Scalar>
struct DenseCostMatrix {
    std::size_t size = 0;
    std::vector<std::optional<Scalar>> entries;  // row-major
    std::vector<std::size_t> row_label;
    std::vector<std::size_t> col_label;

    explicit DenseCostMatrix(std::size_t n = 0) : size(n), entries(n * n), row_label(n), col_label(n) {
        for (std::size_t i = 0; i < n; ++i) row_label[i] = col_label[i] = i;
    }
    std::optional<Scalar>& at(std::size_t i, std::size_t j) { return entries[i * size + j]; }
    const std::optional<Scalar>& at(std::size_t i, std::size_t j) const { return entries[i * size + j]; }
};

template <class Scalar>
struct DenseResult {
    std::vector<std::size_t> row_to_col;
    Scalar cost{};
    // row_dual[i] + col_dual[j] <= c(i, j), with equality on matched cells.
    std::vector<Scalar> row_dual;
    std::vector<Scalar> col_dual;
};

// Hungarian method with potentials, O(n^3). nullopt when every assignment
// uses an absent entry.
template <class Scalar>
std::optional<DenseResult<Scalar>> mcpm_dense(const DenseCostMatrix<Scalar>& m) {
    const std::size_t n = m.size;
    std::vector<Scalar> u(n + 1), v(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<std::optional<Scalar>> minv(n + 1);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            std::optional<Scalar> delta;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                if (const auto& c = m.at(i0 - 1, j - 1)) {
                    Scalar cur = *c - u[i0] - v[j];
                    if (!minv[j] || cur < *minv[j]) {
                        minv[j] = std::move(cur);
                        way[j] = j0;
                    }
                }
                if (minv[j] && (!delta || *minv[j] < *delta)) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if (!delta) return std::nullopt;
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += *delta;
                    v[j] -= *delta;
                } else if (minv[j]) {
                    *minv[j] -= *delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    DenseResult<Scalar> res;
    res.row_to_col.assign(n, 0);
    for (std::size_t j = 1; j <= n; ++j) res.row_to_col[p[j] - 1] = j - 1;
    for (std::size_t i = 0; i < n; ++i) res.cost += *m.at(i, res.row_to_col[i]);
    res.row_dual.assign(u.begin() + 1, u.end());
    res.col_dual.assign(v.begin() + 1, v.end());
    return res;
}

// Checks dual feasibility and complementary slackness of a result.
template <class Scalar>
bool certifies(const DenseCostMatrix<Scalar>& m, const DenseResult<Scalar>& r) {
    for (std::size_t i = 0; i < m.size; ++i) {
        for (std::size_t j = 0; j < m.size; ++j) {
            const auto& c = m.at(i, j);
            if (!c) continue;
            const Scalar y = r.row_dual[i] + r.col_dual[j];
            if (*c < y) return false;
            if (r.row_to_col[i] == j && !(y == *c)) return false;
        }
    }
    return true;
}

struct PrismOptimum {
    PrismMatching matching;
    RadicalSum cost;
};

// Dense minimum-cost perfect matching of the prism, restricted to `edges`
// (pairs of prism vertex ids) when given.
std::optional<PrismOptimum> prism_mcpm(const PrismGraph& pg,
                                       const std::vector<std::pair<std::size_t, std::size_t>>* edges = nullptr);

struct CoverOptimum {
    EdgeCover cover;
    RadicalSum cost;
    PrismMatching matching;
};

CoverOptimum edge_cover_opt(const Instance& inst, std::size_t max_n = 60);

// Quadratic table over (point, k) with one decision bit per cell.
template <class Scalar>
penalty1d::Solution<Scalar> penalty1d_dp(const std::vector<penalty1d::LinePoint<Scalar>>& pts) {
    const std::size_t n = pts.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (pts[i].position < pts[i - 1].position) throw std::invalid_argument("penalty1d_dp: points not sorted");
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (pts[a].position != pts[b].position) return pts[a].position < pts[b].position;
        return pts[a].color == Color::Blue && pts[b].color == Color::Red;
    });
    const long off = static_cast<long>(n);
    const std::size_t width = 2 * n + 1;
    std::vector<std::optional<Scalar>> F(width), f(width);
    F[static_cast<std::size_t>(off)] = Scalar{};
    std::vector<std::vector<char>> took_match(n, std::vector<char>(width, 0));
    for (std::size_t s = 0; s < n; ++s) {
        const auto& pt = pts[order[s]];
        const Scalar d = s == 0 ? Scalar{} : pt.position - pts[order[s - 1]].position;
        for (long k = -off; k <= off; ++k) {
            auto& cell = f[static_cast<std::size_t>(k + off)];
            cell = F[static_cast<std::size_t>(k + off)];
            if (cell) *cell += d * (k < 0 ? -k : k);
        }
        for (long k = -off; k <= off; ++k) {
            std::optional<Scalar> best;
            const auto& stay = f[static_cast<std::size_t>(k + off)];
            if (stay) best = *stay + pt.penalty;
            const long from = pt.color == Color::Red ? k - 1 : k + 1;
            if (from >= -off && from <= off) {
                const auto& mv = f[static_cast<std::size_t>(from + off)];
                if (mv && (!best || *mv < *best)) {
                    best = *mv;
                    took_match[s][static_cast<std::size_t>(k + off)] = 1;
                }
            }
            F[static_cast<std::size_t>(k + off)] = best;
        }
    }
    penalty1d::Solution<Scalar> sol;
    sol.cost = *F[static_cast<std::size_t>(off)];
    std::vector<char> matched(n, 0);
    long k = 0;
    for (std::size_t s = n; s-- > 0;) {
        if (took_match[s][static_cast<std::size_t>(k + off)]) {
            matched[order[s]] = 1;
            k += pts[order[s]].color == Color::Red ? -1 : 1;
        }
    }
    // First-in first-out pairing of open matched points.
    std::deque<std::size_t> open;
    for (std::size_t i : order) {
        if (!matched[i]) {
            sol.unmatched.push_back(i);
        } else if (!open.empty() && pts[open.front()].color != pts[i].color) {
            const std::size_t j = open.front();
            open.pop_front();
            if (pts[i].color == Color::Red) sol.pairs.emplace_back(i, j);
            else sol.pairs.emplace_back(j, i);
        } else {
            open.push_back(i);
        }
    }
    std::sort(sol.pairs.begin(), sol.pairs.end());
    std::sort(sol.unmatched.begin(), sol.unmatched.end());
    return sol;
}

// Sum of nearest-opposite distances over all points.
RadicalSum chamfer(const Instance& inst);

}  // namespace manymatch::oracle
