#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "manymatch/core.hpp"
#include "manymatch/order_tree.hpp"

namespace manymatch::penalty1d {

template <class Scalar>
struct LinePoint {
    Scalar position{};
    Color color = Color::Red;
    Scalar penalty{};
};

// Branch boundary recorded for one point: for a red point, indices k <= k*
// pay the penalty; for a blue point, indices k >= k° do.
struct SweepDecision {
    Color color = Color::Red;
    long threshold = 0;
};

template <class Scalar>
struct Solution {
    Scalar cost{};
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (red index, blue index) into the input
    std::vector<std::size_t> unmatched;                       // input indices paying their penalty
};

// F_x as F_x(0), two offsets and the differences ΔF_x(k) split into k <= 0
// (minus tree) and k > 0 (plus tree). The domain is [L, R] with
// L = -|minus|, R = |plus|.
template <class Scalar>
class CostProfile {
public:
    long left() const { return -static_cast<long>(minus_.size()); }
    long right() const { return static_cast<long>(plus_.size()); }
    const Scalar& f0() const { return f0_; }

    std::optional<Scalar> query(long k) const {
        if (k < left() || k > right()) return std::nullopt;
        if (k == 0) return f0_;
        if (k > 0) return f0_ + plus_.prefix_sum(static_cast<std::size_t>(k)) + o_plus_ * k;
        const long m = -k;
        return f0_ - (minus_.suffix_sum(static_cast<std::size_t>(m)) + o_minus_ * m);
    }

    // Offset-corrected ΔF(L+1), ..., ΔF(R).
    std::vector<Scalar> differences() const {
        std::vector<Scalar> out;
        out.reserve(minus_.size() + plus_.size());
        for (auto& v : minus_.values()) out.push_back(v + o_minus_);
        for (auto& v : plus_.values()) out.push_back(v + o_plus_);
        return out;
    }

    bool is_convex() const {
        const auto d = differences();
        return std::is_sorted(d.begin(), d.end());
    }

    std::size_t stored() const { return minus_.size() + plus_.size(); }

    // Moves the sweep by distance d, then absorbs a point of the given color
    // and penalty.
    SweepDecision advance(const Scalar& d, Color color, const Scalar& w) {
        if (d < Scalar{}) throw std::invalid_argument("penalty1d: negative distance");
        if (w < Scalar{}) throw std::invalid_argument("penalty1d: negative penalty");
        // Shift law: f(k) = F(k) + |k| d.
        o_plus_ += d;
        o_minus_ -= d;
        const long L = left();
        SweepDecision dec{color, 0};
        if (color == Color::Red) {
            // F_p(k) = min(f(k-1), f(k) + w)
            const std::size_t count =
                minus_.count_less_equal(-w - o_minus_) + plus_.count_less_equal(-w - o_plus_);
            const long kstar = L + static_cast<long>(count);
            Scalar next0 = f0_ + w;
            if (L < 0) {
                const Scalar fm1 = f0_ - (minus_.at(minus_.size() - 1) + o_minus_);
                if (fm1 < next0) next0 = fm1;
            }
            if (kstar + 1 >= 1) {
                plus_.insert_at(static_cast<std::size_t>(kstar), -w - o_plus_);
            } else {
                minus_.insert_at(count, -w - o_minus_);
                const Scalar moved = minus_.erase_at(minus_.size() - 1) + o_minus_;
                plus_.insert_at(0, moved - o_plus_);
            }
            f0_ = std::move(next0);
            dec.threshold = kstar;
        } else {
            // F_p(k) = min(f(k+1), f(k) + w)
            const std::size_t count = minus_.count_less(w - o_minus_) + plus_.count_less(w - o_plus_);
            const long kcirc = L + static_cast<long>(count);
            Scalar next0 = f0_ + w;
            if (right() > 0) {
                const Scalar f1 = f0_ + plus_.at(0) + o_plus_;
                if (f1 < next0) next0 = f1;
            }
            if (kcirc >= 1) {
                const Scalar moved = plus_.erase_at(0) + o_plus_;
                minus_.insert_at(minus_.size(), moved - o_minus_);
                plus_.insert_at(static_cast<std::size_t>(kcirc - 1), w - o_plus_);
            } else {
                minus_.insert_at(count, w - o_minus_);
            }
            f0_ = std::move(next0);
            dec.threshold = kcirc;
        }
        return dec;
    }

private:
    Scalar f0_{};
    Scalar o_plus_{};
    Scalar o_minus_{};
    OrderTree<Scalar> plus_;
    OrderTree<Scalar> minus_;
};

template <class Scalar>
CostProfile<Scalar> profile_init() {
    return CostProfile<Scalar>{};
}

namespace detail {

// Sweep order: by position, blue before red at equal positions.
template <class Scalar>
std::vector<std::size_t> sweep_order(const std::vector<LinePoint<Scalar>>& pts) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].position < pts[i - 1].position) throw std::invalid_argument("penalty1d: points not sorted");
    }
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (pts[a].position != pts[b].position) return pts[a].position < pts[b].position;
        return pts[a].color == Color::Blue && pts[b].color == Color::Red;
    });
    return order;
}

// Pairs matched points left to right; any pairing of the open points with the
// incoming opposite-colored point gives the same total, the stack keeps the
// edges nested.
template <class Scalar>
void pair_matched(const std::vector<LinePoint<Scalar>>& pts, const std::vector<std::size_t>& order,
                  const std::vector<char>& matched, Solution<Scalar>& sol) {
    std::vector<std::size_t> open;
    for (std::size_t i : order) {
        if (!matched[i]) {
            sol.unmatched.push_back(i);
            continue;
        }
        if (!open.empty() && pts[open.back()].color != pts[i].color) {
            const std::size_t j = open.back();
            open.pop_back();
            if (pts[i].color == Color::Red) sol.pairs.emplace_back(i, j);
            else sol.pairs.emplace_back(j, i);
        } else {
            open.push_back(i);
        }
    }
    if (!open.empty()) throw InvariantError("penalty1d: unbalanced witness");
    std::sort(sol.pairs.begin(), sol.pairs.end());
    std::sort(sol.unmatched.begin(), sol.unmatched.end());
}

template <class Scalar>
Solution<Scalar> run(const std::vector<LinePoint<Scalar>>& pts, const std::vector<Scalar>& penalty) {
    const auto order = sweep_order(pts);
    CostProfile<Scalar> prof;
    std::vector<SweepDecision> decisions;
    decisions.reserve(pts.size());
    const bool check = debug_enabled();
    for (std::size_t s = 0; s < order.size(); ++s) {
        const std::size_t i = order[s];
        const Scalar d = s == 0 ? Scalar{} : pts[i].position - pts[order[s - 1]].position;
        const std::size_t before = prof.stored();
        decisions.push_back(prof.advance(d, pts[i].color, penalty[i]));
        if (check) {
            require(prof.stored() == before + 1, "penalty1d: profile must grow by one");
            require(prof.is_convex(), "penalty1d: profile lost convexity");
        }
    }
    Solution<Scalar> sol;
    sol.cost = pts.empty() ? Scalar{} : *prof.query(0);
    std::vector<char> matched(pts.size(), 0);
    long k = 0;
    for (std::size_t s = order.size(); s-- > 0;) {
        const auto& dec = decisions[s];
        const std::size_t i = order[s];
        if (dec.color == Color::Red) {
            if (k > dec.threshold) {
                matched[i] = 1;
                --k;
            }
        } else if (k < dec.threshold) {
            matched[i] = 1;
            ++k;
        }
    }
    require(k == 0, "penalty1d: reverse pass did not return to index 0");
    pair_matched(pts, order, matched, sol);
    return sol;
}

}  // namespace detail

// Minimum of sum |r - b| over matched pairs plus penalties of unmatched
// points. Points must be sorted by position.
template <class Scalar>
Solution<Scalar> solve(const std::vector<LinePoint<Scalar>>& points) {
    std::vector<Scalar> penalty;
    penalty.reserve(points.size());
    for (const auto& p : points) penalty.push_back(p.penalty);
    return detail::run(points, penalty);
}

// As solve, but points listed in `forced` must be matched. Returns nullopt
// when no such matching exists.
template <class Scalar>
std::optional<Solution<Scalar>> solve_with_forced(const std::vector<LinePoint<Scalar>>& points,
                                                  const std::vector<std::size_t>& forced) {
    if (forced.empty()) return solve(points);
    std::vector<char> is_forced(points.size(), 0);
    for (std::size_t f : forced) {
        if (f >= points.size()) throw std::out_of_range("penalty1d: forced index");
        is_forced[f] = 1;
    }
    // A penalty above the cost of any matching that leaves no forced point
    // free acts as infinity.
    Scalar big = Scalar{1};
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!is_forced[i]) big += points[i].penalty;
    }
    if (points.size() > 1) {
        big += (points.back().position - points.front().position) * static_cast<std::int64_t>(points.size());
    }
    std::vector<Scalar> penalty;
    penalty.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) penalty.push_back(is_forced[i] ? big : points[i].penalty);
    auto sol = detail::run(points, penalty);
    for (std::size_t i : sol.unmatched) {
        if (is_forced[i]) return std::nullopt;
    }
    return sol;
}

// Cost of a witness, re-evaluated from scratch.
template <class Scalar>
Scalar witness_cost(const std::vector<LinePoint<Scalar>>& points, const Solution<Scalar>& sol) {
    Scalar c{};
    for (auto [r, b] : sol.pairs) {
        const Scalar d = points[r].position - points[b].position;
        c += d < Scalar{} ? Scalar{} - d : d;
    }
    for (std::size_t i : sol.unmatched) c += points[i].penalty;
    return c;
}

}  // namespace manymatch::penalty1d
