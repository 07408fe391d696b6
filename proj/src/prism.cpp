#include "manymatch/prism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace manymatch {

namespace {

constexpr std::int64_t kNoDist = std::numeric_limits<std::int64_t>::max();

struct BucketGrid {
    std::int64_t side = 1;
    std::int64_t cols = 1;
    std::vector<std::vector<std::size_t>> cells;

    BucketGrid(const Instance& inst, const std::vector<std::size_t>& ids) {
        const auto k = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(ids.size()))));
        side = std::max<std::int64_t>(1, inst.delta / std::max<std::int64_t>(1, k));
        cols = inst.delta / side + 1;
        cells.resize(static_cast<std::size_t>(cols * cols));
        for (std::size_t id : ids) {
            const auto& p = inst.point(id);
            cells[static_cast<std::size_t>(cell(p.x) * cols + cell(p.y))].push_back(id);
        }
    }
    std::int64_t cell(std::int64_t c) const { return (c - 1) / side; }

    NearestOpposite query(const Instance& inst, const GridPoint& p) const {
        NearestOpposite best{0, kNoDist};
        const std::int64_t cx = cell(p.x), cy = cell(p.y);
        auto visit = [&](std::int64_t gx, std::int64_t gy) {
            if (gx < 0 || gy < 0 || gx >= cols || gy >= cols) return;
            for (std::size_t id : cells[static_cast<std::size_t>(gx * cols + gy)]) {
                const std::int64_t d = dist2(p, inst.point(id));
                if (d < best.d2 || (d == best.d2 && id < best.id)) best = {id, d};
            }
        };
        for (std::int64_t r = 0; r <= cols; ++r) {
            for (std::int64_t gx = cx - r; gx <= cx + r; ++gx) {
                if (gx == cx - r || gx == cx + r) {
                    for (std::int64_t gy = cy - r; gy <= cy + r; ++gy) visit(gx, gy);
                } else {
                    visit(gx, cy - r);
                    visit(gx, cy + r);
                }
            }
            // Cells of ring r+1 are at least r*side away in some coordinate.
            const std::int64_t reach = r * side;
            if (best.d2 != kNoDist && best.d2 < reach * reach) break;
        }
        return best;
    }
};

}  // namespace

std::vector<NearestOpposite> nearest_opposite_all(const Instance& inst) {
    const std::size_t n = inst.n();
    const std::size_t nr = inst.red.size();
    std::vector<NearestOpposite> out(n);
    if (inst.delta < 64 || n < 64) {
        for (std::size_t v = 0; v < n; ++v) {
            NearestOpposite best{0, kNoDist};
            const bool red = v < nr;
            const std::size_t lo = red ? nr : 0, hi = red ? n : nr;
            for (std::size_t u = lo; u < hi; ++u) {
                const std::int64_t d = dist2(inst.point(v), inst.point(u));
                if (d < best.d2) best = {u, d};
            }
            out[v] = best;
        }
        return out;
    }
    std::vector<std::size_t> reds(nr), blues(n - nr);
    for (std::size_t i = 0; i < nr; ++i) reds[i] = i;
    for (std::size_t i = nr; i < n; ++i) blues[i - nr] = i;
    const BucketGrid red_grid(inst, reds), blue_grid(inst, blues);
    for (std::size_t v = 0; v < n; ++v) {
        out[v] = (v < nr ? blue_grid : red_grid).query(inst, inst.point(v));
    }
    return out;
}

PrismGraph::PrismGraph(Instance inst) : inst_(std::move(inst)) {
    validate(inst_);
    nearest_ = nearest_opposite_all(inst_);
}

Color PrismGraph::side(std::size_t v) const {
    const Color c = inst_.color(base(v));
    return is_upper(v) ? c : opposite(c);
}

PrismVertex PrismGraph::vertex(std::size_t v) const {
    return {base(v), is_upper(v) ? Layer::Upper : Layer::Lower, side(v)};
}

EdgeClass PrismGraph::edge_class(std::size_t u, std::size_t v) const {
    if (u >= vertex_count() || v >= vertex_count() || side(u) == side(v)) return EdgeClass::None;
    if (base(u) == base(v)) return EdgeClass::Link;
    if (is_upper(u) && is_upper(v)) return EdgeClass::Upper;
    if (!is_upper(u) && !is_upper(v)) return EdgeClass::Lower;
    return EdgeClass::None;
}

std::int64_t PrismGraph::cost2(std::size_t u, std::size_t v) const {
    switch (edge_class(u, v)) {
        case EdgeClass::Upper: return dist2(inst_.point(u), inst_.point(v));
        case EdgeClass::Lower: return 0;
        case EdgeClass::Link: return mu2(base(u));
        case EdgeClass::None: break;
    }
    throw std::invalid_argument("PrismGraph::cost2: not an edge");
}

bool PrismMatching::is_perfect() const {
    return std::all_of(mate.begin(), mate.end(), [](long m) { return m >= 0; });
}

std::size_t PrismMatching::size() const {
    return static_cast<std::size_t>(std::count_if(mate.begin(), mate.end(), [](long m) { return m >= 0; })) / 2;
}

std::vector<std::pair<std::size_t, std::size_t>> PrismMatching::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t u = 0; u < mate.size(); ++u) {
        if (mate[u] > static_cast<long>(u)) out.emplace_back(u, static_cast<std::size_t>(mate[u]));
    }
    return out;
}

void check_matching(const PrismGraph& pg, const PrismMatching& pm) {
    require(pm.mate.size() == pg.vertex_count(), "matching has wrong vertex count");
    for (std::size_t u = 0; u < pm.mate.size(); ++u) {
        const long m = pm.mate[u];
        if (m < 0) continue;
        const auto v = static_cast<std::size_t>(m);
        require(v < pm.mate.size() && pm.mate[v] == static_cast<long>(u), "matching is not symmetric");
        require(pg.edge_class(u, v) != EdgeClass::None, "matching uses a non-edge");
    }
}

RadicalSum matching_cost(const PrismGraph& pg, const PrismMatching& pm) {
    RadicalSum total;
    for (auto [u, v] : pm.edges()) total += pg.cost(u, v);
    return total;
}

std::vector<std::int64_t> matching_cost_multiset(const PrismGraph& pg, const PrismMatching& pm) {
    std::vector<std::int64_t> out;
    for (auto [u, v] : pm.edges()) {
        const std::int64_t c = pg.cost2(u, v);
        if (c != 0) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

EdgeCover matching_to_cover(const PrismGraph& pg, const PrismMatching& pm) {
    check_matching(pg, pm);
    if (!pm.is_perfect()) throw std::invalid_argument("matching_to_cover: matching is not perfect");
    const std::size_t n = pg.n();
    const std::size_t nr = pg.instance().red.size();
    EdgeCover cover;
    for (std::size_t v = 0; v < n; ++v) {
        const auto m = static_cast<std::size_t>(pm.mate[v]);
        if (m == v + n) {
            const std::size_t u = pg.nearest(v);
            if (v < nr) cover.edges.emplace_back(v, u - nr);
            else cover.edges.emplace_back(u, v - nr);
        } else if (v < nr) {
            cover.edges.emplace_back(v, m - nr);
        }
    }
    std::sort(cover.edges.begin(), cover.edges.end());
    return cover;
}

bool is_symmetric(const PrismGraph& pg, const PrismMatching& pm) {
    const std::size_t n = pg.n();
    for (std::size_t u = 0; u < n; ++u) {
        const long m = pm.mate[u];
        if (m < 0 || static_cast<std::size_t>(m) >= n) continue;
        if (pm.mate[u + n] != m + static_cast<long>(n)) return false;
    }
    for (std::size_t u = n; u < 2 * n; ++u) {
        const long m = pm.mate[u];
        if (m < 0 || static_cast<std::size_t>(m) < n) continue;
        if (pm.mate[u - n] != m - static_cast<long>(n)) return false;
    }
    return true;
}

PrismMatching symmetrize(const PrismGraph& pg, const PrismMatching& pm) {
    check_matching(pg, pm);
    if (!pm.is_perfect()) throw std::invalid_argument("symmetrize: matching is not perfect");
    const std::size_t n = pg.n();
    PrismMatching out(pg.vertex_count());
    for (std::size_t u = 0; u < n; ++u) {
        const auto m = static_cast<std::size_t>(pm.mate[u]);
        if (m < n) {
            out.mate[u] = static_cast<long>(m);
            out.mate[u + n] = static_cast<long>(m + n);
        } else {
            out.match(u, u + n);
        }
    }
    return out;
}

std::optional<std::string> cover_defect(const Instance& inst, const EdgeCover& cover) {
    std::vector<char> red(inst.red.size(), 0), blue(inst.blue.size(), 0);
    for (auto [r, b] : cover.edges) {
        if (r >= red.size() || b >= blue.size()) {
            std::ostringstream os;
            os << "edge (" << r << "," << b << ") has an index out of range";
            return os.str();
        }
        red[r] = blue[b] = 1;
    }
    for (std::size_t i = 0; i < red.size(); ++i) {
        if (!red[i]) return "red[" + std::to_string(i) + "] is uncovered";
    }
    for (std::size_t i = 0; i < blue.size(); ++i) {
        if (!blue[i]) return "blue[" + std::to_string(i) + "] is uncovered";
    }
    return std::nullopt;
}

CostReport cover_cost(const Instance& inst, const EdgeCover& cover, int digits) {
    if (auto defect = cover_defect(inst, cover)) throw std::invalid_argument("cover_cost: " + *defect);
    CostReport rep;
    for (auto [r, b] : cover.edges) {
        const std::int64_t d = dist2(inst.red[r], inst.blue[b]);
        rep.squared.push_back(d);
        rep.value += RadicalSum::sqrt(d);
    }
    std::sort(rep.squared.begin(), rep.squared.end());
    rep.decimal = rep.value.to_decimal(digits);
    return rep;
}

}  // namespace manymatch
