#include "manymatch/eligibility.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "manymatch/penalty1d.hpp"
#include "manymatch/radical.hpp"
#include "manymatch/scaling.hpp"
#include "manymatch/wnn.hpp"

namespace manymatch::eligibility {

Context::Context(const PrismGraph& pg, std::vector<BigInt> y, long t) : pg_(&pg), y_(std::move(y)), t_(t) {
    require(y_.size() == pg.vertex_count(), "eligibility: one dual per prism vertex expected");
    require(t >= scaling::exact_exponent(pg.n(), pg.instance().delta),
            "eligibility: theta must be at most 1 / (n delta^33)");
    mpz_pow_ui(delta33_.get_mpz_t(), BigInt(pg.instance().delta).get_mpz_t(), 33);
}

static BigInt pow2(long e) {
    BigInt v = 1;
    v <<= static_cast<mp_bitcnt_t>(e);
    return v;
}

bool is_eligible(std::size_t u, std::size_t v, const Context& ctx) {
    const Instance& inst = ctx.instance();
    require(inst.color(u) != inst.color(v), "is_eligible: endpoints must differ in color");
    // Multiplied through by 2^t delta^33:
    // delta^33 (y(u) + y(v)) + 2^(t+1) > 2^t delta^33 sqrt(s).
    const long t = ctx.exponent();
    const BigInt lhs = ctx.delta33() * (ctx.y(u) + ctx.y(v)) + pow2(t + 1);
    const RootExpr rhs{0, pow2(t) * ctx.delta33(), dist2(inst.point(u), inst.point(v))};
    return cmp_root(RootExpr::integer(lhs), rhs) == std::strong_ordering::greater;
}

std::vector<PointLine> point_line_pairs(const Context& ctx) {
    const Instance& inst = ctx.instance();
    const std::size_t n = inst.n();
    // One structure per color; a query goes to the opposite one.
    WeightedNearest red(ctx.exponent());
    WeightedNearest blue(ctx.exponent());
    for (std::size_t v = 0; v < n; ++v) {
        (inst.color(v) == Color::Red ? red : blue).insert(v, inst.point(v), ctx.y(v));
    }
    auto opposite_of = [&](std::size_t v) -> WeightedNearest& {
        return inst.color(v) == Color::Red ? blue : red;
    };

    std::vector<PointLine> out;
    // Step (i): one line per active point from its cheapest edge.
    std::vector<std::optional<LineKey>> first(n);
    for (std::size_t v = 0; v < n; ++v) {
        const auto hit = opposite_of(v).query_min(inst.point(v));
        if (!hit || !is_eligible(v, hit->id, ctx)) continue;
        first[v] = line_key(inst.point(v), inst.point(hit->id));
        out.push_back({v, *first[v]});
    }

    // Step (ii): per group sharing a first line, hide the group and collect
    // the remaining eligible edges in increasing cost order.
    std::map<LineKey, std::vector<std::size_t>> groups;
    for (std::size_t v = 0; v < n; ++v) {
        if (first[v]) groups[*first[v]].push_back(v);
    }
    auto hide = [&](std::size_t v) { (inst.color(v) == Color::Red ? red : blue).erase(v); };
    auto show = [&](std::size_t v) { (inst.color(v) == Color::Red ? red : blue).insert(v, inst.point(v), ctx.y(v)); };
    for (const auto& [line, members] : groups) {
        for (std::size_t v : members) hide(v);
        for (std::size_t v : members) {
            std::vector<std::size_t> taken;
            while (true) {
                const auto hit = opposite_of(v).query_min(inst.point(v));
                if (!hit || !is_eligible(v, hit->id, ctx)) break;
                const LineKey l = line_key(inst.point(v), inst.point(hit->id));
                out.push_back({v, l});
                out.push_back({hit->id, l});
                taken.push_back(hit->id);
                hide(hit->id);
            }
            for (std::size_t u : taken) show(u);
        }
        for (std::size_t v : members) show(v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> line_union(const LineKey& line,
                                                            const std::vector<std::size_t>& pts,
                                                            const Context& ctx) {
    const Instance& inst = ctx.instance();
    const std::size_t k = pts.size();
    std::vector<std::int64_t> par(k);
    for (std::size_t i = 0; i < k; ++i) {
        require(line.contains(inst.point(pts[i])), "line_union: point off the line");
        par[i] = line.param(inst.point(pts[i]));
        if (i > 0) require(par[i - 1] < par[i], "line_union: points must be sorted and distinct");
    }
    const BigInt scale = pow2(ctx.exponent());
    // Reduced cost 2^t ||u - v|| - y(u) - y(v); every pair shares the radical.
    auto cost = [&](std::size_t i, std::size_t j) {
        const std::int64_t gap = par[i] < par[j] ? par[j] - par[i] : par[i] - par[j];
        return RootExpr{-(ctx.y(pts[i]) + ctx.y(pts[j])), scale * gap, line.step2()};
    };

    // Dense Prim on the complete bipartite graph.
    std::vector<char> in_tree(k, 0);
    std::vector<std::optional<RootExpr>> key(k);
    std::vector<std::size_t> parent(k, 0);
    std::vector<std::pair<std::size_t, std::size_t>> forest;
    for (std::size_t root = 0; root < k; ++root) {
        if (in_tree[root]) continue;
        in_tree[root] = 1;
        std::size_t last = root;
        while (true) {
            for (std::size_t j = 0; j < k; ++j) {
                if (in_tree[j] || inst.color(pts[j]) == inst.color(pts[last])) continue;
                RootExpr c = cost(last, j);
                if (!key[j] || cmp_root(c, *key[j]) == std::strong_ordering::less) {
                    key[j] = std::move(c);
                    parent[j] = last;
                }
            }
            std::optional<std::size_t> next;
            for (std::size_t j = 0; j < k; ++j) {
                if (in_tree[j] || !key[j]) continue;
                if (!next || cmp_root(*key[j], *key[*next]) == std::strong_ordering::less) next = j;
            }
            if (!next) break;
            in_tree[*next] = 1;
            if (is_eligible(pts[*next], pts[parent[*next]], ctx)) forest.emplace_back(parent[*next], *next);
            last = *next;
        }
    }

    // Spans of the pruned trees, then merge the ones that meet.
    std::vector<std::size_t> comp(k);
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](std::size_t x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    for (auto [a, b] : forest) comp[find(a)] = find(b);
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> span;  // root -> (lo, hi) indices
    for (auto [a, b] : forest) {
        const std::size_t r = find(a);
        auto [it, fresh] = span.try_emplace(r, std::min(a, b), std::max(a, b));
        if (!fresh) {
            it->second.first = std::min({it->second.first, a, b});
            it->second.second = std::max({it->second.second, a, b});
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (auto& [r, s] : span) spans.push_back(s);
    std::sort(spans.begin(), spans.end());
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (auto s : spans) {
        if (!out.empty() && s.first <= out.back().second) {
            out.back().second = std::max(out.back().second, s.second);
        } else {
            out.push_back(s);
        }
    }
    for (auto& s : out) s = {pts[s.first], pts[s.second]};
    return out;
}

namespace {

struct PointIndex {
    std::unordered_map<std::int64_t, std::size_t> at;
    std::int64_t stride;

    explicit PointIndex(const Instance& inst) : stride(inst.delta + 1) {
        for (std::size_t v = 0; v < inst.n(); ++v) at.emplace(key(inst.point(v)), v);
    }
    std::int64_t key(const GridPoint& p) const { return p.x * stride + p.y; }
    std::optional<std::size_t> find(const GridPoint& p) const {
        const auto it = at.find(key(p));
        if (it == at.end()) return std::nullopt;
        return it->second;
    }
};

bool boxes_meet(const Segment& a, const Segment& b) {
    return std::max(a.a.x, a.b.x) >= std::min(b.a.x, b.b.x) && std::max(b.a.x, b.b.x) >= std::min(a.a.x, a.b.x) &&
           std::max(a.a.y, a.b.y) >= std::min(b.a.y, b.b.y) && std::max(b.a.y, b.b.y) >= std::min(a.a.y, a.b.y);
}

void check_no_crossing(const Instance& inst, const Decomposition& dec) {
    std::vector<Segment> segs;
    for (const auto& s : dec.segments) segs.push_back({inst.point(s.p), inst.point(s.q)});
    std::vector<std::size_t> order(segs.size());
    std::iota(order.begin(), order.end(), 0);
    auto xmin = [&](std::size_t i) { return std::min(segs[i].a.x, segs[i].b.x); };
    auto xmax = [&](std::size_t i) { return std::max(segs[i].a.x, segs[i].b.x); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xmin(a) < xmin(b); });
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size() && xmin(order[j]) <= xmax(order[i]); ++j) {
            const std::size_t a = order[i];
            const std::size_t b = order[j];
            if (!boxes_meet(segs[a], segs[b])) continue;
            if (dec.segments[a].line == dec.segments[b].line) {
                // Same line: disjoint except for a shared endpoint.
                const auto& sa = dec.segments[a];
                const auto& sb = dec.segments[b];
                const auto& line = sa.line;
                const auto a0 = line.param(inst.point(sa.p)), a1 = line.param(inst.point(sa.q));
                const auto b0 = line.param(inst.point(sb.p)), b1 = line.param(inst.point(sb.q));
                require(a1 <= b0 || b1 <= a0, "decomposition: overlapping segments on one line");
                continue;
            }
            if (segments_properly_cross(segs[a], segs[b])) {
                std::ostringstream os;
                os << "decomposition: segments (" << dec.segments[a].p << "," << dec.segments[a].q << ") and ("
                   << dec.segments[b].p << "," << dec.segments[b].q << ") cross";
                throw InvariantError(os.str());
            }
        }
    }
}

}  // namespace

Decomposition build_decomposition(const Context& ctx) {
    const Instance& inst = ctx.instance();
    const std::size_t n = inst.n();
    const auto pairs = point_line_pairs(ctx);
    std::map<LineKey, std::vector<std::size_t>> on_line;
    std::vector<std::size_t> line_count(n, 0);
    for (const auto& pl : pairs) {
        on_line[pl.line].push_back(pl.point);
        ++line_count[pl.point];
    }
    const PointIndex index(inst);

    Decomposition dec;
    dec.interior_of.assign(n, -1);
    for (auto& [line, pts] : on_line) {
        std::sort(pts.begin(), pts.end(), [&](std::size_t a, std::size_t b) {
            return line.param(inst.point(a)) < line.param(inst.point(b));
        });
        for (auto [a, b] : line_union(line, pts, ctx)) {
            // Walk the lattice from a to b; cut at points active on another line.
            const std::int64_t t0 = line.param(inst.point(a));
            const std::int64_t t1 = line.param(inst.point(b));
            DecompSegment cur{a, a, line, {}};
            for (std::int64_t t = t0 + 1; t <= t1; ++t) {
                const auto hit = index.find(line.at(t));
                if (!hit) continue;
                if (*hit == b || line_count[*hit] >= 2) {
                    cur.q = *hit;
                    dec.segments.push_back(cur);
                    cur = DecompSegment{*hit, *hit, line, {}};
                } else {
                    cur.interior.push_back(*hit);
                }
            }
        }
    }
    for (std::size_t i = 0; i < dec.segments.size(); ++i) {
        const auto& s = dec.segments[i];
        dec.skeleton.push_back(s.p);
        dec.skeleton.push_back(s.q);
        for (std::size_t v : s.interior) {
            require(dec.interior_of[v] < 0, "decomposition: point inside two segments");
            dec.interior_of[v] = static_cast<long>(i);
        }
    }
    std::sort(dec.skeleton.begin(), dec.skeleton.end());
    dec.skeleton.erase(std::unique(dec.skeleton.begin(), dec.skeleton.end()), dec.skeleton.end());
    for (std::size_t v : dec.skeleton) {
        require(dec.interior_of[v] < 0, "decomposition: skeleton vertex inside a segment");
    }
    check_no_crossing(inst, dec);
    if (debug_enabled()) check_decomposition(inst, dec);
    return dec;
}

void check_decomposition(const Instance& inst, const Decomposition& dec) {
    check_no_crossing(inst, dec);
    const std::size_t n = inst.n();
    std::vector<char> is_skel(n, 0);
    for (std::size_t v : dec.skeleton) is_skel[v] = 1;
    for (std::size_t i = 0; i < dec.segments.size(); ++i) {
        const auto& s = dec.segments[i];
        const Segment seg{inst.point(s.p), inst.point(s.q)};
        require(s.line == line_key(seg.a, seg.b), "decomposition: wrong line key");
        const std::int64_t lo = s.line.param(seg.a);
        const std::int64_t hi = s.line.param(seg.b);
        require(lo < hi, "decomposition: endpoints out of order");
        std::vector<std::size_t> inside;
        for (std::size_t v = 0; v < n; ++v) {
            const auto& p = inst.point(v);
            if (!s.line.contains(p)) continue;
            const std::int64_t t = s.line.param(p);
            if (lo < t && t < hi) inside.push_back(v);
        }
        std::sort(inside.begin(), inside.end(), [&](std::size_t a, std::size_t b) {
            return s.line.param(inst.point(a)) < s.line.param(inst.point(b));
        });
        require(inside == s.interior, "decomposition: interior list mismatch");
        for (std::size_t v : inside) {
            require(!is_skel[v], "decomposition: skeleton vertex inside a segment");
            require(dec.interior_of[v] == static_cast<long>(i), "decomposition: interior index mismatch");
        }
    }
}

std::string dump(const Decomposition& dec) {
    std::ostringstream os;
    for (const auto& s : dec.segments) {
        os << s.p << ' ' << s.q << " line=" << s.line.str() << " interior=" << s.interior.size() << '\n';
    }
    return os.str();
}

penalty1d::LinePoint<RadicalSum> line_point(const PrismGraph& pg, const LineKey& line, std::size_t v) {
    const std::int64_t t = line.param(pg.instance().point(v));
    return {RadicalSum::sqrt(line.step2()) * t, pg.instance().color(v), RadicalSum::sqrt(pg.mu2(v))};
}

std::vector<std::pair<std::size_t, std::size_t>> CandidateSet::prism_edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(size());
    for (auto [r, b] : upper) {
        out.emplace_back(r, b);
        out.emplace_back(r + n, b + n);
    }
    for (std::size_t v = 0; v < n; ++v) out.emplace_back(v, v + n);
    return out;
}

CandidateSet candidate_edges(const Decomposition& dec, const Context& ctx) {
    const Instance& inst = ctx.instance();
    const PrismGraph& pg = ctx.prism();
    CandidateSet cs;
    cs.n = inst.n();
    auto add = [&](std::size_t u, std::size_t v) {
        if (inst.color(u) == inst.color(v)) return;
        if (inst.color(u) == Color::Blue) std::swap(u, v);
        cs.upper.emplace_back(u, v);
    };
    using Point = penalty1d::LinePoint<RadicalSum>;
    for (const auto& s : dec.segments) {
        add(s.p, s.q);
        if (s.interior.empty()) continue;
        // Forced points ignore their penalty.
        auto make = [&](std::size_t v) { return line_point(pg, s.line, v); };
        // Four configurations: which of p, q is matched into the segment.
        for (int mask = 0; mask < 4; ++mask) {
            std::vector<std::size_t> ids;
            std::vector<Point> pts;
            std::vector<std::size_t> forced;
            if (mask & 1) {
                forced.push_back(ids.size());
                ids.push_back(s.p);
                pts.push_back(make(s.p));
            }
            for (std::size_t v : s.interior) {
                ids.push_back(v);
                pts.push_back(make(v));
            }
            if (mask & 2) {
                forced.push_back(ids.size());
                ids.push_back(s.q);
                pts.push_back(make(s.q));
            }
            const auto sol = penalty1d::solve_with_forced(pts, forced);
            if (!sol) continue;
            for (auto [r, b] : sol->pairs) add(ids[r], ids[b]);
        }
    }
    std::sort(cs.upper.begin(), cs.upper.end());
    cs.upper.erase(std::unique(cs.upper.begin(), cs.upper.end()), cs.upper.end());
    return cs;
}

}  // namespace manymatch::eligibility
