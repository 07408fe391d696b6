#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "manymatch/eligibility.hpp"
#include "manymatch/oracle.hpp"
#include "manymatch/scaling.hpp"
#include "support.hpp"

using namespace manymatch;
using namespace manymatch::eligibility;

namespace {

struct Fixture {
    PrismGraph pg;
    scaling::ScalingResult sr;
    Context ctx;

    explicit Fixture(Instance inst)
        : pg(std::move(inst)),
          sr(scaling::run_scaling(pg, {scaling::exact_exponent(pg.n(), pg.instance().delta), nullptr, {}})),
          ctx(pg, sr.y, sr.t) {}
};

BigInt pow2(long e) {
    BigInt v = 1;
    v <<= static_cast<mp_bitcnt_t>(e);
    return v;
}

// Is the closed segment [a, b] inside one segment of the decomposition?
bool covered(const Instance& inst, const Decomposition& dec, std::size_t a, std::size_t b) {
    const LineKey l = line_key(inst.point(a), inst.point(b));
    auto ta = l.param(inst.point(a));
    auto tb = l.param(inst.point(b));
    if (ta > tb) std::swap(ta, tb);
    for (const auto& s : dec.segments) {
        if (!(s.line == l)) continue;
        if (l.param(inst.point(s.p)) <= ta && tb <= l.param(inst.point(s.q))) return true;
    }
    return false;
}

// Points on a horizontal line y = 1 with duals c * 2^t.
Instance collinear(const std::vector<std::pair<std::int64_t, Color>>& pts, std::int64_t delta) {
    Instance inst;
    inst.delta = delta;
    for (auto [x, c] : pts) (c == Color::Red ? inst.red : inst.blue).push_back({x, 1});
    return inst;
}

}  // namespace

TEST_CASE("eligibility of optimal upper edges") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Fixture f(test::random_instance(4 + seed % 14, seed % 2 ? 8 : 16, seed));
        const auto opt = oracle::prism_mcpm(f.pg);
        REQUIRE(opt);
        const std::size_t n = f.pg.n();
        for (auto [u, v] : opt->matching.edges()) {
            if (u < n && v < n) CHECK(is_eligible(u, v, f.ctx));
        }
    }
}

TEST_CASE("very negative duals make nothing eligible") {
    const Instance inst = test::random_instance(8, 8, 3);
    const PrismGraph pg(inst);
    const long t = scaling::exact_exponent(pg.n(), inst.delta);
    std::vector<BigInt> y(pg.vertex_count(), -pow2(t + 10));
    const Context ctx(pg, y, t);
    for (std::size_t r = 0; r < inst.red.size(); ++r) {
        for (std::size_t b = inst.red.size(); b < inst.n(); ++b) CHECK_FALSE(is_eligible(r, b, ctx));
    }
    CHECK(point_line_pairs(ctx).empty());
    CHECK(build_decomposition(ctx).segments.empty());
}

TEST_CASE("context rejects a coarse exponent") {
    const PrismGraph pg(test::random_instance(4, 4, 1));
    CHECK_THROWS_AS(Context(pg, std::vector<BigInt>(pg.vertex_count()), 10), InvariantError);
}

TEST_CASE("point line pairs match the all-pairs scan") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::int64_t delta = seed % 3 == 0 ? 4 : (seed % 3 == 1 ? 8 : 16);
        Fixture f(test::random_instance(std::min<std::size_t>(4 + seed % 17, 16), delta, 100 + seed));
        const Instance& inst = f.pg.instance();
        std::set<PointLine> brute;
        for (std::size_t r = 0; r < inst.red.size(); ++r) {
            for (std::size_t b = inst.red.size(); b < inst.n(); ++b) {
                if (!is_eligible(r, b, f.ctx)) continue;
                const LineKey l = line_key(inst.point(r), inst.point(b));
                brute.insert({r, l});
                brute.insert({b, l});
            }
        }
        const auto got = point_line_pairs(f.ctx);
        CHECK(std::set<PointLine>(got.begin(), got.end()) == brute);
        CHECK(got.size() == brute.size());
    }
}

TEST_CASE("single optimal edge gives both endpoints one line") {
    Instance inst;
    inst.delta = 8;
    inst.red = {{2, 3}};
    inst.blue = {{5, 7}};
    Fixture f(inst);
    const auto pairs = point_line_pairs(f.ctx);
    const LineKey l = line_key({2, 3}, {5, 7});
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0] == PointLine{0, l});
    CHECK(pairs[1] == PointLine{1, l});
    const auto dec = build_decomposition(f.ctx);
    REQUIRE(dec.segments.size() == 1);
    CHECK(dec.segments[0].interior.empty());
}

TEST_CASE("points on one horizontal line share a key") {
    Fixture f(collinear({{1, Color::Red}, {2, Color::Blue}, {4, Color::Red}, {7, Color::Blue}, {8, Color::Red}}, 8));
    const LineKey l = line_key({1, 1}, {2, 1});
    for (const auto& pl : point_line_pairs(f.ctx)) CHECK(pl.line == l);
    const auto dec = build_decomposition(f.ctx);
    check_decomposition(f.pg.instance(), dec);
    for (const auto& s : dec.segments) CHECK(s.line == l);
}

TEST_CASE("line union merges touching edges and splits at gaps") {
    const std::int64_t delta = 8;
    const Instance touch = collinear({{1, Color::Red}, {2, Color::Blue}, {3, Color::Red}}, delta);
    const PrismGraph pg(touch);
    const long t = scaling::exact_exponent(pg.n(), delta);
    std::vector<BigInt> y(pg.vertex_count(), 0);
    y[2] = pow2(t);  // the blue point
    const Context ctx(pg, y, t);
    const LineKey l = line_key({1, 1}, {2, 1});
    const auto u = line_union(l, {0, 2, 1}, ctx);
    REQUIRE(u.size() == 1);
    CHECK(u[0] == std::pair<std::size_t, std::size_t>{0, 1});

    const Instance gap = collinear({{1, Color::Red}, {2, Color::Blue}, {5, Color::Red}, {6, Color::Blue}}, delta);
    const PrismGraph pg2(gap);
    std::vector<BigInt> y2(pg2.vertex_count(), 0);
    y2[2] = pow2(t);
    y2[3] = pow2(t);
    const Context ctx2(pg2, y2, t);
    // reds 0:(1,1) 1:(5,1); blues 2:(2,1) 3:(6,1)
    const auto u2 = line_union(l, {0, 2, 1, 3}, ctx2);
    REQUIRE(u2.size() == 2);
    CHECK(u2[0] == std::pair<std::size_t, std::size_t>{0, 2});
    CHECK(u2[1] == std::pair<std::size_t, std::size_t>{1, 3});
}

TEST_CASE("line union equals the union of eligible pairs") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        const std::int64_t delta = 64;
        const bool diagonal = iter % 2;
        Instance inst;
        inst.delta = delta;
        std::set<std::int64_t> xs;
        const std::size_t k = 2 + rng() % 29;
        while (xs.size() < k) xs.insert(1 + static_cast<std::int64_t>(rng() % 60));
        std::vector<std::int64_t> order(xs.begin(), xs.end());
        std::vector<GridPoint> pts;
        for (auto x : order) pts.push_back({x, diagonal ? x : 5});
        for (const auto& p : pts) (rng() & 1 ? inst.red : inst.blue).push_back(p);
        if (inst.red.empty() || inst.blue.empty()) continue;
        const PrismGraph pg(inst);
        const long t = scaling::exact_exponent(pg.n(), delta);
        std::vector<BigInt> y(pg.vertex_count(), 0);
        for (std::size_t v = 0; v < inst.n(); ++v) y[v] = pow2(t) * static_cast<long>(rng() % 4);
        const Context ctx(pg, y, t);
        const LineKey l = line_key(pts[0], pts[1]);
        std::vector<std::size_t> ids(inst.n());
        std::iota(ids.begin(), ids.end(), 0);
        std::sort(ids.begin(), ids.end(), [&](auto a, auto b) { return l.param(inst.point(a)) < l.param(inst.point(b)); });

        // Brute force: gap i joins consecutive points i and i + 1.
        std::vector<char> gap(ids.size(), 0);  // gap i joins ids[i] and ids[i+1]
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
                if (inst.color(ids[i]) == inst.color(ids[j]) || !is_eligible(ids[i], ids[j], ctx)) continue;
                for (std::size_t g = i; g < j; ++g) gap[g] = 1;
            }
        }
        std::vector<std::pair<std::size_t, std::size_t>> expect;
        for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
            if (!gap[i]) continue;
            if (i > 0 && gap[i - 1]) {
                expect.back().second = ids[i + 1];
            } else {
                expect.emplace_back(ids[i], ids[i + 1]);
            }
        }
        CHECK(line_union(l, ids, ctx) == expect);
    }
}

TEST_CASE("decomposition covers every eligible edge and never crosses") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::int64_t delta = seed % 3 == 0 ? 4 : (seed % 3 == 1 ? 8 : 16);
        Fixture f(test::random_instance(std::min<std::size_t>(4 + seed % 17, 16), delta, 500 + seed));
        const Instance& inst = f.pg.instance();
        const auto dec = build_decomposition(f.ctx);
        check_decomposition(inst, dec);
        for (std::size_t r = 0; r < inst.red.size(); ++r) {
            for (std::size_t b = inst.red.size(); b < inst.n(); ++b) {
                if (is_eligible(r, b, f.ctx)) CHECK(covered(inst, dec, r, b));
            }
        }
    }
}

TEST_CASE("all points collinear give disjoint intervals of one line") {
    Instance inst;
    inst.delta = 16;
    for (std::int64_t x = 1; x <= 16; ++x) ((x * 7) % 3 ? inst.red : inst.blue).push_back({x, x});
    Fixture f(inst);
    const auto dec = build_decomposition(f.ctx);
    check_decomposition(f.pg.instance(), dec);
    REQUIRE_FALSE(dec.segments.empty());
    for (const auto& s : dec.segments) CHECK(s.line == dec.segments[0].line);
}

TEST_CASE("candidate edges for a bare segment") {
    Instance inst;
    inst.delta = 8;
    inst.red = {{1, 1}};
    inst.blue = {{4, 5}};
    Fixture f(inst);
    const auto dec = build_decomposition(f.ctx);
    const auto cs = candidate_edges(dec, f.ctx);
    REQUIRE(cs.upper.size() == 1);
    CHECK(cs.upper[0] == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(cs.size() == 4);
}

TEST_CASE("candidate edges of two reds around a blue") {
    Decomposition dec;
    Instance inst;
    inst.delta = 8;
    inst.red = {{1, 1}, {5, 1}};
    inst.blue = {{2, 1}};
    const PrismGraph pg(inst);
    const long t = scaling::exact_exponent(pg.n(), inst.delta);
    const Context ctx(pg, std::vector<BigInt>(pg.vertex_count(), 0), t);
    dec.segments.push_back({0, 1, line_key({1, 1}, {5, 1}), {2}});
    const auto cs = candidate_edges(dec, ctx);
    const std::vector<std::pair<std::size_t, std::size_t>> expect{{0, 2}, {1, 2}};
    CHECK(cs.upper == expect);
}

TEST_CASE("candidate subgraph keeps the prism optimum") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::int64_t delta = seed % 3 == 0 ? 4 : (seed % 3 == 1 ? 8 : 16);
        Fixture f(test::random_instance(std::min<std::size_t>(4 + seed % 17, 16), delta, 900 + seed));
        const auto dec = build_decomposition(f.ctx);
        const auto cs = candidate_edges(dec, f.ctx);
        CHECK(cs.size() <= kCandidateFactor * f.pg.n());
        const auto edges = cs.prism_edges();
        const auto restricted = oracle::prism_mcpm(f.pg, &edges);
        const auto full = oracle::prism_mcpm(f.pg);
        REQUIRE(restricted);
        REQUIRE(full);
        CHECK(restricted->cost == full->cost);
    }
}

TEST_CASE("dump lists one segment per line") {
    Fixture f(test::random_instance(12, 8, 4));
    const auto dec = build_decomposition(f.ctx);
    const auto text = dump(dec);
    CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == dec.segments.size());
}
