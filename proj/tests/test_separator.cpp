#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include "manymatch/eligibility.hpp"
#include "manymatch/oracle.hpp"
#include "manymatch/scaling.hpp"
#include "manymatch/separator.hpp"
#include "support.hpp"

using namespace manymatch;
using namespace manymatch::separator;

namespace {

struct Fixture {
    PrismGraph pg;
    scaling::ScalingResult sr;
    eligibility::Context ctx;
    eligibility::Decomposition dec;
    eligibility::CandidateSet cand;

    explicit Fixture(Instance inst)
        : pg(std::move(inst)),
          sr(scaling::run_scaling(pg, {scaling::exact_exponent(pg.n(), pg.instance().delta), nullptr, {}})),
          ctx(pg, sr.y, sr.t),
          dec(eligibility::build_decomposition(ctx)),
          cand(eligibility::candidate_edges(dec, ctx)) {}
};

// Random planar graph: shuffled candidate edges kept while the graph stays planar.
Skeleton random_planar(std::size_t n, std::mt19937_64& rng, std::size_t tries) {
    using G = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
    G g(n);
    Skeleton sk;
    sk.size = n;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t i = 0; i < tries && n > 1; ++i) {
        std::size_t a = rng() % n, b = rng() % n;
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (!seen.insert({a, b}).second) continue;
        auto [e, ok] = add_edge(a, b, g);
        if (boost::boyer_myrvold_planarity_test(g)) {
            sk.edges.emplace_back(a, b);
        } else {
            remove_edge(e, g);
        }
    }
    return sk;
}

// Grid graph, whose BFS levels are long diagonals.
Skeleton grid(std::size_t w, std::size_t h) {
    Skeleton sk;
    sk.size = w * h;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            if (x + 1 < w) sk.edges.emplace_back(y * w + x, y * w + x + 1);
            if (y + 1 < h) sk.edges.emplace_back(y * w + x, (y + 1) * w + x);
        }
    }
    return sk;
}

RadicalSum dense_cost(const CostGraph& g, const std::vector<std::size_t>& active) {
    std::vector<std::size_t> rows, cols;
    for (std::size_t v : active) (g.side[v] == Color::Red ? rows : cols).push_back(v);
    // Pad the smaller side so the dense solver sees a square matrix of
    // maximum-cardinality assignments: absent cells cost a large constant.
    const std::size_t m = std::max(rows.size(), cols.size());
    const RadicalSum big(std::int64_t{1} << 40);
    oracle::DenseCostMatrix<RadicalSum> mat(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) mat.at(i, j) = big;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& [w, c] : g.adj[rows[i]]) {
            const auto it = std::find(cols.begin(), cols.end(), w);
            if (it != cols.end()) mat.at(i, static_cast<std::size_t>(it - cols.begin())) = c;
        }
    }
    return oracle::mcpm_dense(mat)->cost;
}

RadicalSum matching_cost_of(const CostGraph& g, const std::vector<long>& mate, const std::vector<std::size_t>& active,
                            std::size_t& pairs) {
    RadicalSum total;
    pairs = 0;
    for (std::size_t v : active) {
        if (g.side[v] != Color::Red || mate[v] < 0) continue;
        ++pairs;
        for (const auto& [w, c] : g.adj[v]) {
            if (static_cast<long>(w) == mate[v]) total += c;
        }
    }
    return total;
}

}  // namespace

TEST_CASE("separator of tiny skeletons") {
    Skeleton one;
    one.size = 1;
    auto p = planar_separator(one);
    CHECK(p.S.size() == 1);
    CHECK(p.X.empty());

    Skeleton path;
    path.size = 3;
    path.edges = {{0, 1}, {1, 2}};
    p = planar_separator(path);
    CHECK_NOTHROW(check_partition(path, p));
    CHECK(p.X.size() + p.Y.size() + p.S.size() == 3);

    Skeleton empty_edges;
    empty_edges.size = 9;
    CHECK_NOTHROW(check_partition(empty_edges, planar_separator(empty_edges)));
}

TEST_CASE("check_partition rejects an X-Y edge") {
    Skeleton sk;
    sk.size = 3;
    sk.edges = {{0, 1}};
    Partition bad{{0}, {1}, {2}};
    CHECK_THROWS_AS(check_partition(sk, bad), InvariantError);
}

TEST_CASE("separator bounds on random planar graphs") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 40; ++round) {
        const std::size_t n = 3 + rng() % (round < 30 ? 60 : 500);
        const auto sk = random_planar(n, rng, 4 * n);
        const auto p = planar_separator(sk);
        CHECK_NOTHROW(check_partition(sk, p));
    }
}

TEST_CASE("separator bounds on grids and paths") {
    for (auto [w, h] : std::vector<std::pair<std::size_t, std::size_t>>{{30, 30}, {100, 3}, {400, 1}, {7, 50}}) {
        const auto sk = grid(w, h);
        CHECK_NOTHROW(check_partition(sk, planar_separator(sk)));
    }
}

TEST_CASE("lifted partition never splits a candidate edge") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Fixture f(test::random_instance(8 + seed % 20, 16, 300 + seed));
        const auto sk = skeleton_of(f.dec);
        const auto part = planar_separator(sk);
        std::vector<std::size_t> all(f.dec.segments.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        const auto lifted = lift_partition(f.pg, f.dec, f.dec.skeleton, all, part);
        CHECK_NOTHROW(check_lift(f.cand, lifted));
        CHECK(lifted.x_segments.size() + lifted.y_segments.size() + lifted.s_segments.size() == all.size());
    }
}

TEST_CASE("interior group solve matches the dense optimum") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 40; ++round) {
        Instance inst;
        inst.delta = 64;
        const std::size_t k = 1 + rng() % 9;
        std::set<std::int64_t> xs;
        while (xs.size() < k) xs.insert(1 + static_cast<std::int64_t>(rng() % 64));
        // A few off-line points keep the penalties varied.
        for (std::int64_t x : xs) (rng() % 2 ? inst.red : inst.blue).push_back({x, 5});
        inst.red.push_back({1 + static_cast<std::int64_t>(rng() % 64), 1 + static_cast<std::int64_t>(rng() % 3)});
        inst.blue.push_back({1 + static_cast<std::int64_t>(rng() % 64), 9 + static_cast<std::int64_t>(rng() % 3)});
        PrismGraph pg(inst);
        const std::size_t n = pg.n();
        std::vector<std::size_t> W;
        for (std::size_t v = 0; v < n; ++v) {
            if (pg.instance().point(v).y == 5) W.push_back(v);
        }
        std::sort(W.begin(), W.end(), [&](std::size_t a, std::size_t b) {
            return pg.instance().point(a).x < pg.instance().point(b).x;
        });
        const LineKey line = line_key({0, 5}, {1, 5});
        const auto sol = solve_interior_group(pg, line, W);
        // Dense optimum over W and its mirrors, all edges allowed.
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t a : W) {
            for (std::size_t b : W) {
                if (pg.side(a) == Color::Red && pg.side(b) == Color::Blue) {
                    edges.emplace_back(a, b);
                    edges.emplace_back(a + n, b + n);
                }
            }
            edges.emplace_back(a, a + n);
        }
        std::vector<Color> sides(2 * n);
        for (std::size_t v = 0; v < 2 * n; ++v) sides[v] = pg.side(v);
        CostGraph g(sides);
        for (auto [a, b] : edges) g.add_edge(a, b, pg.cost(a, b));
        std::vector<std::size_t> active;
        for (std::size_t v : W) {
            active.push_back(v);
            active.push_back(v + n);
        }
        CHECK(sol.cost == dense_cost(g, active));
        RadicalSum sum;
        for (auto [a, b] : sol.edges) sum += pg.cost(a, b);
        CHECK(sum == sol.cost);
        CHECK(sol.edges.size() == W.size());
    }
}

TEST_CASE("sequential insertion keeps a min-cost maximum matching") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 60; ++round) {
        const std::size_t m = 2 + rng() % 14;
        std::vector<Color> sides(m);
        for (auto& s : sides) s = rng() % 2 ? Color::Red : Color::Blue;
        CostGraph g(sides);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = a + 1; b < m; ++b) {
                if (sides[a] == sides[b] || rng() % 3 == 0) continue;
                // Mixed radicals so ties and irrational gaps both occur.
                RadicalSum c = RadicalSum::sqrt(static_cast<std::int64_t>(1 + rng() % 30)) +
                               RadicalSum(static_cast<std::int64_t>(rng() % 4));
                g.add_edge(a, b, c);
            }
        }
        std::vector<long> mate(m, -1);
        IncrementalMatching inc(g, mate, {});
        std::vector<std::size_t> order(m);
        for (std::size_t i = 0; i < m; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<std::size_t> active;
        for (std::size_t v : order) {
            inc.insert(v);
            active.push_back(v);
            // Maximum cardinality and minimum cost among those, compared
            // through a padded dense assignment.
            std::size_t pairs = 0;
            const RadicalSum have = matching_cost_of(g, mate, active, pairs);
            std::vector<std::size_t> rows;
            for (std::size_t x : active) {
                if (sides[x] == Color::Red) rows.push_back(x);
            }
            const RadicalSum best = dense_cost(g, active);
            const std::size_t nr = rows.size(), nb = active.size() - nr;
            const auto missing = static_cast<std::int64_t>(std::max(nr, nb) - pairs);
            CHECK(have + RadicalSum(missing << 40) == best);
        }
    }
}

TEST_CASE("divide and conquer equals the dense optimum") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::int64_t delta = seed % 2 ? 8 : 32;
        Fixture f(test::random_instance(std::min<std::size_t>(6 + seed % 30, 60), delta, 500 + seed));
        std::ostringstream trace;
        const auto got = mcpm_candidate(f.pg, f.cand, f.dec, &trace);
        const auto edges = f.cand.prism_edges();
        const auto restricted = oracle::prism_mcpm(f.pg, &edges);
        REQUIRE(restricted);
        CHECK(got.cost == restricted->cost);
        if (f.pg.n() <= 40) CHECK(got.cost == oracle::edge_cover_opt(f.pg.instance()).cost);
        CHECK(got.matching.is_perfect());
    }
}

TEST_CASE("divide and conquer recurses on a large skeleton") {
    Fixture f(test::random_instance(120, 64, 77));
    std::ostringstream trace;
    const auto got = mcpm_candidate(f.pg, f.cand, f.dec, &trace);
    const auto edges = f.cand.prism_edges();
    const auto restricted = oracle::prism_mcpm(f.pg, &edges);
    REQUIRE(restricted);
    CHECK(got.cost == restricted->cost);
    if (f.dec.skeleton.size() > kBaseCase) CHECK(got.stats.separator_calls > 0);
}

TEST_CASE("no eligible edges means every point takes its link") {
    Instance inst;
    inst.delta = 16;
    inst.red = {{1, 1}, {2, 2}};
    inst.blue = {{15, 15}, {16, 16}};
    PrismGraph pg(inst);
    const std::size_t n = pg.n();
    eligibility::Context ctx(pg, std::vector<BigInt>(2 * n, BigInt(-1) << 200), scaling::exact_exponent(n, 16));
    const auto dec = eligibility::build_decomposition(ctx);
    CHECK(dec.segments.empty());
    eligibility::CandidateSet cand;
    cand.n = n;
    const auto got = mcpm_candidate(pg, cand, dec);
    for (std::size_t v = 0; v < n; ++v) CHECK(got.matching.mate[v] == static_cast<long>(v + n));
}

TEST_CASE("insert_vertex on a single edge and on an isolated vertex") {
    CostGraph g({Color::Red, Color::Blue, Color::Red});
    g.add_edge(0, 1, RadicalSum(5));
    std::vector<long> mate(3, -1);
    CHECK(insert_vertex(g, mate, {0}, 1) == IncrementalMatching::Outcome::Augmented);
    CHECK(mate[0] == 1);
    CHECK(insert_vertex(g, mate, {0, 1}, 2) == IncrementalMatching::Outcome::Unchanged);
    CHECK(mate[2] == -1);
    CHECK(mate[1] == 0);
}

TEST_CASE("insert_vertex takes a cheaper partner through an even path") {
    // 0 (red) is matched to 1 at cost 9; blue 2 arrives with cost 1 to 0 and
    // no other neighbor. Cardinality cannot grow, cost drops by swapping.
    CostGraph g({Color::Red, Color::Blue, Color::Blue});
    g.add_edge(0, 1, RadicalSum(9));
    g.add_edge(0, 2, RadicalSum(1));
    std::vector<long> mate{1, 0, -1};
    CHECK(insert_vertex(g, mate, {0, 1}, 2) == IncrementalMatching::Outcome::Improved);
    CHECK(mate[0] == 2);
    CHECK(mate[1] == -1);
}

TEST_CASE("interior group of one red point takes its link") {
    Instance inst;
    inst.delta = 8;
    inst.red = {{2, 2}};
    inst.blue = {{5, 6}};
    PrismGraph pg(inst);
    const auto sol = solve_interior_group(pg, line_key({2, 2}, {3, 2}), {0});
    REQUIRE(sol.edges.size() == 1);
    CHECK(sol.edges[0] == std::pair<std::size_t, std::size_t>{0, 2});
    CHECK(sol.cost == RadicalSum(5));
}

TEST_CASE("interior group of an adjacent red and blue pair") {
    Instance inst;
    inst.delta = 8;
    inst.red = {{2, 2}};
    inst.blue = {{3, 2}};
    PrismGraph pg(inst);
    const auto sol = solve_interior_group(pg, line_key({2, 2}, {3, 2}), {0, 1});
    CHECK(sol.cost == RadicalSum(1));
    CHECK(sol.edges.size() == 2);
}
