#include "manymatch/separator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <boost/graph/make_biconnected_planar.hpp>
#include <boost/graph/make_connected.hpp>
#include <boost/graph/make_maximal_planar.hpp>
#include <boost/graph/planar_face_traversal.hpp>

#include "manymatch/oracle.hpp"
#include "manymatch/penalty1d.hpp"

namespace manymatch::separator {

Skeleton skeleton_of(const eligibility::Decomposition& dec) {
    Skeleton sk;
    sk.size = dec.skeleton.size();
    auto local = [&](std::size_t v) {
        return static_cast<std::size_t>(std::lower_bound(dec.skeleton.begin(), dec.skeleton.end(), v) -
                                        dec.skeleton.begin());
    };
    for (const auto& s : dec.segments) sk.edges.emplace_back(local(s.p), local(s.q));
    return sk;
}

namespace {

using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                     boost::property<boost::vertex_index_t, int>,
                                     boost::property<boost::edge_index_t, int>>;
using BEdge = boost::graph_traits<BGraph>::edge_descriptor;
using Embedding = std::vector<std::vector<BEdge>>;

bool embed(BGraph& g, Embedding& emb) {
    auto index = get(boost::edge_index, g);
    int count = 0;
    for (auto [it, end] = edges(g); it != end; ++it) put(index, *it, count++);
    emb.assign(num_vertices(g), {});
    return boost::boyer_myrvold_planarity_test(boost::boyer_myrvold_params::graph = g,
                                               boost::boyer_myrvold_params::embedding = &emb[0]);
}

struct FaceCollector : boost::planar_face_traversal_visitor {
    const BGraph* g = nullptr;
    std::vector<std::vector<std::size_t>> vertices;
    std::vector<std::vector<int>> edges;

    void begin_face() {
        vertices.emplace_back();
        edges.emplace_back();
    }
    template <class V>
    void next_vertex(V v) {
        vertices.back().push_back(static_cast<std::size_t>(v));
    }
    template <class E>
    void next_edge(E e) {
        edges.back().push_back(get(boost::edge_index, *g, e));
    }
};

// Maximal planar supergraph on the same vertices (n >= 3) with its faces.
struct Triangulation {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj;  // (neighbor, edge id)
    std::vector<std::vector<std::size_t>> face_vertices;
    std::vector<std::vector<int>> face_edges;
};

Triangulation triangulate(const Skeleton& sk) {
    BGraph g(sk.size);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [a, b] : sk.edges) {
        require(a != b && a < sk.size && b < sk.size, "separator: bad skeleton edge");
        if (seen.insert({std::min(a, b), std::max(a, b)}).second) add_edge(a, b, g);
    }
    Embedding emb;
    require(embed(g, emb), "separator: skeleton is not planar");
    boost::make_connected(g);
    require(embed(g, emb), "separator: lost planarity while connecting");
    boost::make_biconnected_planar(g, &emb[0]);
    require(embed(g, emb), "separator: lost planarity while biconnecting");
    boost::make_maximal_planar(g, &emb[0]);
    require(embed(g, emb), "separator: lost planarity while triangulating");

    Triangulation tri;
    tri.edges.resize(num_edges(g));
    tri.adj.resize(sk.size);
    for (auto [it, end] = edges(g); it != end; ++it) {
        const auto id = static_cast<std::size_t>(get(boost::edge_index, g, *it));
        const auto a = static_cast<std::size_t>(source(*it, g));
        const auto b = static_cast<std::size_t>(target(*it, g));
        tri.edges[id] = {a, b};
        tri.adj[a].emplace_back(b, id);
        tri.adj[b].emplace_back(a, id);
    }
    FaceCollector faces;
    faces.g = &g;
    boost::planar_face_traversal(g, &emb[0], faces);
    tri.face_vertices = std::move(faces.vertices);
    tri.face_edges = std::move(faces.edges);
    require(tri.face_vertices.size() + sk.size == tri.edges.size() + 2, "separator: Euler formula fails");
    for (const auto& f : tri.face_edges) require(f.size() == 3, "separator: face is not a triangle");
    return tri;
}

bool fits_two_thirds(std::size_t part, std::size_t n) { return 3 * part <= 2 * n; }
bool fits_root_bound(std::size_t s, std::size_t n) { return s * s <= 8 * n; }

// Components of sk - S packed largest first into the smaller side.
Partition pack(const Skeleton& sk, const std::vector<char>& in_s) {
    const std::size_t n = sk.size;
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto [a, b] : sk.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<long> comp(n, -1);
    std::vector<std::vector<std::size_t>> pieces;
    for (std::size_t s = 0; s < n; ++s) {
        if (in_s[s] || comp[s] >= 0) continue;
        pieces.emplace_back();
        std::vector<std::size_t> stack{s};
        comp[s] = static_cast<long>(pieces.size() - 1);
        while (!stack.empty()) {
            const std::size_t x = stack.back();
            stack.pop_back();
            pieces.back().push_back(x);
            for (std::size_t y : adj[x]) {
                if (in_s[y] || comp[y] >= 0) continue;
                comp[y] = comp[s];
                stack.push_back(y);
            }
        }
    }
    std::stable_sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    Partition part;
    for (auto& piece : pieces) {
        auto& side = part.X.size() <= part.Y.size() ? part.X : part.Y;
        side.insert(side.end(), piece.begin(), piece.end());
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (in_s[v]) part.S.push_back(v);
    }
    std::sort(part.X.begin(), part.X.end());
    std::sort(part.Y.begin(), part.Y.end());
    return part;
}

// Vertices on a fundamental cycle, tree path from a up to the common
// ancestor and back down to b.
std::vector<std::size_t> cycle_of(std::size_t a, std::size_t b, const std::vector<std::size_t>& level,
                                  const std::vector<std::size_t>& parent) {
    std::vector<std::size_t> out;
    while (level[a] > level[b]) {
        out.push_back(a);
        a = parent[a];
    }
    while (level[b] > level[a]) {
        out.push_back(b);
        b = parent[b];
    }
    while (a != b) {
        out.push_back(a);
        out.push_back(b);
        a = parent[a];
        b = parent[b];
    }
    out.push_back(a);
    return out;
}

}  // namespace

void check_partition(const Skeleton& sk, const Partition& part) {
    const std::size_t n = sk.size;
    std::vector<int> where(n, -1);
    auto mark = [&](const std::vector<std::size_t>& vs, int tag) {
        for (std::size_t v : vs) {
            require(v < n && where[v] < 0, "separator: parts overlap or hold a bad id");
            where[v] = tag;
        }
    };
    mark(part.X, 0);
    mark(part.Y, 1);
    mark(part.S, 2);
    for (int w : where) require(w >= 0, "separator: parts do not cover the skeleton");
    for (auto [a, b] : sk.edges) {
        require(!((where[a] == 0 && where[b] == 1) || (where[a] == 1 && where[b] == 0)),
                "separator: an edge joins X and Y");
    }
    require(fits_two_thirds(part.X.size(), n), "separator: |X| exceeds 2n/3");
    require(fits_two_thirds(part.Y.size(), n), "separator: |Y| exceeds 2n/3");
    require(fits_root_bound(part.S.size(), n), "separator: |S| exceeds 2 sqrt(2) sqrt(n)");
}

Partition planar_separator(const Skeleton& sk) {
    const std::size_t n = sk.size;
    std::vector<char> in_s(n, 0);
    if (n <= 2) {
        if (n > 0) in_s[0] = 1;
        auto part = pack(sk, in_s);
        check_partition(sk, part);
        return part;
    }
    const Triangulation tri = triangulate(sk);

    // BFS levels from vertex 0.
    std::vector<std::size_t> level(n, 0), parent(n, 0);
    std::vector<long> parent_edge(n, -1);
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> order{0};
    seen[0] = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t x = order[i];
        for (auto [y, e] : tri.adj[x]) {
            if (seen[y]) continue;
            seen[y] = 1;
            level[y] = level[x] + 1;
            parent[y] = x;
            parent_edge[y] = static_cast<long>(e);
            order.push_back(y);
        }
    }
    require(order.size() == n, "separator: triangulation is disconnected");
    const std::size_t r = level[order.back()];
    // Level sizes with empty sentinels at -1 and r+1, shifted by one.
    std::vector<std::size_t> size(r + 3, 0);
    for (std::size_t v = 0; v < n; ++v) ++size[level[v] + 1];
    auto L = [&](long l) { return size[static_cast<std::size_t>(l + 1)]; };

    long l1 = 0;
    std::size_t k = 0;
    for (long l = 0; l <= static_cast<long>(r); ++l) {
        k += L(l);
        if (2 * k >= n) {
            l1 = l;
            break;
        }
    }
    auto take_levels = [&](std::initializer_list<long> ls) {
        for (std::size_t v = 0; v < n; ++v) {
            for (long l : ls) {
                if (static_cast<long>(level[v]) == l) in_s[v] = 1;
            }
        }
    };
    if (fits_root_bound(L(l1), n)) {
        take_levels({l1});
        auto part = pack(sk, in_s);
        check_partition(sk, part);
        return part;
    }

    // Highest l0 <= l1 with |L(l0)| + 2(l1 - l0) <= 2 sqrt(k), lowest
    // l2 >= l1 + 1 with |L(l2)| + 2(l2 - l1 - 1) <= 2 sqrt(n - k).
    auto within = [](std::size_t v, std::size_t m) { return v * v <= 4 * m; };
    long l0 = -2;
    for (long l = l1; l >= -1; --l) {
        if (within(L(l) + 2 * static_cast<std::size_t>(l1 - l), k)) {
            l0 = l;
            break;
        }
    }
    long l2 = -2;
    for (long l = l1 + 1; l <= static_cast<long>(r) + 1; ++l) {
        if (within(L(l) + 2 * static_cast<std::size_t>(l - l1 - 1), n - k)) {
            l2 = l;
            break;
        }
    }
    require(l0 >= -1 && l2 >= 0, "separator: no admissible cut levels");
    take_levels({l0, l2});
    std::vector<char> band(n, 0);
    std::size_t band_size = 0;
    for (std::size_t v = 0; v < n; ++v) {
        const long l = static_cast<long>(level[v]);
        if (l > l0 && l < l2) {
            band[v] = 1;
            ++band_size;
        }
    }
    if (!fits_two_thirds(band_size, n)) {
        // Fundamental cycle of the BFS tree splitting the band weight 2/3 :
        // 1/3 at worst. The faces on one side of a non-tree edge's cycle form
        // a subtree of the dual spanning tree.
        const std::size_t nf = tri.face_edges.size();
        std::vector<std::vector<long>> edge_faces(tri.edges.size());
        for (std::size_t f = 0; f < nf; ++f) {
            for (int e : tri.face_edges[f]) edge_faces[static_cast<std::size_t>(e)].push_back(static_cast<long>(f));
        }
        std::vector<char> tree_edge(tri.edges.size(), 0);
        for (std::size_t v = 0; v < n; ++v) {
            if (parent_edge[v] >= 0) tree_edge[static_cast<std::size_t>(parent_edge[v])] = 1;
        }
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> dual(nf);
        for (std::size_t e = 0; e < tri.edges.size(); ++e) {
            if (tree_edge[e]) continue;
            require(edge_faces[e].size() == 2, "separator: edge without two faces");
            const auto f = static_cast<std::size_t>(edge_faces[e][0]);
            const auto g = static_cast<std::size_t>(edge_faces[e][1]);
            dual[f].emplace_back(g, e);
            dual[g].emplace_back(f, e);
        }
        std::vector<std::size_t> tin(nf, 0), tout(nf, 0);
        std::vector<long> dual_parent_edge(nf, -2);
        std::size_t clock = 0;
        {
            std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
            dual_parent_edge[0] = -1;
            tin[0] = clock++;
            while (!stack.empty()) {
                auto& [f, i] = stack.back();
                if (i == dual[f].size()) {
                    tout[f] = clock;
                    stack.pop_back();
                    continue;
                }
                const auto [g, e] = dual[f][i++];
                if (dual_parent_edge[g] != -2) continue;
                dual_parent_edge[g] = static_cast<long>(e);
                tin[g] = clock++;
                stack.emplace_back(g, 0);
            }
        }
        require(clock == nf, "separator: dual tree does not span the faces");
        std::vector<long> face_of(n, -1);
        for (std::size_t f = 0; f < nf; ++f) {
            for (std::size_t v : tri.face_vertices[f]) {
                if (face_of[v] < 0) face_of[v] = static_cast<long>(f);
            }
        }
        std::vector<std::size_t> prefix(nf + 1, 0);
        for (std::size_t v = 0; v < n; ++v) {
            if (band[v]) ++prefix[tin[static_cast<std::size_t>(face_of[v])] + 1];
        }
        for (std::size_t i = 0; i < nf; ++i) prefix[i + 1] += prefix[i];

        std::optional<std::size_t> best_edge;
        std::size_t best_worst = 0;
        for (std::size_t e = 0; e < tri.edges.size(); ++e) {
            if (tree_edge[e]) continue;
            const auto f = static_cast<std::size_t>(edge_faces[e][0]);
            const auto g = static_cast<std::size_t>(edge_faces[e][1]);
            const std::size_t child = dual_parent_edge[f] == static_cast<long>(e) ? f : g;
            const auto cyc = cycle_of(tri.edges[e].first, tri.edges[e].second, level, parent);
            std::size_t inside = prefix[tout[child]] - prefix[tin[child]];
            std::size_t on = 0;
            for (std::size_t v : cyc) {
                if (!band[v]) continue;
                ++on;
                const std::size_t t = tin[static_cast<std::size_t>(face_of[v])];
                if (tin[child] <= t && t < tout[child]) --inside;
            }
            const std::size_t outside = band_size - inside - on;
            const std::size_t worst = std::max(inside, outside);
            if (!best_edge || worst < best_worst) {
                best_edge = e;
                best_worst = worst;
            }
        }
        require(best_edge.has_value() && fits_two_thirds(best_worst, band_size),
                "separator: no balanced fundamental cycle");
        for (std::size_t v : cycle_of(tri.edges[*best_edge].first, tri.edges[*best_edge].second, level, parent)) {
            if (band[v]) in_s[v] = 1;
        }
    }
    auto part = pack(sk, in_s);
    check_partition(sk, part);
    return part;
}

SeparatorPartition lift_partition(const PrismGraph& pg, const eligibility::Decomposition& dec,
                                  const std::vector<std::size_t>& K, const std::vector<std::size_t>& segments,
                                  const Partition& part) {
    const std::size_t n = pg.n();
    SeparatorPartition out;
    out.part.assign(2 * n, Part::Outside);
    out.skeleton.assign(2 * n, 0);
    auto put = [&](std::size_t point, Part p) {
        out.part[point] = p;
        out.part[point + n] = p;
    };
    auto assign = [&](const std::vector<std::size_t>& locals, Part p) {
        for (std::size_t i : locals) {
            require(i < K.size(), "lift_partition: local id out of range");
            put(K[i], p);
            out.skeleton[K[i]] = out.skeleton[K[i] + n] = 1;
        }
    };
    assign(part.X, Part::X);
    assign(part.Y, Part::Y);
    assign(part.S, Part::S);
    for (std::size_t si : segments) {
        const auto& s = dec.segments[si];
        const Part a = out.skeleton[s.p] ? out.part[s.p] : Part::Outside;
        const Part b = out.skeleton[s.q] ? out.part[s.q] : Part::Outside;
        require(!((a == Part::X && b == Part::Y) || (a == Part::Y && b == Part::X)),
                "lift_partition: segment joins X and Y");
        Part p = Part::S;
        if (a == Part::X || b == Part::X) p = Part::X;
        else if (a == Part::Y || b == Part::Y) p = Part::Y;
        for (std::size_t v : s.interior) put(v, p);
        (p == Part::X ? out.x_segments : p == Part::Y ? out.y_segments : out.s_segments).push_back(si);
    }
    return out;
}

void check_lift(const eligibility::CandidateSet& cand, const SeparatorPartition& lifted) {
    for (auto [u, w] : cand.prism_edges()) {
        const Part a = lifted.part[u];
        const Part b = lifted.part[w];
        if ((a == Part::X && b == Part::Y) || (a == Part::Y && b == Part::X)) {
            std::ostringstream os;
            os << "prism separator: candidate edge (" << u << "," << w << ") joins X~ and Y~";
            throw InvariantError(os.str());
        }
    }
}

InteriorSolution solve_interior_group(const PrismGraph& pg, const LineKey& line, const std::vector<std::size_t>& W) {
    const std::size_t n = pg.n();
    std::vector<penalty1d::LinePoint<RadicalSum>> pts;
    pts.reserve(W.size());
    for (std::size_t v : W) pts.push_back(eligibility::line_point(pg, line, v));
    const auto sol = penalty1d::solve(pts);
    InteriorSolution out;
    out.cost = sol.cost;
    for (auto [r, b] : sol.pairs) {
        out.edges.emplace_back(W[r], W[b]);
        out.edges.emplace_back(W[r] + n, W[b] + n);
    }
    for (std::size_t i : sol.unmatched) out.edges.emplace_back(W[i], W[i] + n);
    return out;
}

void CostGraph::add_edge(std::size_t u, std::size_t v, const RadicalSum& cost) {
    require(u < size() && v < size() && side[u] != side[v], "CostGraph: edge must join the two sides");
    adj[u].emplace_back(v, cost);
    adj[v].emplace_back(u, cost);
}

CostGraph candidate_graph(const PrismGraph& pg, const eligibility::CandidateSet& cand) {
    std::vector<Color> sides(pg.vertex_count());
    for (std::size_t v = 0; v < sides.size(); ++v) sides[v] = pg.side(v);
    CostGraph g(std::move(sides));
    for (auto [u, v] : cand.prism_edges()) g.add_edge(u, v, pg.cost(u, v));
    return g;
}

namespace {

const RadicalSum& edge_cost(const CostGraph& g, std::size_t u, std::size_t w) {
    for (const auto& [x, c] : g.adj[u]) {
        if (x == w) return c;
    }
    throw InvariantError("IncrementalMatching: matched pair is not an edge");
}

}  // namespace

IncrementalMatching::IncrementalMatching(const CostGraph& g, std::vector<long>& mate,
                                         const std::vector<std::size_t>& active)
    : g_(&g), mate_(&mate), active_(g.size(), 0), pi_(g.size()) {
    require(mate.size() == g.size(), "IncrementalMatching: mate size mismatch");
    for (std::size_t v : active) active_[v] = 1;
    for (std::size_t v : active) {
        const long m = mate[v];
        require(m < 0 || active_[static_cast<std::size_t>(m)], "IncrementalMatching: mate outside the active set");
    }
    // Bellman-Ford from a virtual source joined to every active vertex by a
    // zero arc. Residual arcs: red -> blue off the matching at +c, blue ->
    // red along it at -c.
    std::deque<std::size_t> queue(active.begin(), active.end());
    std::vector<char> queued(g.size(), 0);
    for (std::size_t v : active) queued[v] = 1;
    std::size_t budget = (active.size() + 1) * (active.size() + 1) * 4 + 16;
    while (!queue.empty()) {
        require(budget-- > 0, "IncrementalMatching: negative residual cycle");
        const std::size_t u = queue.front();
        queue.pop_front();
        queued[u] = 0;
        auto relax = [&](std::size_t w, const RadicalSum& d) {
            if (d < pi_[w]) {
                pi_[w] = d;
                if (!queued[w]) {
                    queued[w] = 1;
                    queue.push_back(w);
                }
            }
        };
        if (g.side[u] == Color::Red) {
            for (const auto& [w, c] : g.adj[u]) {
                if (active_[w] && mate[u] != static_cast<long>(w)) relax(w, pi_[u] + c);
            }
        } else if (mate[u] >= 0) {
            const auto r = static_cast<std::size_t>(mate[u]);
            relax(r, pi_[u] - edge_cost(g, u, r));
        }
    }
}

RadicalSum IncrementalMatching::slack(std::size_t u, std::size_t w, const RadicalSum& c) const {
    const bool u_red = g_->side[u] == Color::Red;
    const std::size_t r = u_red ? u : w;
    const std::size_t b = u_red ? w : u;
    return c + pi_[r] - pi_[b];
}

IncrementalMatching::Outcome IncrementalMatching::insert(std::size_t v) {
    const CostGraph& g = *g_;
    std::vector<long>& mate = *mate_;
    require(!active_[v] && mate[v] < 0, "IncrementalMatching: vertex already present");
    active_[v] = 1;
    const Color sigma = g.side[v];
    // A potential for v that keeps its arcs non-negative.
    std::optional<RadicalSum> p;
    for (const auto& [w, c] : g.adj[v]) {
        if (!active_[w]) continue;
        if (sigma == Color::Red) {
            RadicalSum cand = pi_[w] - c;
            if (!p || *p < cand) p = std::move(cand);
        } else {
            RadicalSum cand = pi_[w] + c;
            if (!p || cand < *p) p = std::move(cand);
        }
    }
    pi_[v] = p ? *p : RadicalSum{};

    // Dijkstra on reduced costs: off-matching arcs leave the side of v,
    // matching arcs return to it.
    std::vector<std::optional<RadicalSum>> dist(g.size());
    std::vector<long> pred(g.size(), -1);
    std::vector<char> done(g.size(), 0);
    using Item = std::pair<RadicalSum, std::size_t>;
    auto later = [](const Item& a, const Item& b) {
        const auto c = a.first <=> b.first;
        if (c != 0) return c > 0;
        return a.second > b.second;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(later)> heap(later);
    dist[v] = RadicalSum{};
    heap.emplace(RadicalSum{}, v);
    std::vector<std::size_t> reached;
    auto relax = [&](std::size_t from, std::size_t to, RadicalSum d) {
        if (done[to]) return;
        if (!dist[to] || d < *dist[to]) {
            dist[to] = d;
            pred[to] = static_cast<long>(from);
            heap.emplace(std::move(d), to);
        }
    };
    while (!heap.empty()) {
        auto [d, x] = heap.top();
        heap.pop();
        if (done[x] || !(d == *dist[x])) continue;
        done[x] = 1;
        reached.push_back(x);
        if (g.side[x] == sigma) {
            for (const auto& [w, c] : g.adj[x]) {
                if (!active_[w] || mate[x] == static_cast<long>(w)) continue;
                relax(x, w, d + slack(x, w, c));
            }
        } else if (mate[x] >= 0) {
            const auto y = static_cast<std::size_t>(mate[x]);
            relax(x, y, d - slack(x, y, edge_cost(g, x, y)));
        }
    }
    // Real cost of the alternating path from v to t.
    auto real = [&](std::size_t t) {
        return sigma == Color::Red ? *dist[t] - pi_[v] + pi_[t] : *dist[t] + pi_[v] - pi_[t];
    };
    std::optional<std::size_t> target;
    std::optional<RadicalSum> best;
    Outcome outcome = Outcome::Unchanged;
    for (std::size_t t : reached) {
        if (g.side[t] == sigma || mate[t] >= 0) continue;
        RadicalSum c = real(t);
        if (!best || c < *best || (c == *best && t < *target)) {
            best = std::move(c);
            target = t;
        }
    }
    if (target) {
        outcome = Outcome::Augmented;
    } else {
        for (std::size_t t : reached) {
            if (g.side[t] != sigma || t == v) continue;
            RadicalSum c = real(t);
            if (!best || c < *best || (c == *best && t < *target)) {
                best = std::move(c);
                target = t;
            }
        }
        if (target && best->sign() < 0) outcome = Outcome::Improved;
    }
    if (outcome == Outcome::Unchanged) return outcome;

    std::vector<std::size_t> path;
    for (long x = static_cast<long>(*target); x >= 0; x = pred[static_cast<std::size_t>(x)]) {
        path.push_back(static_cast<std::size_t>(x));
        if (static_cast<std::size_t>(x) == v) break;
    }
    std::reverse(path.begin(), path.end());
    require(path.front() == v, "IncrementalMatching: broken predecessor chain");
    if (outcome == Outcome::Improved) mate[*target] = -1;
    for (std::size_t i = 0; i + 1 < path.size(); i += 2) {
        mate[path[i]] = static_cast<long>(path[i + 1]);
        mate[path[i + 1]] = static_cast<long>(path[i]);
    }
    // Shift potentials by the capped distances; arcs of the path become tight.
    const RadicalSum cap = *dist[*target];
    for (std::size_t x = 0; x < g.size(); ++x) {
        if (!active_[x]) continue;
        const RadicalSum& shift = done[x] && *dist[x] < cap ? *dist[x] : cap;
        if (sigma == Color::Red) pi_[x] += shift;
        else pi_[x] -= shift;
    }
    if (debug_enabled()) {
        for (std::size_t x = 0; x < g.size(); ++x) {
            if (!active_[x] || g.side[x] != Color::Red) continue;
            for (const auto& [w, c] : g.adj[x]) {
                if (!active_[w]) continue;
                const int s = slack(x, w, c).sign();
                require(mate[x] == static_cast<long>(w) ? s <= 0 : s >= 0,
                        "IncrementalMatching: potentials lost feasibility");
            }
        }
    }
    return outcome;
}

IncrementalMatching::Outcome insert_vertex(const CostGraph& g, std::vector<long>& mate,
                                           const std::vector<std::size_t>& active_without_v, std::size_t v) {
    IncrementalMatching m(g, mate, active_without_v);
    return m.insert(v);
}

namespace {

class Solver {
public:
    Solver(const PrismGraph& pg, const eligibility::CandidateSet& cand, const eligibility::Decomposition& dec,
           std::ostream* trace, const SplitObserver* on_split)
        : pg_(pg), dec_(dec), g_(candidate_graph(pg, cand)), mate_(pg.vertex_count(), -1), trace_(trace),
          on_split_(on_split) {}

    CandidateOptimum run() {
        const std::size_t n = pg_.n();
        std::vector<char> placed(n, 0);
        for (std::size_t v : dec_.skeleton) placed[v] = 1;
        for (std::size_t v = 0; v < n; ++v) {
            if (dec_.interior_of[v] >= 0) placed[v] = 1;
        }
        // Points off the decomposition only have their link.
        for (std::size_t v = 0; v < n; ++v) {
            if (!placed[v]) {
                mate_[v] = static_cast<long>(v + n);
                mate_[v + n] = static_cast<long>(v);
            }
        }
        std::vector<std::size_t> all(dec_.segments.size());
        std::iota(all.begin(), all.end(), 0);
        solve(dec_.skeleton, all, 0);

        CandidateOptimum out;
        out.matching.mate = mate_;
        require(out.matching.is_perfect(), "mcpm_candidate: result is not perfect");
        check_matching(pg_, out.matching);
        out.cost = matching_cost(pg_, out.matching);
        out.stats = stats_;
        return out;
    }

private:
    void apply(const InteriorSolution& sol) {
        for (auto [a, b] : sol.edges) {
            mate_[a] = static_cast<long>(b);
            mate_[b] = static_cast<long>(a);
        }
    }

    void interior_group(std::size_t si, std::vector<std::size_t>& active) {
        const auto& s = dec_.segments[si];
        if (s.interior.empty()) return;
        ++stats_.interior_groups;
        apply(solve_interior_group(pg_, s.line, s.interior));
        for (std::size_t v : s.interior) {
            active.push_back(v);
            active.push_back(v + pg_.n());
        }
    }

    void reintroduce(const std::vector<std::size_t>& points, const std::vector<std::size_t>& active) {
        IncrementalMatching m(g_, mate_, active);
        std::vector<std::size_t> sorted = points;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t v : sorted) {
            m.insert(v);
            m.insert(v + pg_.n());
            stats_.insertions += 2;
        }
    }

    // Subproblem: skeleton points K and the segments whose interiors it owns.
    void solve(const std::vector<std::size_t>& K, const std::vector<std::size_t>& segs, std::size_t depth) {
        stats_.max_depth = std::max(stats_.max_depth, depth);
        const std::size_t n = pg_.n();
        if (K.size() <= kBaseCase) {
            std::vector<std::size_t> active;
            for (std::size_t si : segs) interior_group(si, active);
            reintroduce(K, active);
            if (trace_) {
                *trace_ << "dnc depth=" << depth << " base skeleton=" << K.size() << " segments=" << segs.size()
                        << '\n';
            }
            if (debug_enabled()) dense_check(K, segs);
            return;
        }
        std::unordered_map<std::size_t, std::size_t> local;
        for (std::size_t i = 0; i < K.size(); ++i) local.emplace(K[i], i);
        Skeleton sk;
        sk.size = K.size();
        for (std::size_t si : segs) {
            const auto& s = dec_.segments[si];
            const auto a = local.find(s.p);
            const auto b = local.find(s.q);
            if (a != local.end() && b != local.end()) sk.edges.emplace_back(a->second, b->second);
        }
        const Partition part = planar_separator(sk);
        ++stats_.separator_calls;
        const SeparatorPartition lifted = lift_partition(pg_, dec_, K, segs, part);
        if (on_split_ && *on_split_) (*on_split_)(sk, part, lifted);
        // No candidate edge may join the two lifted parts.
        for (std::size_t x = 0; x < 2 * n; ++x) {
            if (lifted.part[x] != Part::X) continue;
            for (const auto& [w, c] : g_.adj[x]) {
                require(lifted.part[w] != Part::Y, "mcpm_candidate: candidate edge joins X~ and Y~");
            }
        }
        auto points = [&](const std::vector<std::size_t>& locals) {
            std::vector<std::size_t> out;
            for (std::size_t i : locals) out.push_back(K[i]);
            std::sort(out.begin(), out.end());
            return out;
        };
        const auto X = points(part.X);
        const auto Y = points(part.Y);
        const auto S = points(part.S);
        if (trace_) {
            *trace_ << "dnc depth=" << depth << " skeleton=" << K.size() << " X=" << X.size() << " Y=" << Y.size()
                    << " S=" << S.size() << " s_groups=" << lifted.s_segments.size() << '\n';
        }
        solve(X, lifted.x_segments, depth + 1);
        solve(Y, lifted.y_segments, depth + 1);
        std::vector<std::size_t> active;
        for (std::size_t si : lifted.s_segments) interior_group(si, active);
        for (std::size_t x = 0; x < 2 * n; ++x) {
            if (lifted.part[x] == Part::X || lifted.part[x] == Part::Y) active.push_back(x);
        }
        reintroduce(S, active);
        if (debug_enabled()) dense_check(K, segs);
    }

    // Dense recomputation on a small subproblem.
    void dense_check(const std::vector<std::size_t>& K, const std::vector<std::size_t>& segs) {
        const std::size_t n = pg_.n();
        std::vector<std::size_t> verts;
        for (std::size_t v : K) {
            verts.push_back(v);
            verts.push_back(v + n);
        }
        for (std::size_t si : segs) {
            for (std::size_t v : dec_.segments[si].interior) {
                verts.push_back(v);
                verts.push_back(v + n);
            }
        }
        if (verts.size() > 80) return;
        std::vector<std::size_t> rows, cols;
        for (std::size_t v : verts) (g_.side[v] == Color::Red ? rows : cols).push_back(v);
        require(rows.size() == cols.size(), "mcpm_candidate: unbalanced subproblem");
        std::unordered_map<std::size_t, std::size_t> col_of;
        for (std::size_t j = 0; j < cols.size(); ++j) col_of.emplace(cols[j], j);
        oracle::DenseCostMatrix<RadicalSum> m(rows.size());
        RadicalSum have;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (const auto& [w, c] : g_.adj[rows[i]]) {
                const auto it = col_of.find(w);
                if (it != col_of.end()) m.at(i, it->second) = c;
            }
            const long mt = mate_[rows[i]];
            require(mt >= 0 && col_of.count(static_cast<std::size_t>(mt)), "mcpm_candidate: subproblem not perfect");
            have += edge_cost(g_, rows[i], static_cast<std::size_t>(mt));
        }
        const auto best = oracle::mcpm_dense(m);
        require(best.has_value() && best->cost == have, "mcpm_candidate: subproblem matching is not optimal");
    }

    const PrismGraph& pg_;
    const eligibility::Decomposition& dec_;
    CostGraph g_;
    std::vector<long> mate_;
    std::ostream* trace_;
    const SplitObserver* on_split_;
    DncStats stats_;
};

}  // namespace

CandidateOptimum mcpm_candidate(const PrismGraph& pg, const eligibility::CandidateSet& cand,
                                const eligibility::Decomposition& dec, std::ostream* trace,
                                const SplitObserver* on_split) {
    return Solver(pg, cand, dec, trace, on_split).run();
}

}  // namespace manymatch::separator
