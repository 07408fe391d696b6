#include "manymatch/scaling.hpp"

#include <cmath>
#include <ostream>
#include <queue>
#include <sstream>

namespace manymatch::scaling {

long ceil_log2(const BigInt& v) {
    if (v <= 1) return 0;
    const BigInt w = v - 1;
    return static_cast<long>(mpz_sizeinbase(w.get_mpz_t(), 2));
}

long initial_exponent(std::int64_t delta) { return -ceil_log2(BigInt(2 * delta)); }

long exact_exponent(std::size_t n, std::int64_t delta) {
    BigInt v;
    mpz_pow_ui(v.get_mpz_t(), BigInt(delta).get_mpz_t(), 33);
    v *= static_cast<unsigned long>(n);
    return ceil_log2(v);
}

long epsilon_exponent(std::size_t n, double eps) {
    if (!(eps > 0)) throw InputError("epsilon must be positive");
    const double target = eps / (3.0 * static_cast<double>(n));
    long t = -1100;
    while (std::ldexp(1.0, static_cast<int>(-t)) > target) ++t;
    return t;
}

BigInt scaled_cost(const PrismGraph& pg, std::size_t u, std::size_t v, long t) {
    return ceil_sqrt_scaled(pg.cost2(u, v), t);
}

bool within_additive_bound(const RadicalSum& cost, const RadicalSum& opt, std::size_t n, long t) {
    return (cost - opt).compare_dyadic(BigInt(static_cast<unsigned long>(3 * n)), -t) <= 0;
}

FeasibilityReport verify_one_feasible(const PrismGraph& pg, long t, const PrismMatching& m,
                                      const std::vector<BigInt>& y) {
    FeasibilityReport rep;
    const std::size_t nv = pg.vertex_count();
    for (std::size_t u = 0; u < nv && rep.ok; ++u) {
        if (pg.side(u) != Color::Red) continue;
        for (std::size_t v = 0; v < nv; ++v) {
            if (pg.edge_class(u, v) == EdgeClass::None) continue;
            const BigInt c = scaled_cost(pg, u, v, t);
            const BigInt sum = y[u] + y[v];
            const bool matched = m.mate[u] == static_cast<long>(v);
            if (sum > c + 1 || (matched && sum != c)) {
                rep.ok = false;
                rep.u = u;
                rep.v = v;
                std::ostringstream os;
                os << (matched ? "matched" : "unmatched") << " edge (" << u << "," << v << "): y sum " << sum
                   << " vs scaled cost " << c;
                rep.detail = os.str();
                break;
            }
        }
    }
    return rep;
}

namespace {

// Min-heap entry for the E0 closest pair, keyed by the scaled real value of
// ||r - b|| - theta (sigma_r + sigma_b).
struct PairEntry {
    RootExpr key;
    std::size_t b;
    std::size_t r;
};
struct PairAfter {
    bool operator()(const PairEntry& x, const PairEntry& y) const {
        const auto c = cmp_root(x.key, y.key);
        if (c != std::strong_ordering::equal) return c == std::strong_ordering::greater;
        return std::tie(x.b, x.r) > std::tie(y.b, y.r);
    }
};

// Max-heap over static weights, ties to the smaller id.
struct KeyEntry {
    BigInt key;
    std::size_t id;
};
struct KeyBelow {
    bool operator()(const KeyEntry& x, const KeyEntry& y) const {
        const int c = cmp(x.key, y.key);
        return c != 0 ? c < 0 : x.id > y.id;
    }
};

// Min-heap over link-edge static slacks.
struct LinkEntry {
    BigInt slack;
    std::size_t r;
    std::size_t b;
};
struct LinkAfter {
    bool operator()(const LinkEntry& x, const LinkEntry& y) const {
        const int c = cmp(x.slack, y.slack);
        return c != 0 ? c > 0 : std::tie(x.r, x.b) > std::tie(y.r, y.b);
    }
};

struct Candidate {
    BigInt slack;
    std::size_t r = 0;
    std::size_t b = 0;
    bool valid = false;

    void offer(const BigInt& s, std::size_t rr, std::size_t bb) {
        if (!valid || s < slack || (s == slack && std::tie(rr, bb) < std::tie(r, b))) {
            slack = s;
            r = rr;
            b = bb;
            valid = true;
        }
    }
};

}  // namespace

Matcher::Matcher(const PrismGraph& pg, long t, std::vector<BigInt> y, std::ostream* trace)
    : pg_(pg), t_(t), n_(pg.n()), y_(std::move(y)), m_(pg.vertex_count()), trace_(trace) {
    require(y_.size() == pg.vertex_count(), "Matcher: dual vector has wrong size");
    link_cost_.reserve(n_);
    for (std::size_t v = 0; v < n_; ++v) link_cost_.push_back(ceil_sqrt_scaled(pg.mu2(v), t));
}

std::size_t Matcher::free_b() const {
    std::size_t c = 0;
    for (std::size_t v = 0; v < pg_.vertex_count(); ++v) {
        if (pg_.side(v) == Color::Blue && m_.mate[v] < 0) ++c;
    }
    return c;
}

BigInt Matcher::slack(std::size_t r, std::size_t b) const {
    return scaled_cost(pg_, r, b, t_) + 1 - y_[r] - y_[b];
}

bool Matcher::is_admissible(std::size_t r, std::size_t b) const {
    return m_.mate[r] != static_cast<long>(b) && slack(r, b) == 0;
}

SearchEvent Matcher::hungarian_search() {
    const std::size_t nv = pg_.vertex_count();
    const Instance& inst = pg_.instance();
    std::vector<BigInt> sigma = y_;
    std::vector<char> in_r(nv, 0), in_b(nv, 0);
    BigInt omega = 0;
    const mp_bitcnt_t a_shift = t_ < 0 ? static_cast<mp_bitcnt_t>(-t_) : 0;

    WeightedNearest d(t_);
    std::priority_queue<KeyEntry, std::vector<KeyEntry>, KeyBelow> h_r1, h_b1;
    std::priority_queue<LinkEntry, std::vector<LinkEntry>, LinkAfter> h2, h3;
    std::priority_queue<PairEntry, std::vector<PairEntry>, PairAfter> pairs;
    for (std::size_t v = 0; v < nv; ++v) {
        if (pg_.side(v) != Color::Red) continue;
        if (in_r0(v)) d.insert(v, inst.point(v), sigma[v]);
        else h_r1.push({sigma[v], v});
    }

    auto query_pair = [&](std::size_t b) {
        if (auto hit = d.query_min(inst.point(b))) {
            RootExpr key = std::move(hit->value);
            BigInt sb = sigma[b];
            sb <<= a_shift;
            key.a -= sb;
            pairs.push({std::move(key), b, hit->id});
        }
    };
    auto add_b = [&](std::size_t b) {
        in_b[b] = 1;
        const std::size_t mate_copy = pg_.mirror(b);
        if (in_b0(b)) {
            query_pair(b);
            if (!in_r[mate_copy]) h3.push({link_cost(b) + 1 - sigma[mate_copy] - sigma[b], mate_copy, b});
        } else {
            h_b1.push({sigma[b], b});
            if (!in_r[mate_copy]) h2.push({link_cost(mate_copy) + 1 - sigma[mate_copy] - sigma[b], mate_copy, b});
        }
    };

    for (std::size_t v = 0; v < nv; ++v) {
        if (pg_.side(v) == Color::Blue && m_.mate[v] < 0) add_b(v);
    }

    for (;;) {
        Candidate best;
        while (!pairs.empty()) {
            const PairEntry& top = pairs.top();
            if (in_r[top.r]) {
                const std::size_t b = top.b;
                pairs.pop();
                query_pair(b);
                continue;
            }
            best.offer(scaled_cost(pg_, top.r, top.b, t_) + 1 - sigma[top.r] - sigma[top.b], top.r, top.b);
            break;
        }
        while (!h_r1.empty() && in_r[h_r1.top().id]) h_r1.pop();
        if (!h_r1.empty() && !h_b1.empty()) {
            best.offer(1 - h_r1.top().key - h_b1.top().key, h_r1.top().id, h_b1.top().id);
        }
        for (auto* h : {&h2, &h3}) {
            while (!h->empty() && in_r[h->top().r]) h->pop();
            if (!h->empty()) best.offer(h->top().slack, h->top().r, h->top().b);
        }
        require(best.valid, "hungarian_search: no edge leaves the forest");
        const BigInt alpha = best.slack - omega;
        require(alpha >= 0, "hungarian_search: negative slack");
        omega += alpha;
        if (trace_) {
            *trace_ << "phase t=" << t_ << " | alpha=" << alpha << " | edge=(" << best.r << "," << best.b
                    << ") | omega=" << omega << "\n";
        }
        const long mate = m_.mate[best.r];
        if (mate < 0) {
            for (std::size_t v = 0; v < nv; ++v) {
                if (in_r[v]) y_[v] = sigma[v] - omega;
                else if (in_b[v]) y_[v] = sigma[v] + omega;
                else y_[v] = sigma[v];
            }
            return {best.r, best.b, alpha, omega};
        }
        const std::size_t r = best.r;
        in_r[r] = 1;
        sigma[r] += omega;
        if (in_r0(r)) d.erase(r);
        const auto b2 = static_cast<std::size_t>(mate);
        sigma[b2] -= omega;
        add_b(b2);
    }
}

std::vector<std::vector<std::size_t>> Matcher::dfs_collect_paths() {
    const std::size_t nv = pg_.vertex_count();
    const Instance& inst = pg_.instance();
    std::vector<char> visited(nv, 0);
    WeightedNearest d(t_);
    std::priority_queue<KeyEntry, std::vector<KeyEntry>, KeyBelow> h_r1;
    for (std::size_t v = 0; v < nv; ++v) {
        if (pg_.side(v) != Color::Red) continue;
        if (in_r0(v)) d.insert(v, inst.point(v), y_[v]);
        else h_r1.push({y_[v], v});
    }
    auto visit_r = [&](std::size_t r) {
        visited[r] = 1;
        if (in_r0(r)) d.erase(r);
    };
    // The unvisited R~ vertex reached from u by an admissible edge, if any.
    auto extend = [&](std::size_t u) -> std::optional<std::size_t> {
        Candidate best;
        const std::size_t copy = pg_.mirror(u);
        if (in_b0(u)) {
            if (auto hit = d.query_min(inst.point(u))) best.offer(slack(hit->id, u), hit->id, u);
            if (!visited[copy]) best.offer(link_cost(u) + 1 - y_[copy] - y_[u], copy, u);
        } else {
            while (!h_r1.empty() && visited[h_r1.top().id]) h_r1.pop();
            if (!h_r1.empty()) best.offer(1 - h_r1.top().key - y_[u], h_r1.top().id, u);
            if (!visited[copy]) best.offer(link_cost(copy) + 1 - y_[copy] - y_[u], copy, u);
        }
        if (!best.valid) return std::nullopt;
        require(best.slack >= 0, "dfs: negative slack");
        if (best.slack != 0) return std::nullopt;
        return best.r;
    };

    std::vector<std::vector<std::size_t>> paths;
    for (std::size_t root = 0; root < nv; ++root) {
        if (pg_.side(root) != Color::Blue || m_.mate[root] >= 0 || visited[root]) continue;
        visited[root] = 1;
        std::vector<std::size_t> gamma{root};
        while (!gamma.empty()) {
            const std::size_t u = gamma.back();
            const auto r = extend(u);
            if (!r) {
                gamma.pop_back();
                if (!gamma.empty()) gamma.pop_back();
                continue;
            }
            visit_r(*r);
            gamma.push_back(*r);
            const long mate = m_.mate[*r];
            if (mate < 0) {
                paths.push_back(std::move(gamma));
                break;
            }
            visited[static_cast<std::size_t>(mate)] = 1;
            gamma.push_back(static_cast<std::size_t>(mate));
        }
    }
    return paths;
}

void Matcher::augment(const std::vector<std::vector<std::size_t>>& paths) {
    std::vector<char> used(pg_.vertex_count(), 0);
    for (const auto& p : paths) {
        if (p.size() < 2 || p.size() % 2 != 0) throw std::invalid_argument("augment: path length must be even");
        if (m_.mate[p.front()] >= 0 || m_.mate[p.back()] >= 0) {
            throw std::invalid_argument("augment: path endpoints must be free");
        }
        for (std::size_t i = 0; i < p.size(); ++i) {
            const std::size_t v = p[i];
            if (v >= used.size() || used[v]) throw std::invalid_argument("augment: paths are not vertex-disjoint");
            used[v] = 1;
            const Color want = i % 2 == 0 ? Color::Blue : Color::Red;
            if (pg_.side(v) != want) throw std::invalid_argument("augment: path does not alternate sides");
            if (i + 1 < p.size() && pg_.edge_class(v, p[i + 1]) == EdgeClass::None) {
                throw std::invalid_argument("augment: path uses a non-edge");
            }
            if (i % 2 == 1 && i + 1 < p.size() && m_.mate[v] != static_cast<long>(p[i + 1])) {
                throw std::invalid_argument("augment: path does not alternate with the matching");
            }
        }
    }
    for (const auto& p : paths) {
        for (std::size_t i = 0; i + 1 < p.size(); i += 2) {
            m_.match(p[i], p[i + 1]);
            // Newly matched edges were tight at c + 1; restore equality.
            y_[p[i]] -= 1;
        }
    }
}

void Matcher::run() {
    while (free_b() > 0) {
        ++iterations_;
        hungarian_search();
        const auto paths = dfs_collect_paths();
        require(!paths.empty(), "1-optimal match: no augmenting path after the search");
        augment(paths);
    }
}

ScalingResult run_scaling(const PrismGraph& pg, const ScalingOptions& opt) {
    long t = initial_exponent(pg.instance().delta);
    if (opt.t_final <= t) t = opt.t_final - 1;
    std::vector<BigInt> y(pg.vertex_count(), 0);
    ScalingResult res;
    while (t < opt.t_final) {
        ++t;
        for (auto& v : y) v = 2 * v - 1;
        if (debug_enabled()) {
            const auto rep = verify_one_feasible(pg, t, PrismMatching(pg.vertex_count()), y);
            require(rep.ok, "phase transition broke feasibility: " + rep.detail);
        }
        Matcher m(pg, t, std::move(y), opt.trace);
        m.run();
        y = m.duals();
        res.matching = m.matching();
        res.iterations.push_back(m.iterations());
        if (debug_enabled()) {
            const auto rep = verify_one_feasible(pg, t, res.matching, y);
            require(rep.ok, "phase result not 1-feasible: " + rep.detail);
        }
        if (opt.on_phase) opt.on_phase(PhaseReport{t, m.iterations(), &res.matching, &y});
    }
    res.y = std::move(y);
    res.t = t;
    return res;
}

}  // namespace manymatch::scaling
