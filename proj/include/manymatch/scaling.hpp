#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "manymatch/core.hpp"
#include "manymatch/prism.hpp"
#include "manymatch/wnn.hpp"

namespace manymatch::scaling {

// theta = 2^-t throughout.
long ceil_log2(const BigInt& v);
// 2^t0 >= 2 delta, the first phase halves it.
long initial_exponent(std::int64_t delta);
// theta <= 1 / (n delta^33).
long exact_exponent(std::size_t n, std::int64_t delta);
// theta <= eps / (3n), eps given as a positive decimal or integer string.
long epsilon_exponent(std::size_t n, double eps);

// ceil(c(u, v) / theta) for a prism edge.
BigInt scaled_cost(const PrismGraph& pg, std::size_t u, std::size_t v, long t);

struct FeasibilityReport {
    bool ok = true;
    std::size_t u = 0;
    std::size_t v = 0;
    std::string detail;
};

// Exhaustive O(n^2) check of y(u) + y(v) <= c + 1 on every edge and
// y(u) + y(v) = c on matched edges.
FeasibilityReport verify_one_feasible(const PrismGraph& pg, long t, const PrismMatching& m,
                                      const std::vector<BigInt>& y);

struct SearchEvent {
    std::size_t r = 0;
    std::size_t b = 0;
    BigInt alpha;
    BigInt omega;
};

// State of one 1-OptimalMatch call at a fixed exponent.
class Matcher {
public:
    Matcher(const PrismGraph& pg, long t, std::vector<BigInt> y, std::ostream* trace = nullptr);

    // Grows the alternating forest from all free B~ vertices, raising duals
    // until an admissible edge to a free R~ vertex appears. Duals are
    // materialized on return. Returns that edge.
    SearchEvent hungarian_search();
    // Maximal set of vertex-disjoint augmenting paths in the admissible
    // graph, each as b0, r1, b1, ..., rk.
    std::vector<std::vector<std::size_t>> dfs_collect_paths();
    void augment(const std::vector<std::vector<std::size_t>>& paths);
    // Repeats the three steps until the matching is perfect.
    void run();

    const PrismMatching& matching() const { return m_; }
    const std::vector<BigInt>& duals() const { return y_; }
    std::size_t iterations() const { return iterations_; }
    std::size_t free_b() const;

    // Exposed for tests.
    BigInt slack(std::size_t r, std::size_t b) const;
    bool is_admissible(std::size_t r, std::size_t b) const;

private:
    const BigInt& link_cost(std::size_t point) const { return link_cost_[point]; }
    bool in_r0(std::size_t v) const { return v < n_ && pg_.side(v) == Color::Red; }
    bool in_b0(std::size_t v) const { return v < n_ && pg_.side(v) == Color::Blue; }

    const PrismGraph& pg_;
    long t_;
    std::size_t n_;
    std::vector<BigInt> y_;
    std::vector<BigInt> link_cost_;
    PrismMatching m_;
    std::ostream* trace_;
    std::size_t iterations_ = 0;
};

struct PhaseReport {
    long t = 0;
    std::size_t iterations = 0;
    const PrismMatching* matching = nullptr;
    const std::vector<BigInt>* duals = nullptr;
};

struct ScalingOptions {
    long t_final = 0;
    std::ostream* trace = nullptr;
    std::function<void(const PhaseReport&)> on_phase;
};

struct ScalingResult {
    PrismMatching matching;
    std::vector<BigInt> y;
    long t = 0;
    std::vector<std::size_t> iterations;  // per phase
};

// y = 0 at theta_0 = 2^-t0, then phases t = t0+1, ..., t_final with
// y <- 2y - 1 and a fresh 1-optimal matching each.
ScalingResult run_scaling(const PrismGraph& pg, const ScalingOptions& opt);

// Additive bound 3 n theta as an exact comparison: cost <= opt + 3n 2^-t.
bool within_additive_bound(const RadicalSum& cost, const RadicalSum& opt, std::size_t n, long t);

}  // namespace manymatch::scaling
