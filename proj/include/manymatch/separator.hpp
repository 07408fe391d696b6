#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "manymatch/eligibility.hpp"
#include "manymatch/prism.hpp"
#include "manymatch/radical.hpp"

namespace manymatch::separator {

// Planar graph on local ids [0, size).
struct Skeleton {
    std::size_t size = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

// Skeleton of a decomposition; local id i stands for point dec.skeleton[i].
Skeleton skeleton_of(const eligibility::Decomposition& dec);

struct Partition {
    std::vector<std::size_t> X, Y, S;  // sorted local ids
};

// No X-Y edge, |X|, |Y| <= 2n/3 and |S| <= 2 sqrt(2) sqrt(n). The bounds are
// checked before returning.
Partition planar_separator(const Skeleton& sk);

// Throws InvariantError naming the first violated bound.
void check_partition(const Skeleton& sk, const Partition& part);

enum class Part : std::uint8_t { X, Y, S, Outside };

// Lift of a partition of skeleton points `K` to prism vertices. Interior
// points of a segment follow an endpoint in X (or Y); otherwise they stay in
// S and are grouped by segment.
struct SeparatorPartition {
    std::vector<Part> part;  // per prism vertex
    std::vector<char> skeleton;  // per prism vertex: copy of a point of K
    std::vector<std::size_t> x_segments, y_segments, s_segments;
};

SeparatorPartition lift_partition(const PrismGraph& pg, const eligibility::Decomposition& dec,
                                  const std::vector<std::size_t>& K, const std::vector<std::size_t>& segments,
                                  const Partition& part);

// Full scan of the candidate edges for an X~-Y~ edge.
void check_lift(const eligibility::CandidateSet& cand, const SeparatorPartition& lifted);

struct InteriorSolution {
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // prism vertex pairs
    RadicalSum cost;
};

// Min-cost perfect matching on W and its mirrors: the 1D penalized solve on
// W, mirrored below, links for the points paying their penalty.
InteriorSolution solve_interior_group(const PrismGraph& pg, const LineKey& line, const std::vector<std::size_t>& W);

// Bipartite graph with exact costs; side Red is one class, Blue the other.
struct CostGraph {
    std::vector<Color> side;
    std::vector<std::vector<std::pair<std::size_t, RadicalSum>>> adj;

    explicit CostGraph(std::vector<Color> sides) : side(std::move(sides)), adj(side.size()) {}
    std::size_t size() const { return side.size(); }
    void add_edge(std::size_t u, std::size_t v, const RadicalSum& cost);
};

CostGraph candidate_graph(const PrismGraph& pg, const eligibility::CandidateSet& cand);

// Min-cost maximum-cardinality matching of the subgraph induced by the active
// vertices, grown one vertex at a time. Potentials make every residual arc
// non-negative: non-matching (r, b) has c + pi(r) - pi(b) >= 0, matched
// edges have it <= 0.
class IncrementalMatching {
public:
    // `mate` must be a min-cost max-cardinality matching of the subgraph
    // induced by `active`. Potentials are rebuilt by Bellman-Ford.
    IncrementalMatching(const CostGraph& g, std::vector<long>& mate, const std::vector<std::size_t>& active);

    enum class Outcome { Augmented, Improved, Unchanged };
    Outcome insert(std::size_t v);

    bool active(std::size_t v) const { return active_[v] != 0; }
    const std::vector<long>& mate() const { return *mate_; }

private:
    RadicalSum slack(std::size_t u, std::size_t w, const RadicalSum& c) const;

    const CostGraph* g_;
    std::vector<long>* mate_;
    std::vector<char> active_;
    std::vector<RadicalSum> pi_;
};

// One-shot form: grows the matching of H - {v} by v.
IncrementalMatching::Outcome insert_vertex(const CostGraph& g, std::vector<long>& mate,
                                           const std::vector<std::size_t>& active_without_v, std::size_t v);

struct DncStats {
    std::size_t separator_calls = 0;
    std::size_t max_depth = 0;
    std::size_t insertions = 0;
    std::size_t interior_groups = 0;
};

struct CandidateOptimum {
    PrismMatching matching;
    RadicalSum cost;
    DncStats stats;
};

// Sees every separator call of the recursion with its lift.
using SplitObserver = std::function<void(const Skeleton&, const Partition&, const SeparatorPartition&)>;

// Exact min-cost perfect matching of the candidate subgraph by separator
// divide and conquer. `trace` receives one line per recursion step.
CandidateOptimum mcpm_candidate(const PrismGraph& pg, const eligibility::CandidateSet& cand,
                                const eligibility::Decomposition& dec, std::ostream* trace = nullptr,
                                const SplitObserver* on_split = nullptr);

// Base-case size in skeleton vertices.
inline constexpr std::size_t kBaseCase = 8;

}  // namespace manymatch::separator
