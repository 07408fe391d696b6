#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "manymatch/core.hpp"
#include "manymatch/radical.hpp"

namespace manymatch {

struct NearestOpposite {
    std::size_t id = 0;    // global point id of the nearest opposite-colored point
    std::int64_t d2 = 0;   // squared distance to it, mu(v)^2
};

// Ties go to the lowest point id.
std::vector<NearestOpposite> nearest_opposite_all(const Instance& inst);

enum class Layer : std::uint8_t { Upper, Lower };
enum class EdgeClass : std::uint8_t { Upper, Lower, Link, None };

struct PrismVertex {
    std::size_t base = 0;  // global point id
    Layer layer = Layer::Upper;
    Color side = Color::Red;  // Red: the class R0 ∪ R1, Blue: B0 ∪ B1
};

// Prism vertex ids: v in [0, n) is the upper copy of point v, v + n its mirror.
// Only vertices and link penalties are stored.
class PrismGraph {
public:
    explicit PrismGraph(Instance inst);

    const Instance& instance() const { return inst_; }
    std::size_t n() const { return inst_.n(); }
    std::size_t vertex_count() const { return 2 * n(); }

    PrismVertex vertex(std::size_t v) const;
    Color side(std::size_t v) const;
    std::size_t mirror(std::size_t v) const { return v < n() ? v + n() : v - n(); }
    std::size_t base(std::size_t v) const { return v < n() ? v : v - n(); }
    bool is_upper(std::size_t v) const { return v < n(); }

    std::int64_t mu2(std::size_t point) const { return nearest_[point].d2; }
    std::size_t nearest(std::size_t point) const { return nearest_[point].id; }
    RootExpr mu(std::size_t point) const { return RootExpr::root(mu2(point)); }

    EdgeClass edge_class(std::size_t u, std::size_t v) const;
    // Squared Euclidean cost: dist2 for upper edges, 0 for lower, mu^2 for links.
    std::int64_t cost2(std::size_t u, std::size_t v) const;
    RadicalSum cost(std::size_t u, std::size_t v) const { return RadicalSum::sqrt(cost2(u, v)); }

private:
    Instance inst_;
    std::vector<NearestOpposite> nearest_;
};

inline PrismGraph build_prism(const Instance& inst) { return PrismGraph(inst); }

struct PrismMatching {
    std::vector<long> mate;  // -1 when free

    PrismMatching() = default;
    explicit PrismMatching(std::size_t vertex_count) : mate(vertex_count, -1) {}

    bool is_perfect() const;
    void match(std::size_t u, std::size_t v) {
        mate[u] = static_cast<long>(v);
        mate[v] = static_cast<long>(u);
    }
    std::size_t size() const;
    // Each edge once, as (smaller id, larger id), sorted.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;
    friend bool operator==(const PrismMatching&, const PrismMatching&) = default;
};

// Throws InvariantError if pm is not a matching of pg's edges.
void check_matching(const PrismGraph& pg, const PrismMatching& pm);

RadicalSum matching_cost(const PrismGraph& pg, const PrismMatching& pm);
// Squared costs of the non-zero edges, sorted.
std::vector<std::int64_t> matching_cost_multiset(const PrismGraph& pg, const PrismMatching& pm);

struct EdgeCover {
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // (red index, blue index)
};

EdgeCover matching_to_cover(const PrismGraph& pg, const PrismMatching& pm);

bool is_symmetric(const PrismGraph& pg, const PrismMatching& pm);
PrismMatching symmetrize(const PrismGraph& pg, const PrismMatching& pm);

struct CostReport {
    RadicalSum value;
    std::vector<std::int64_t> squared;  // sorted squared lengths
    std::string decimal;
};

// Names the first uncovered point ("red[i]" / "blue[j]"), or a bad index.
std::optional<std::string> cover_defect(const Instance& inst, const EdgeCover& cover);

CostReport cover_cost(const Instance& inst, const EdgeCover& cover, int digits = 64);

}  // namespace manymatch
