#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "manymatch/core.hpp"
#include "manymatch/penalty1d.hpp"
#include "manymatch/prism.hpp"

namespace manymatch::eligibility {

// Final duals of a 1-optimal matching at theta = 2^-t. Point ids index the
// upper layer, so y[v] is the dual of point v.
class Context {
public:
    Context(const PrismGraph& pg, std::vector<BigInt> y, long t);

    const PrismGraph& prism() const { return *pg_; }
    const Instance& instance() const { return pg_->instance(); }
    const BigInt& y(std::size_t point) const { return y_[point]; }
    const std::vector<BigInt>& duals() const { return y_; }
    long exponent() const { return t_; }
    const BigInt& delta33() const { return delta33_; }

private:
    const PrismGraph* pg_;
    std::vector<BigInt> y_;
    long t_;
    BigInt delta33_;
};

// 2^-t (y(u) + y(v)) > ||u - v|| - 2 / delta^33, decided exactly.
bool is_eligible(std::size_t u, std::size_t v, const Context& ctx);

struct PointLine {
    std::size_t point = 0;
    LineKey line;
    friend auto operator<=>(const PointLine&, const PointLine&) = default;
};

// Every (v, l) such that some eligible edge at v lies on l, sorted.
std::vector<PointLine> point_line_pairs(const Context& ctx);

// Maximal segments covering the eligible edges among `pts`, which lie on
// `line` sorted by parameter. Segments come back as (first, last) point ids
// in parameter order.
std::vector<std::pair<std::size_t, std::size_t>> line_union(const LineKey& line,
                                                            const std::vector<std::size_t>& pts,
                                                            const Context& ctx);

struct DecompSegment {
    std::size_t p = 0;  // endpoint with the smaller parameter
    std::size_t q = 0;
    LineKey line;
    std::vector<std::size_t> interior;  // points strictly between p and q, by parameter
};

struct Decomposition {
    std::vector<DecompSegment> segments;
    std::vector<std::size_t> skeleton;  // segment endpoints, sorted
    std::vector<long> interior_of;      // per point: index of the segment holding it inside, or -1
};

Decomposition build_decomposition(const Context& ctx);

// Exhaustive checks: no two segments cross, interior points are exactly the
// points strictly inside, no skeleton vertex sits inside a segment. Throws
// InvariantError.
void check_decomposition(const Instance& inst, const Decomposition& dec);

// One line per segment: "p q line=<key> interior=<k>" with point ids.
std::string dump(const Decomposition& dec);

struct CandidateSet {
    std::size_t n = 0;
    // Upper-layer edges as (red point id, blue point id), sorted, unique.
    // Their mirrors and all n links are implied.
    std::vector<std::pair<std::size_t, std::size_t>> upper;

    std::size_t size() const { return 2 * upper.size() + n; }
    // All edges as prism vertex pairs.
    std::vector<std::pair<std::size_t, std::size_t>> prism_edges() const;
};

// Point v on `line` for a local 1D solve: exact position t * |d| and
// penalty mu(v).
penalty1d::LinePoint<RadicalSum> line_point(const PrismGraph& pg, const LineKey& line, std::size_t v);

CandidateSet candidate_edges(const Decomposition& dec, const Context& ctx);

// The allowed candidate count is this factor times n.
inline constexpr std::size_t kCandidateFactor = 12;

}  // namespace manymatch::eligibility
