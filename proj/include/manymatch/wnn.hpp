#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "manymatch/core.hpp"

namespace manymatch {

// Dynamic additively weighted nearest neighbor by exact linear scan.
// Weights are integers w standing for w * 2^-t; a query minimizes
// ||q - p|| - w * 2^-t over live sites, ties to the smallest id.
class WeightedNearest {
public:
    struct Hit {
        std::size_t id;
        // (||q - p|| - w 2^-t) * 2^max(t, 0), exactly.
        RootExpr value;
    };

    explicit WeightedNearest(long t = 0) : t_(t) {}

    long exponent() const { return t_; }
    std::size_t size() const { return sites_.size(); }
    bool contains(std::size_t id) const { return index_.count(id) != 0; }

    void insert(std::size_t id, const GridPoint& p, const BigInt& weight);
    void erase(std::size_t id);
    std::optional<Hit> query_min(const GridPoint& q) const;

    // Scaled value of one site, for callers that verify a result.
    RootExpr value(const GridPoint& q, const GridPoint& p, const BigInt& weight) const;

private:
    struct Site {
        std::size_t id;
        GridPoint p;
        BigInt w;
        double w_real;  // w * 2^-t
    };
    long t_;
    std::vector<Site> sites_;
    std::unordered_map<std::size_t, std::size_t> index_;
};

}  // namespace manymatch
