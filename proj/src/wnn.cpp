#include "manymatch/wnn.hpp"

#include <cmath>
#include <stdexcept>

namespace manymatch {

static double scaled_double(const BigInt& w, long t) {
    long exp = 0;
    const double m = mpz_get_d_2exp(&exp, w.get_mpz_t());
    return std::ldexp(m, static_cast<int>(exp - t));
}

void WeightedNearest::insert(std::size_t id, const GridPoint& p, const BigInt& weight) {
    if (contains(id)) throw std::invalid_argument("WeightedNearest::insert: duplicate id");
    index_.emplace(id, sites_.size());
    sites_.push_back({id, p, weight, scaled_double(weight, t_)});
}

void WeightedNearest::erase(std::size_t id) {
    const auto it = index_.find(id);
    if (it == index_.end()) throw std::invalid_argument("WeightedNearest::erase: unknown id");
    const std::size_t slot = it->second;
    index_.erase(it);
    if (slot + 1 != sites_.size()) {
        sites_[slot] = std::move(sites_.back());
        index_[sites_[slot].id] = slot;
    }
    sites_.pop_back();
}

RootExpr WeightedNearest::value(const GridPoint& q, const GridPoint& p, const BigInt& weight) const {
    RootExpr e;
    e.s = dist2(q, p);
    e.b = 1;
    e.a = -weight;
    if (t_ > 0) e.b <<= static_cast<mp_bitcnt_t>(t_);
    if (t_ < 0) e.a <<= static_cast<mp_bitcnt_t>(-t_);
    return e;
}

std::optional<WeightedNearest::Hit> WeightedNearest::query_min(const GridPoint& q) const {
    if (sites_.empty()) return std::nullopt;
    // Floating filter: keep every site whose value interval can reach the
    // smallest upper bound, then decide exactly.
    thread_local std::vector<double> lo;
    thread_local std::vector<double> hi;
    lo.resize(sites_.size());
    hi.resize(sites_.size());
    double best_hi = INFINITY;
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        const double d = std::sqrt(static_cast<double>(dist2(q, sites_[i].p)));
        const double v = d - sites_[i].w_real;
        const double err = (d + std::fabs(sites_[i].w_real)) * 0x1p-48 + 0x1p-1000;
        lo[i] = v - err;
        hi[i] = v + err;
        if (hi[i] < best_hi) best_hi = hi[i];
    }
    std::optional<Hit> best;
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        if (lo[i] > best_hi) continue;
        RootExpr v = value(q, sites_[i].p, sites_[i].w);
        if (!best) {
            best = Hit{sites_[i].id, std::move(v)};
            continue;
        }
        const auto c = cmp_root(v, best->value);
        if (c == std::strong_ordering::less || (c == std::strong_ordering::equal && sites_[i].id < best->id)) {
            best = Hit{sites_[i].id, std::move(v)};
        }
    }
    return best;
}

}  // namespace manymatch
