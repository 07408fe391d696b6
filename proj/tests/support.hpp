#pragma once

#include <algorithm>
#include <random>

#include "manymatch/io.hpp"
#include "manymatch/prism.hpp"

namespace manymatch::test {

inline Instance random_instance(std::size_t n, std::int64_t delta, std::uint64_t seed) {
    return generate_instance(n, delta, seed);
}

// Uniformly random upper matching; unmatched points take links, the mirrors
// of matched points are paired at random in the lower layer.
template <class Rng>
PrismMatching random_perfect_matching(const PrismGraph& pg, Rng& rng) {
    const std::size_t n = pg.n();
    const std::size_t nr = pg.instance().red.size();
    PrismMatching pm(pg.vertex_count());
    std::vector<std::size_t> reds(nr), blues(n - nr);
    for (std::size_t i = 0; i < nr; ++i) reds[i] = i;
    for (std::size_t i = nr; i < n; ++i) blues[i - nr] = i;
    std::shuffle(reds.begin(), reds.end(), rng);
    std::shuffle(blues.begin(), blues.end(), rng);
    const std::size_t k = rng() % (std::min(reds.size(), blues.size()) + 1);
    std::vector<std::size_t> lr, lb;
    for (std::size_t i = 0; i < k; ++i) {
        pm.match(reds[i], blues[i]);
        lr.push_back(reds[i] + n);
        lb.push_back(blues[i] + n);
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (pm.mate[v] < 0) pm.match(v, v + n);
    }
    std::shuffle(lb.begin(), lb.end(), rng);
    for (std::size_t i = 0; i < k; ++i) pm.match(lr[i], lb[i]);
    return pm;
}

}  // namespace manymatch::test
