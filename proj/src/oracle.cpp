#include "manymatch/oracle.hpp"

namespace manymatch::oracle {

std::optional<PrismOptimum> prism_mcpm(const PrismGraph& pg,
                                       const std::vector<std::pair<std::size_t, std::size_t>>* edges) {
    const std::size_t nv = pg.vertex_count();
    std::vector<std::size_t> rows, cols;
    std::vector<std::size_t> slot(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        auto& side = pg.side(v) == Color::Red ? rows : cols;
        slot[v] = side.size();
        side.push_back(v);
    }
    DenseCostMatrix<RadicalSum> m(rows.size());
    m.row_label = rows;
    m.col_label = cols;
    auto put = [&](std::size_t a, std::size_t b) {
        if (pg.edge_class(a, b) == EdgeClass::None) throw std::invalid_argument("prism_mcpm: not a prism edge");
        if (pg.side(a) != Color::Red) std::swap(a, b);
        m.at(slot[a], slot[b]) = pg.cost(a, b);
    };
    if (edges) {
        for (auto [a, b] : *edges) put(a, b);
    } else {
        for (std::size_t r : rows) {
            for (std::size_t b : cols) {
                if (pg.edge_class(r, b) != EdgeClass::None) put(r, b);
            }
        }
    }
    auto res = mcpm_dense(m);
    if (!res) return std::nullopt;
    PrismOptimum out{PrismMatching(nv), res->cost};
    for (std::size_t i = 0; i < rows.size(); ++i) out.matching.match(rows[i], cols[res->row_to_col[i]]);
    return out;
}

CoverOptimum edge_cover_opt(const Instance& inst, std::size_t max_n) {
    if (inst.n() > max_n) throw InputError("oracle: instance size exceeds the dense bound");
    const PrismGraph pg(inst);
    auto opt = prism_mcpm(pg);
    require(opt.has_value(), "oracle: prism has no perfect matching");
    CoverOptimum out;
    out.cover = matching_to_cover(pg, opt->matching);
    out.cost = opt->cost;
    out.matching = std::move(opt->matching);
    return out;
}

RadicalSum chamfer(const Instance& inst) {
    RadicalSum total;
    for (const auto& no : nearest_opposite_all(inst)) total += RadicalSum::sqrt(no.d2);
    return total;
}

}  // namespace manymatch::oracle
