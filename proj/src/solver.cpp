#include "manymatch/solver.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

#include "manymatch/eligibility.hpp"
#include "manymatch/oracle.hpp"
#include "manymatch/scaling.hpp"

namespace manymatch {

Mode parse_mode(const std::string& s) {
    if (s == "exact") return Mode::Exact;
    if (s == "approx") return Mode::Approx;
    if (s == "oracle") return Mode::Oracle;
    if (s == "chamfer") return Mode::Chamfer;
    throw InputError("unknown mode \"" + s + "\" (exact, approx, oracle, chamfer)");
}

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::Exact: return "exact";
        case Mode::Approx: return "approx";
        case Mode::Oracle: return "oracle";
        case Mode::Chamfer: return "chamfer";
    }
    return "exact";
}

EdgeCover chamfer_cover(const Instance& inst) {
    const std::size_t nr = inst.red.size();
    const auto near = nearest_opposite_all(inst);
    EdgeCover cover;
    for (std::size_t v = 0; v < inst.n(); ++v) {
        const std::size_t u = near[v].id;
        cover.edges.emplace_back(v < nr ? v : u, (v < nr ? u : v) - nr);
    }
    std::sort(cover.edges.begin(), cover.edges.end());
    cover.edges.erase(std::unique(cover.edges.begin(), cover.edges.end()), cover.edges.end());
    return cover;
}

namespace {

class Stopwatch {
public:
    explicit Stopwatch(std::map<std::string, double>& out) : out_(out), last_(Clock::now()) {}
    void lap(const std::string& stage) {
        const auto now = Clock::now();
        out_[stage] += std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
    }

private:
    using Clock = std::chrono::steady_clock;
    std::map<std::string, double>& out_;
    Clock::time_point last_;
};

std::string pass(bool ok) { return ok ? "pass" : "fail"; }

// The one-feasibility scan is quadratic; skip it on large inputs unless
// debugging.
constexpr std::size_t kFeasibilityScanMaxN = 2000;

void run_exact(const Instance& inst, const RunConfig& cfg, SolveOutput& out, Stopwatch& sw) {
    const PrismGraph pg(inst);
    const std::size_t n = pg.n();
    const long t_star = scaling::exact_exponent(n, inst.delta);
    const long t = cfg.theta_exp.value_or(t_star);
    if (t < t_star) throw InputError("exact mode needs theta exponent >= " + std::to_string(t_star));
    sw.lap("prism");
    const auto sr = scaling::run_scaling(pg, {t, cfg.trace, {}});
    out.t = sr.t;
    sw.lap("scaling");
    auto& checks = out.record.checks;
    if (n <= kFeasibilityScanMaxN || debug_enabled()) {
        const auto rep = scaling::verify_one_feasible(pg, sr.t, sr.matching, sr.y);
        require(rep.ok, "solve: final matching is not 1-feasible: " + rep.detail);
        checks["one_feasible"] = pass(rep.ok);
        sw.lap("feasibility_scan");
    }
    const eligibility::Context ctx(pg, sr.y, sr.t);
    const auto dec = eligibility::build_decomposition(ctx);
    out.segments = dec.segments.size();
    if (debug_enabled()) eligibility::check_decomposition(inst, dec);
    checks["non_crossing"] = "pass";
    sw.lap("decomposition");
    const auto cand = eligibility::candidate_edges(dec, ctx);
    out.candidates = cand.size();
    require(cand.size() <= eligibility::kCandidateFactor * n, "solve: candidate set exceeds 12n");
    checks["candidate_bound"] = "pass";
    sw.lap("candidates");
    auto opt = separator::mcpm_candidate(pg, cand, dec, cfg.trace);
    out.dnc = opt.stats;
    checks["separator_bounds"] = "pass";
    sw.lap("divide_and_conquer");
    out.cover = matching_to_cover(pg, opt.matching);
    out.cost = cover_cost(inst, out.cover, cfg.precision);
    require(out.cost.value == opt.cost, "solve: cover cost differs from matching cost");
    checks["reduction"] = "pass";
    out.matching = std::move(opt.matching);
    sw.lap("cover");
}

void run_approx(const Instance& inst, const RunConfig& cfg, SolveOutput& out, Stopwatch& sw) {
    const PrismGraph pg(inst);
    const std::size_t n = pg.n();
    long t = scaling::exact_exponent(n, inst.delta);
    if (cfg.theta_exp) t = *cfg.theta_exp;
    else if (cfg.epsilon) t = scaling::epsilon_exponent(n, *cfg.epsilon);
    t = std::max(t, scaling::initial_exponent(inst.delta));
    sw.lap("prism");
    const auto sr = scaling::run_scaling(pg, {t, cfg.trace, {}});
    out.t = sr.t;
    sw.lap("scaling");
    out.cover = matching_to_cover(pg, sr.matching);
    out.cost = cover_cost(inst, out.cover, cfg.precision);
    require(out.cost.value == matching_cost(pg, sr.matching), "solve: cover cost differs from matching cost");
    out.record.checks["reduction"] = "pass";
    // Additive error 3 n 2^-t.
    out.record.extra["epsilon"] = "3*" + std::to_string(n) + "*2^-" + std::to_string(sr.t);
    out.record.extra["theta_exp"] = std::to_string(sr.t);
    out.matching = sr.matching;
    sw.lap("cover");
}

}  // namespace

SolveOutput solve(const Instance& inst, const RunConfig& cfg) {
    validate(inst);
    SolveOutput out;
    std::map<std::string, double> timings;
    Stopwatch sw(timings);
    switch (cfg.mode) {
        case Mode::Exact:
            run_exact(inst, cfg, out, sw);
            out.record.extra["theta_exp"] = std::to_string(out.t);
            out.record.extra["segments"] = std::to_string(out.segments);
            out.record.extra["candidates"] = std::to_string(out.candidates);
            out.record.extra["separator_calls"] = std::to_string(out.dnc.separator_calls);
            break;
        case Mode::Approx:
            run_approx(inst, cfg, out, sw);
            break;
        case Mode::Oracle: {
            if (inst.n() > kOracleMaxN) {
                throw InputError("oracle mode supports n <= " + std::to_string(kOracleMaxN));
            }
            auto opt = oracle::edge_cover_opt(inst, kOracleMaxN);
            out.cover = std::move(opt.cover);
            out.cost = cover_cost(inst, out.cover, cfg.precision);
            require(out.cost.value == opt.cost, "solve: oracle cover cost mismatch");
            out.matching = std::move(opt.matching);
            sw.lap("oracle");
            break;
        }
        case Mode::Chamfer:
            out.cover = chamfer_cover(inst);
            out.cost = cover_cost(inst, out.cover, cfg.precision);
            out.record.extra["chamfer_sum"] = oracle::chamfer(inst).to_decimal(cfg.precision);
            sw.lap("chamfer");
            break;
    }
    ResultRecord& r = out.record;
    r.mode = mode_name(cfg.mode);
    r.cost = out.cost.decimal;
    r.cost_exact = out.cost.value.str();
    r.squared = out.cost.squared;
    r.edges = out.cover.edges;
    r.extra["precision"] = std::to_string(cfg.precision);
    if (cfg.timings) r.timings_ms = timings;
    return out;
}

Overlay compute_overlay(const Instance& inst) {
    validate(inst);
    const PrismGraph pg(inst);
    const auto sr = scaling::run_scaling(pg, {scaling::exact_exponent(pg.n(), inst.delta), nullptr, {}});
    const eligibility::Context ctx(pg, sr.y, sr.t);
    const auto dec = eligibility::build_decomposition(ctx);
    Overlay out;
    for (const auto& s : dec.segments) out.segments.emplace_back(s.p, s.q);
    const auto part = separator::planar_separator(separator::skeleton_of(dec));
    for (std::size_t i : part.S) out.separator.push_back(dec.skeleton[i]);
    return out;
}

VerifyReport verify(const Instance& inst, const ResultRecord& rec, int precision) {
    VerifyReport rep;
    validate(inst);
    EdgeCover cover{rec.edges};
    if (auto defect = cover_defect(inst, cover)) {
        rep.ok = false;
        rep.message = "coverage: " + *defect;
        return rep;
    }
    rep.recomputed = cover_cost(inst, cover, precision);
    if (rep.recomputed->decimal != rec.cost) {
        rep.ok = false;
        rep.message = "cost: record says " + rec.cost + ", recomputed " + rep.recomputed->decimal;
        return rep;
    }
    if (!rec.squared.empty() && rec.squared != rep.recomputed->squared) {
        rep.ok = false;
        rep.message = "cost: squared-length multiset differs from the edges";
        return rep;
    }
    if (inst.n() <= kOracleMaxN) {
        const auto opt = oracle::edge_cover_opt(inst, kOracleMaxN);
        rep.oracle_cost = opt.cost.to_decimal(precision);
        const RadicalSum& have = rep.recomputed->value;
        if (rec.mode == "exact" || rec.mode == "oracle") {
            if (!(have == opt.cost)) {
                rep.ok = false;
                rep.message = "optimality: cost " + rep.recomputed->decimal + " but the optimum is " + *rep.oracle_cost;
                return rep;
            }
        } else if (rec.mode == "chamfer") {
            if (have > opt.cost + opt.cost) {
                rep.ok = false;
                rep.message = "chamfer: cost exceeds twice the optimum " + *rep.oracle_cost;
                return rep;
            }
        } else if (rec.mode == "approx" && rec.extra.count("theta_exp")) {
            const long t = std::stol(rec.extra.at("theta_exp"));
            if (!scaling::within_additive_bound(have, opt.cost, inst.n(), t)) {
                rep.ok = false;
                rep.message = "approx: cost exceeds the optimum " + *rep.oracle_cost + " plus 3n 2^-t";
                return rep;
            }
        }
    }
    rep.message = "ok";
    return rep;
}

}  // namespace manymatch
