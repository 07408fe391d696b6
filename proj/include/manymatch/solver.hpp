#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "manymatch/io.hpp"
#include "manymatch/prism.hpp"
#include "manymatch/separator.hpp"

namespace manymatch {

enum class Mode { Exact, Approx, Oracle, Chamfer };

Mode parse_mode(const std::string& s);
std::string mode_name(Mode m);

struct RunConfig {
    Mode mode = Mode::Exact;
    std::uint64_t seed = 0;
    int precision = 30;                 // significant digits of the decimal cost
    std::optional<long> theta_exp;      // overrides the final exponent t (theta = 2^-t)
    std::optional<double> epsilon;      // approx mode: additive error target
    bool timings = false;               // record wall time per stage
    std::ostream* trace = nullptr;      // recursion and phase trace
};

struct SolveOutput {
    EdgeCover cover;
    CostReport cost;
    ResultRecord record;
    std::optional<PrismMatching> matching;
    long t = 0;
    std::size_t candidates = 0;
    std::size_t segments = 0;
    separator::DncStats dnc;
};

// Oracle mode is limited to this many points.
inline constexpr std::size_t kOracleMaxN = 60;

// Runs one mode end to end and fills the result record. Throws InputError
// for infeasible requests and InvariantError when a pipeline check fails.
SolveOutput solve(const Instance& inst, const RunConfig& cfg);

// Cover obtained from each point's nearest opposite neighbor.
EdgeCover chamfer_cover(const Instance& inst);

// Decomposition segments (point id pairs) and the top-level separator
// points, for drawing.
struct Overlay {
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    std::vector<std::size_t> separator;
};

Overlay compute_overlay(const Instance& inst);

struct VerifyReport {
    bool ok = true;
    std::string message;
    std::optional<CostReport> recomputed;
    std::optional<std::string> oracle_cost;
};

// Coverage, recomputed cost, and the oracle optimum when n <= kOracleMaxN
// (exact and oracle records only).
VerifyReport verify(const Instance& inst, const ResultRecord& rec, int precision = 30);

}  // namespace manymatch
