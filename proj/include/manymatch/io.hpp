#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "manymatch/core.hpp"
#include "manymatch/prism.hpp"

namespace manymatch {

// n distinct uniform points in [1, delta]^2, each colored at random, at
// least one of each color. Deterministic per seed.
Instance generate_instance(std::size_t n, std::int64_t delta, std::uint64_t seed);

nlohmann::json instance_to_json(const Instance& inst);
// Throws InputError with the offending field.
Instance instance_from_json(const nlohmann::json& j);
// Parses text; syntax errors report line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

struct ResultRecord {
    std::string mode;
    std::string cost;                    // decimal
    std::string cost_exact;              // symbolic sum of radicals
    std::vector<std::int64_t> squared;   // sorted squared lengths
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::map<std::string, double> timings_ms;
    std::map<std::string, std::string> checks;
    std::map<std::string, std::string> extra;
};

nlohmann::json result_to_json(const ResultRecord& r);
ResultRecord result_from_json(const nlohmann::json& j);

}  // namespace manymatch
