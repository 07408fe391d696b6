#include "manymatch/io.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace manymatch {

Instance generate_instance(std::size_t n, std::int64_t delta, std::uint64_t seed) {
    if (n < 2) throw InputError("gen: n must be at least 2");
    if (delta < 2) throw InputError("gen: delta must be at least 2");
    if (static_cast<double>(n) > static_cast<double>(delta) * static_cast<double>(delta)) {
        throw InputError("gen: n exceeds delta^2 grid cells");
    }
    std::mt19937_64 rng(seed);
    const auto side = static_cast<std::uint64_t>(delta);
    std::vector<GridPoint> pts;
    pts.reserve(n);
    if (2 * n > side * side) {
        std::vector<std::uint64_t> cells(side * side);
        for (std::uint64_t i = 0; i < cells.size(); ++i) cells[i] = i;
        for (std::size_t i = 0; i < n; ++i) {
            std::swap(cells[i], cells[i + rng() % (cells.size() - i)]);
            pts.push_back({static_cast<std::int64_t>(cells[i] / side) + 1, static_cast<std::int64_t>(cells[i] % side) + 1});
        }
    } else {
        std::set<GridPoint> seen;
        while (pts.size() < n) {
            GridPoint p{static_cast<std::int64_t>(rng() % side) + 1, static_cast<std::int64_t>(rng() % side) + 1};
            if (seen.insert(p).second) pts.push_back(p);
        }
    }
    std::vector<char> red(n);
    for (auto& c : red) c = static_cast<char>(rng() & 1);
    if (std::all_of(red.begin(), red.end(), [](char c) { return c; })) red[n - 1] = 0;
    if (std::none_of(red.begin(), red.end(), [](char c) { return c; })) red[n - 1] = 1;
    Instance inst;
    inst.delta = delta;
    for (std::size_t i = 0; i < n; ++i) (red[i] ? inst.red : inst.blue).push_back(pts[i]);
    return inst;
}

nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json j;
    j["delta"] = inst.delta;
    auto list = [](const std::vector<GridPoint>& pts) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& p : pts) a.push_back({p.x, p.y});
        return a;
    };
    j["red"] = list(inst.red);
    j["blue"] = list(inst.blue);
    return j;
}

Instance instance_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("instance: top level must be an object");
    for (const char* key : {"delta", "red", "blue"}) {
        if (!j.contains(key)) throw InputError(std::string("instance: missing field \"") + key + "\"");
    }
    if (!j["delta"].is_number_integer()) throw InputError("instance: \"delta\" must be an integer");
    Instance inst;
    inst.delta = j["delta"].get<std::int64_t>();
    auto read = [](const nlohmann::json& a, const char* name) {
        if (!a.is_array()) throw InputError(std::string("instance: \"") + name + "\" must be an array");
        std::vector<GridPoint> out;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto& p = a[i];
            if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
                throw InputError(std::string("instance: ") + name + "[" + std::to_string(i) +
                                 "] must be a pair of integers");
            }
            out.push_back({p[0].get<std::int64_t>(), p[1].get<std::int64_t>()});
        }
        return out;
    };
    inst.red = read(j["red"], "red");
    inst.blue = read(j["blue"], "blue");
    validate(inst);
    return inst;
}

nlohmann::json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Translate the byte offset into line and column.
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << source << ":" << line << ":" << col << ": JSON parse error";
        throw InputError(os.str());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

nlohmann::json result_to_json(const ResultRecord& r) {
    nlohmann::json j;
    j["mode"] = r.mode;
    j["cost"] = r.cost;
    j["cost_exact"] = r.cost_exact;
    j["squared_lengths"] = r.squared;
    nlohmann::json edges = nlohmann::json::array();
    for (auto [a, b] : r.edges) edges.push_back({a, b});
    j["edges"] = edges;
    if (!r.timings_ms.empty()) j["timings_ms"] = r.timings_ms;
    j["checks"] = r.checks;
    for (const auto& [k, v] : r.extra) j[k] = v;
    return j;
}

ResultRecord result_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("result: top level must be an object");
    for (const char* key : {"cost", "edges"}) {
        if (!j.contains(key)) throw InputError(std::string("result: missing field \"") + key + "\"");
    }
    ResultRecord r;
    try {
        r.mode = j.value("mode", "");
        r.cost = j["cost"].get<std::string>();
        r.cost_exact = j.value("cost_exact", "");
        if (j.contains("squared_lengths")) r.squared = j["squared_lengths"].get<std::vector<std::int64_t>>();
        for (const auto& e : j["edges"]) r.edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
        for (const auto& [k, v] : j.items()) {
            if (v.is_string() && k != "mode" && k != "cost" && k != "cost_exact") r.extra[k] = v.get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("result: ") + e.what());
    }
    return r;
}

}  // namespace manymatch
