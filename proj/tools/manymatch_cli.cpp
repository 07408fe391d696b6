#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "manymatch/io.hpp"
#include "manymatch/render.hpp"
#include "manymatch/solver.hpp"

using namespace manymatch;

namespace {

// Exit codes.
constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kBadInput = 2;

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") std::cout << text;
    else write_file(out, text);
}

Instance load_instance(const std::string& path) {
    return instance_from_json(parse_json_text(read_file(path), path));
}

ResultRecord load_result(const std::string& path) {
    return result_from_json(parse_json_text(read_file(path), path));
}

struct BenchRow {
    std::size_t n = 0;
    std::int64_t delta = 0;
    std::string mode;
    std::size_t seeds = 0;
    double median_ms = 0;
    std::string cost;  // first seed
    std::map<std::string, double> stages;
    std::size_t candidates = 0;
    std::size_t separator_calls = 0;
    std::string error;
};

double median(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

BenchRow bench_cell(std::size_t n, std::int64_t delta, Mode mode, std::size_t seeds, std::uint64_t seed0) {
    BenchRow row;
    row.n = n;
    row.delta = delta;
    row.mode = mode_name(mode);
    row.seeds = seeds;
    std::vector<double> total;
    std::map<std::string, std::vector<double>> stages;
    try {
        for (std::size_t s = 0; s < seeds; ++s) {
            const Instance inst = generate_instance(n, delta, seed0 + s);
            RunConfig cfg;
            cfg.mode = mode;
            cfg.timings = true;
            cfg.precision = 20;
            const auto t0 = std::chrono::steady_clock::now();
            const auto out = solve(inst, cfg);
            total.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
            for (const auto& [k, v] : out.record.timings_ms) stages[k].push_back(v);
            if (s == 0) {
                row.cost = out.record.cost;
                row.candidates = out.candidates;
                row.separator_calls = out.dnc.separator_calls;
            }
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    row.median_ms = median(total);
    for (auto& [k, v] : stages) row.stages[k] = median(v);
    return row;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "n,delta,mode,seeds,median_ms,cost,candidates,separator_calls,stages_ms,error\n";
    for (const auto& r : rows) {
        os << r.n << ',' << r.delta << ',' << r.mode << ',' << r.seeds << ',' << std::fixed << std::setprecision(1)
           << r.median_ms << ',' << r.cost << ',' << r.candidates << ',' << r.separator_calls << ',';
        bool first = true;
        for (const auto& [k, v] : r.stages) {
            os << (first ? "" : ";") << k << '=' << v;
            first = false;
        }
        os << ',' << r.error << '\n';
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact minimum-cost many-to-many matching of red and blue grid points"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    std::size_t gen_n = 10;
    std::int64_t gen_delta = 16;
    std::uint64_t seed = 0;
    std::string out;
    gen->add_option("-n,--n", gen_n, "Number of points")->required();
    gen->add_option("-d,--delta", gen_delta, "Grid side")->required();
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("-o,--out", out, "Output file (default stdout)");

    auto* solve_cmd = app.add_subcommand("solve", "Solve an instance");
    std::string instance_path, mode = "exact", trace_path;
    int precision = 30;
    std::optional<long> theta_exp;
    std::optional<double> epsilon;
    bool timings = false;
    solve_cmd->add_option("instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--mode", mode, "exact | approx | oracle | chamfer")
        ->check(CLI::IsMember({"exact", "approx", "oracle", "chamfer"}));
    solve_cmd->add_option("--seed", seed, "Recorded in the result; the solver is deterministic");
    solve_cmd->add_option("--precision", precision, "Significant digits of the decimal cost")
        ->check(CLI::Range(1, 1000));
    solve_cmd->add_option("--theta-exp", theta_exp, "Final exponent t, theta = 2^-t");
    solve_cmd->add_option("--epsilon", epsilon, "Approx mode: additive error target")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_flag("--timings", timings, "Record wall time per stage");
    solve_cmd->add_option("--trace", trace_path, "Write the recursion and phase trace here");
    solve_cmd->add_option("-o,--out", out, "Result file (default stdout)");

    auto* verify_cmd = app.add_subcommand("verify", "Check a result against its instance");
    std::string result_path;
    verify_cmd->add_option("instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("result", result_path, "Result JSON")->required()->check(CLI::ExistingFile);

    auto* render_cmd = app.add_subcommand("render", "Draw an instance and its matching as SVG");
    bool with_decomposition = false, with_separator = false;
    int canvas = 800;
    render_cmd->add_option("instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    render_cmd->add_option("result", result_path, "Result JSON")->check(CLI::ExistingFile);
    render_cmd->add_flag("--decomposition", with_decomposition, "Overlay the eligible-edge decomposition");
    render_cmd->add_flag("--separator", with_separator, "Highlight the top-level separator points");
    render_cmd->add_option("--size", canvas, "Canvas size in pixels")->check(CLI::Range(100, 10000));
    render_cmd->add_option("-o,--out", out, "SVG file (default stdout)");

    auto* bench_cmd = app.add_subcommand("bench", "Time the solver over a grid of sizes");
    std::vector<std::size_t> bench_n{100, 1000};
    std::vector<std::int64_t> bench_delta{1024};
    std::vector<std::string> bench_modes{"exact"};
    std::size_t bench_seeds = 1;
    unsigned jobs = 1;
    bench_cmd->add_option("--n", bench_n, "Sizes");
    bench_cmd->add_option("--delta", bench_delta, "Grid sides");
    bench_cmd->add_option("--modes", bench_modes, "Modes")
        ->check(CLI::IsMember({"exact", "approx", "oracle", "chamfer"}));
    bench_cmd->add_option("--seeds", bench_seeds, "Seeds per cell")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", seed, "First seed");
    bench_cmd->add_option("--jobs", jobs, "Cells run in parallel")->check(CLI::Range(1u, 256u));
    bench_cmd->add_option("-o,--out", out, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kBadInput;
    }

    try {
        if (*gen) {
            emit(instance_to_json(generate_instance(gen_n, gen_delta, seed)).dump() + "\n", out);
            return kPass;
        }
        if (*solve_cmd) {
            const Instance inst = load_instance(instance_path);
            RunConfig cfg;
            cfg.mode = parse_mode(mode);
            cfg.seed = seed;
            cfg.precision = precision;
            cfg.theta_exp = theta_exp;
            cfg.epsilon = epsilon;
            cfg.timings = timings;
            std::ofstream trace;
            if (!trace_path.empty()) {
                trace.open(trace_path);
                if (!trace) throw InputError("cannot write " + trace_path);
                cfg.trace = &trace;
            }
            auto res = solve(inst, cfg);
            res.record.extra["seed"] = std::to_string(seed);
            emit(result_to_json(res.record).dump(2) + "\n", out);
            return kPass;
        }
        if (*verify_cmd) {
            const Instance inst = load_instance(instance_path);
            const ResultRecord rec = load_result(result_path);
            int digits = 30;
            if (auto it = rec.extra.find("precision"); it != rec.extra.end()) digits = std::stoi(it->second);
            const auto rep = verify(inst, rec, digits);
            std::cout << (rep.ok ? "PASS " : "FAIL ") << rep.message << '\n';
            if (rep.oracle_cost) std::cout << "oracle " << *rep.oracle_cost << '\n';
            return rep.ok ? kPass : kFail;
        }
        if (*render_cmd) {
            const Instance inst = load_instance(instance_path);
            std::optional<ResultRecord> rec;
            EdgeCover cover;
            std::optional<Overlay> overlay;
            RenderOptions opt;
            opt.size = canvas;
            if (!result_path.empty()) {
                rec = load_result(result_path);
                cover.edges = rec->edges;
                if (auto defect = cover_defect(inst, cover)) throw InputError("result: " + *defect);
                opt.cover = &cover;
            }
            if (with_decomposition || with_separator) {
                overlay = compute_overlay(inst);
                if (!with_decomposition) overlay->segments.clear();
                if (!with_separator) overlay->separator.clear();
                opt.overlay = &*overlay;
            }
            emit(render_svg(inst, opt), out);
            return kPass;
        }
        if (*bench_cmd) {
            struct Cell {
                std::size_t n;
                std::int64_t delta;
                Mode mode;
            };
            std::vector<Cell> cells;
            for (const auto& m : bench_modes) {
                for (std::int64_t d : bench_delta) {
                    for (std::size_t n : bench_n) cells.push_back({n, d, parse_mode(m)});
                }
            }
            std::vector<BenchRow> rows(cells.size());
            std::atomic<std::size_t> next{0};
            std::mutex log;
            auto worker = [&] {
                for (std::size_t i = next++; i < cells.size(); i = next++) {
                    rows[i] = bench_cell(cells[i].n, cells[i].delta, cells[i].mode, bench_seeds, seed);
                    std::lock_guard<std::mutex> lock(log);
                    std::cerr << "bench n=" << rows[i].n << " delta=" << rows[i].delta << " mode=" << rows[i].mode
                              << " median_ms=" << rows[i].median_ms << '\n';
                }
            };
            std::vector<std::thread> pool;
            for (unsigned j = 0; j < std::min<std::size_t>(jobs, cells.size()); ++j) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
            emit(bench_csv(rows), out);
            return kPass;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const InvariantError& e) {
        std::cerr << "internal check failed: " << e.what() << '\n';
        return kFail;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return kPass;
}
