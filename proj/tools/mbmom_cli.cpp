// Command-line front end: solve, compare, cost, prob.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mbmom.hpp"

using namespace mbmom;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json exact_json(const ExactScalar& x) { return {{"exact", to_string(x)}, {"decimal", to_decimal(x, 12)}}; }

json matrix_json(const std::vector<std::vector<ExactScalar>>& m) {
    json out = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& x : row) r.push_back(exact_json(x));
        out.push_back(std::move(r));
    }
    return out;
}

json vector_json(const std::vector<ExactScalar>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(exact_json(x));
    return out;
}

std::size_t parse_branching(const std::string& text, std::size_t M) {
    if (text == "max") return M;
    std::size_t used = 0;
    long b = 0;
    try {
        b = std::stol(text, &used);
    } catch (const std::exception&) {
        throw UsageError("--branching expects 1, max or an integer in 1.." + std::to_string(M));
    }
    if (used != text.size() || b < 1 || static_cast<std::size_t>(b) > M) {
        throw UsageError("--branching expects 1, max or an integer in 1.." + std::to_string(M));
    }
    return static_cast<std::size_t>(b);
}

/// "2..11", "3" or "2,4,8".
std::vector<long> parse_range(const std::string& text, const char* flag) {
    std::vector<long> out;
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || v < 1) throw UsageError(std::string(flag) + ": bad value '" + s + "'");
        return v;
    };
    if (auto dots = text.find(".."); dots != std::string::npos) {
        long lo = number(text.substr(0, dots));
        long hi = number(text.substr(dots + 2));
        if (hi < lo) throw UsageError(std::string(flag) + ": empty range");
        for (long v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(number(part));
    if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
    return out;
}

StateVector parse_state(const std::string& text, const ValidatedModel& model) {
    StateVector s;
    std::stringstream rows(text);
    std::string row;
    while (std::getline(rows, row, ';')) {
        IntVector counts;
        std::stringstream cells(row);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != cell.size()) throw UsageError("--state: bad count '" + cell + "'");
            counts.push_back(v);
        }
        s.n.push_back(std::move(counts));
    }
    // The delay row may be left out; it then holds the remaining jobs.
    if (s.n.size() == model.M()) {
        IntVector rest = model.population();
        for (const auto& r : s.n) {
            if (r.size() != model.R()) throw InfeasibleState("state row length must equal class count");
            rest = rest - r;
        }
        s.n.push_back(rest);
    }
    return s;
}

struct Run {
    std::string algorithm;
    std::optional<std::size_t> branching;
    std::optional<ExactScalar> G;
    MeanIndices indices;
    std::optional<SolveStats> stats;
};

Run run_algorithm(const ValidatedModel& model, const std::string& algorithm, std::size_t branching) {
    Run out{algorithm, std::nullopt, std::nullopt, {}, std::nullopt};
    if (algorithm == "mbmom" || algorithm == "mom") {
        Solution s = algorithm == "mom" ? mom_solve(model) : mbmom_solve(model, branching);
        if (algorithm == "mbmom") out.branching = branching;
        out.G = s.normalizing_constant();
        out.indices = indices_from_constants(model, [&](const GIndex& g) { return s.g(g); });
        out.stats = std::move(s.stats);
    } else if (algorithm == "conv" || algorithm == "brute") {
        std::function<ExactScalar(const GIndex&)> g;
        if (algorithm == "conv") {
            g = [&](const GIndex& i) { return g_convolution(model, i); };
        } else {
            g = [&](const GIndex& i) { return g_bruteforce(model, i); };
        }
        out.G = g({model.multiplicities(), model.population()});
        out.indices = indices_from_constants(model, g);
    } else if (algorithm == "mva") {
        out.indices = mva(model);
    } else {
        throw UsageError("unknown algorithm '" + algorithm + "'");
    }
    return out;
}

void print_report(const ModelFile& file, const Run& run, bool as_json) {
    const auto& I = run.indices;
    if (as_json) {
        json doc;
        doc["model"] = file.name;
        doc["algorithm"] = run.algorithm;
        doc["branching"] = run.branching ? json(*run.branching) : json(nullptr);
        doc["G"] = run.G ? exact_json(*run.G) : json(nullptr);
        if (run.stats) {
            doc["steps"] = run.stats->steps;
            doc["fallbacks"] = run.stats->fallbacks;
            doc["max_order"] = run.stats->max_order;
            doc["diagnostics"] = run.stats->diagnostics;
        } else {
            doc["steps"] = nullptr;
        }
        doc["classes"] = file.class_names;
        doc["queues"] = file.queue_names;
        doc["X"] = vector_json(I.X);
        doc["R"] = vector_json(I.Rr);
        doc["Q"] = matrix_json(I.Q);
        doc["U"] = matrix_json(I.U);
        doc["Rkr"] = matrix_json(I.Rkr);
        std::cout << doc.dump(2) << '\n';
        return;
    }
    std::cout << "model      " << file.name << '\n';
    std::cout << "algorithm  " << run.algorithm;
    if (run.branching) std::cout << " (B = " << *run.branching << ")";
    std::cout << '\n';
    if (run.G) std::cout << "G(m, N)    " << to_string(*run.G) << "  ~ " << to_decimal(*run.G, 6) << '\n';
    if (run.stats) {
        std::cout << "steps      " << run.stats->steps << " (largest system " << run.stats->max_order << ", "
                  << run.stats->fallbacks << " recomputed by convolution)\n";
        for (const auto& d : run.stats->diagnostics) std::cout << "  note: " << d << '\n';
    }
    std::cout << "\nclass            throughput      response\n";
    for (std::size_t r = 0; r < I.X.size(); ++r) {
        std::cout << std::left << std::setw(16) << file.class_names[r] << ' ' << std::setw(15)
                  << to_decimal(I.X[r], 6) << ' ' << to_decimal(I.Rr[r], 6) << "   [X = " << to_string(I.X[r])
                  << "]\n";
    }
    std::cout << "\nqueue            class            length          util            residence\n";
    for (std::size_t k = 0; k < I.Q.size(); ++k) {
        for (std::size_t r = 0; r < I.X.size(); ++r) {
            std::cout << std::left << std::setw(16) << file.queue_names[k] << ' ' << std::setw(16)
                      << file.class_names[r] << ' ' << std::setw(15) << to_decimal(I.Q[k][r], 6) << ' '
                      << std::setw(15) << to_decimal(I.U[k][r], 6) << ' ' << to_decimal(I.Rkr[k][r], 6) << '\n';
        }
    }
}

int cmd_solve(const std::string& path, const std::string& algorithm, const std::string& branching, bool as_json) {
    ModelFile file = load_model_file(path);
    ValidatedModel model = file.model();
    const std::size_t B = parse_branching(branching, model.M());
    print_report(file, run_algorithm(model, algorithm, B), as_json);
    return 0;
}

/// Runs every feasible algorithm and checks each basis constant and index
/// against convolution.
int cmd_compare(const std::string& path) {
    ModelFile file = load_model_file(path);
    ValidatedModel model = file.model();
    const std::size_t M = model.M();
    bool all_equal = true;

    std::vector<std::pair<std::string, Solution>> solved;
    solved.emplace_back("mom", mom_solve(model));
    solved.emplace_back("mbmom B=1", mbmom_solve(model, 1));
    if (M > 1) solved.emplace_back("mbmom B=" + std::to_string(M), mbmom_solve(model, M));

    const bool brute_ok = state_count(model.total_queues(), model.population()) <= 200'000;
    std::cout << "model " << file.name << ": comparing against convolution\n";
    for (const auto& [name, s] : solved) {
        const auto& lay = *s.current.layout;
        std::size_t agree = 0;
        std::size_t brute_checked = 0;
        for (std::size_t i = 0; i < lay.size(); ++i) {
            const auto e = lay.entry(i);
            const GIndex g{node_mult(s.root, e.delta), lay.population(model.population(), e.variant)};
            const ExactScalar want = g_convolution(model, g);
            bool ok = s.current.values[i] == want;
            if (ok && brute_ok && !any_negative(g.pop) &&
                state_count(total(g.mult), g.pop) <= 200'000) {
                ok = g_bruteforce(model, g) == want;
                ++brute_checked;
            }
            if (ok) {
                ++agree;
            } else {
                all_equal = false;
                std::cout << "  MISMATCH " << name << " at " << g << ": " << to_string(s.current.values[i])
                          << " vs " << to_string(want) << '\n';
            }
        }
        std::cout << "  " << std::left << std::setw(12) << name << agree << "/" << lay.size()
                  << " basis constants equal (" << brute_checked << " also by enumeration), "
                  << s.stats.fallbacks << " fallback steps\n";
    }

    const MeanIndices reference =
        indices_from_constants(model, [&](const GIndex& g) { return g_convolution(model, g); });
    std::vector<std::pair<std::string, MeanIndices>> indices;
    for (const auto& [name, s] : solved) {
        indices.emplace_back(name, indices_from_constants(model, [&](const GIndex& g) { return s.g(g); }));
    }
    indices.emplace_back("mva", mva(model));
    for (const auto& [name, I] : indices) {
        const bool ok = I == reference;
        all_equal = all_equal && ok;
        std::cout << "  " << std::left << std::setw(12) << name << (ok ? "indices equal" : "indices DIFFER") << '\n';
    }
    std::cout << (all_equal ? "all algorithms agree exactly\n" : "DISAGREEMENT\n");
    return all_equal ? 0 : kExitSolver;
}

int cmd_cost(const std::string& Ms, const std::string& Rs, long N, const std::string& algorithms,
             const std::string& output) {
    if (N < 1) throw UsageError("--N must be >= 1");
    std::vector<CostAlgorithm> algs;
    std::stringstream ss(algorithms);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            algs.push_back(parse_cost_algorithm(part));
        } catch (const ParseError& e) {
            throw UsageError(e.what());
        }
    }
    if (algs.empty()) throw UsageError("--algorithms is empty");
    auto rows = emit_surface(parse_range(Ms, "--M"), parse_range(Rs, "--R"), N, algs);
    if (output.empty()) {
        write_cost_csv(std::cout, rows);
        return 0;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + output + "'");
    write_cost_csv(out, rows);
    return 0;
}

int cmd_prob(const std::string& path, const std::string& state_text, bool as_json) {
    ModelFile file = load_model_file(path);
    ValidatedModel model = file.model();
    StateVector state = parse_state(state_text, model);
    const ExactScalar G = mbmom_solve(model, model.M()).normalizing_constant();
    const ExactScalar p = state_probability(model, state, G);
    if (as_json) {
        json doc{{"model", file.name}, {"G", exact_json(G)}, {"probability", exact_json(p)}};
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << "P(state) = " << to_string(p) << "  ~ " << to_decimal(p, 12) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact normalizing constants and mean indices of closed product-form networks"};
    app.require_subcommand(1);

    std::string file;
    std::string algorithm = "mbmom";
    std::string branching = "max";
    bool as_json = false;
    auto* solve = app.add_subcommand("solve", "Solve a model file");
    solve->add_option("file", file, "model JSON file")->required();
    solve->add_option("--algorithm", algorithm, "mbmom, mom, conv, mva or brute")
        ->check(CLI::IsMember({"mbmom", "mom", "conv", "mva", "brute"}));
    solve->add_option("--branching", branching, "1, max or an integer 1..M (mbmom only)");
    solve->add_flag("--json", as_json, "machine-readable report");

    auto* compare = app.add_subcommand("compare", "Run every algorithm and check exact agreement");
    compare->add_option("file", file, "model JSON file")->required();

    std::string Ms = "2..11";
    std::string Rs = "2..11";
    long N = 100;
    std::string algorithms = "MoM,MB-B1,MB-BM";
    std::string output;
    auto* cost = app.add_subcommand("cost", "Emit the cost-model surface as CSV");
    cost->add_option("--M", Ms, "queue counts, e.g. 2..11 or 2,4,8");
    cost->add_option("--R", Rs, "class counts");
    cost->add_option("--N", N, "total population");
    cost->add_option("--algorithms", algorithms, "comma-separated subset of MoM,MB-B1,MB-BM");
    cost->add_option("--output", output, "CSV file (default stdout)");

    std::string state;
    auto* prob = app.add_subcommand("prob", "Probability of one network state");
    prob->add_option("file", file, "model JSON file")->required();
    prob->add_option("--state", state, "per-queue class counts, e.g. \"1,0;0,1\"; delay row optional")->required();
    prob->add_flag("--json", as_json, "machine-readable report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*solve) return cmd_solve(file, algorithm, branching, as_json);
        if (*compare) return cmd_compare(file);
        if (*cost) return cmd_cost(Ms, Rs, N, algorithms, output);
        if (*prob) return cmd_prob(file, state, as_json);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitUsage;
}
