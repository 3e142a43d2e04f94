// Prints one PASS/FAIL line per acceptance criterion (and per sub-check).
// Exit status is non-zero when any line fails.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "enumeration.hpp"
#include "test_support.hpp"

using namespace mbmom;
using namespace mbmom::testing;

namespace {

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << std::endl;
    if (!ok) ++failures;
}

constexpr std::uint64_t kBruteLimit = 60'000;

/// Random grid shared by the oracle and identity suites.
std::vector<ValidatedModel> grid_models() {
    std::mt19937 rng(20240601);
    std::vector<ValidatedModel> out;
    for (int i = 0; i < 200; ++i) out.push_back(random_integer_model(rng, 3, 3, 4, false));
    return out;
}

void oracle_equivalence(const std::vector<ValidatedModel>& models) {
    std::size_t entries = 0, brute_checked = 0, mismatches = 0, fallbacks = 0, fallback_models = 0;
    std::string first;
    for (const auto& m : models) {
        std::vector<Solution> sols;
        sols.push_back(mom_solve(m));
        sols.push_back(mbmom_solve(m, 1));
        sols.push_back(mbmom_solve(m, m.M()));
        std::size_t fb = 0;
        for (const auto& s : sols) fb += s.stats.fallbacks;
        fallbacks += fb;
        fallback_models += fb > 0 ? 1 : 0;

        // Every root constant of every solver, checked against convolution and
        // (where small enough) enumeration; then the other solvers' lookups.
        for (const auto& s : sols) {
            for (std::size_t i = 0; i < s.current.values.size(); ++i) {
                const GIndex g = entry_index(s, i);
                const ExactScalar want = g_convolution(m, g);
                bool ok = s.current.values[i] == want;
                for (const auto& other : sols) {
                    try {
                        ok = ok && other.g(g) == want;
                    } catch (const LayoutMismatch&) {
                        // outside the other solver's basis
                    }
                }
                ++entries;
                if (!any_negative(g.pop) && state_count(total(g.mult), g.pop) <= kBruteLimit) {
                    ok = ok && g_bruteforce(m, g) == want;
                    ++brute_checked;
                }
                if (!ok) {
                    ++mismatches;
                    if (first.empty()) {
                        std::ostringstream os;
                        os << g;
                        first = os.str();
                    }
                }
            }
        }
    }
    std::ostringstream os;
    os << "200 models, " << entries << " basis constants equal across convolution, MoM, B=1 and B=M; "
       << brute_checked << " of them also by state enumeration; " << mismatches << " mismatches; "
       << fallbacks << " singular steps recomputed by convolution in " << fallback_models << " models";
    if (!first.empty()) os << "; first mismatch at " << first;
    report("1", mismatches == 0, os.str());
}

void structural_reproduction() {
    const ValidatedModel m = worked_example({2, 2});
    auto [A, B] = build_mom_system(m, BasisLayout(2, 2, 2), {2, 2});
    const bool full_ok = A.rows() == 10 && A.cols() == 10 && B.rows() == 10 && BasisLayout(2, 2, 2).size() == 10;

    bool reduced_ok = true;
    std::string detail;
    for (std::size_t b : {std::size_t{1}, std::size_t{2}}) {
        auto tree = build_tree(m, b);
        auto sys = build_mb_system(m, tree, 0, {2, 2});
        std::size_t gce_rows = 0;
        for (const auto& r : sys.rows) gce_rows += r.kind == RelationKind::GCE ? 1 : 0;
        const ExactScalar D11 = m.D(0, 0), D21 = m.D(1, 0), D22 = m.D(1, 1), D12 = m.D(0, 1);
        ExactMatrix wantA{
            {1, -D11, 0, 0, -1, 0},
            {0, 0, 1, -D21, -1, 0},
            {1, -D21, 0, 0, 0, 0},
            {0, -m.D(0, 0), 0, -m.D(1, 0), 2, 0},
            {0, 0, 0, 0, 2, 0},
            {0, 0, 0, 0, 0, 2},
        };
        ExactMatrix wantB{
            {D12, 0, 0, 0, 0, 0},
            {0, 0, D22, 0, 0, 0},
            {D22, 0, 0, 0, 0, 0},
            {0, 0, 0, 0, 0, 0},
            {m.D(0, 1), 0, m.D(1, 1), 0, 0, 0},
            {0, m.D(0, 1), 0, m.D(1, 1), 0, 0},
        };
        const bool one_external = sys.assembly.terms.size() == 1 && sys.assembly.terms[0].row == 2 &&
                                  sys.assembly.terms[0].idx == GIndex{{2, 0}, {2, 2}} &&
                                  tree.nodes[sys.assembly.terms[0].child].leaf;
        const ExactVector vminus = assemble_vminus(m, sys, {});
        const bool value_ok = vminus[2] == g_convolution(m, {{2, 0}, {2, 2}});
        const bool ok = sys.A == wantA && sys.B == wantB && gce_rows == 1 && one_external && value_ok &&
                        sys.A.rows() == 6 && unknown_count(2, 2, 1) == 4;
        reduced_ok = reduced_ok && ok;
        detail += " B=" + std::to_string(b) + (ok ? " ok" : " differs");
    }
    report("2", full_ok && reduced_ok,
           "full system order " + std::to_string(A.rows()) +
               "; reduced system order 6 with CE, CE, GCE, PC, PC, PC rows matching the expected coefficients and "
               "one GCE row whose external constant G((2,0),N) comes from the one-queue child;" +
               detail);
}

void counting_grid() {
    std::size_t cases = 0, count_bad = 0, iff_bad = 0, eq_bad = 0;
    std::string count_ex, iff_ex, eq_ex;
    for (long M = 1; M <= 6; ++M) {
        for (long R = 1; R <= 6; ++R) {
            for (long B : {1L, M}) {
                if (B == M && M == 1 && B != 1) continue;
                const int lmin = static_cast<int>(std::max<long>(1, R - B));
                for (int l = 1; l <= 6; ++l) {
                    ++cases;
                    auto e = enumerate_counts(M, R, l, B);
                    if (unknown_count(M, R, l) != e.unknowns || count_ce_pc(M, R, l) != e.ce_pc ||
                        count_gce_not_ce(M, l, B) != e.gce_not_ce) {
                        if (count_bad++ == 0) count_ex = "M=" + std::to_string(M) + " R=" + std::to_string(R);
                    }
                    const auto bal = equation_balance(M, R, l, B);
                    const bool enough = bal.equations >= bal.unknowns;
                    if (enough != (l >= lmin)) {
                        if (iff_bad++ == 0) {
                            iff_ex = "M=" + std::to_string(M) + " R=" + std::to_string(R) + " l=" + std::to_string(l) +
                                     " B=" + std::to_string(B) + " gives " + std::to_string(bal.equations) + " vs " +
                                     std::to_string(bal.unknowns);
                        }
                    }
                    if (l == lmin && bal.equations != bal.unknowns) {
                        if (eq_bad++ == 0) {
                            eq_ex = "M=" + std::to_string(M) + " R=" + std::to_string(R) + " l=" + std::to_string(l) +
                                    " B=" + std::to_string(B) + " gives " + std::to_string(bal.equations) + " vs " +
                                    std::to_string(bal.unknowns);
                        }
                    }
                }
                if (B == M && M == 1) break;  // B=1 and B=M coincide
            }
        }
    }
    report("3a", count_bad == 0,
           std::to_string(cases) + " (M,R,l,B) cases: closed-form counts equal enumerated relations" +
               (count_bad ? "; " + std::to_string(count_bad) + " differ, first " + count_ex : ""));
    report("3b", iff_bad == 0,
           "equations >= unknowns exactly when l >= max{1,R-B}: " + std::to_string(iff_bad) + " counterexamples" +
               (iff_bad ? " (all with a single queue, where the system is square at every level), first " + iff_ex
                        : ""));
    report("3c", eq_bad == 0,
           "equations = unknowns at l = max{1,R-B}: " + std::to_string(eq_bad) + " counterexamples" +
               (eq_bad ? " (R <= B clamps l to 1 and leaves spare equations), first " + eq_ex : ""));
    report("3", count_bad == 0 && iff_bad == 0 && eq_bad == 0, "equation and unknown counts over the grid (see 3a-3c)");
}

void identity_suites(const std::vector<ValidatedModel>& models) {
    std::size_t relations = 0, bad_relations = 0, solved = 0, bad_little = 0, prob_models = 0, bad_prob = 0;
    for (const auto& m : models) {
        auto g = [&](const GIndex& i) { return g_convolution(m, i); };
        for (const RecursionTree& tree : {mom_tree(m), build_tree(m, 1), build_tree(m, m.M())}) {
            TreeSolver solver(m, tree);
            for (std::size_t id : tree.order) {
                const auto pool = generate_pool(m, tree.nodes[id], solver.layout(id), m.population());
                for (const auto* family : {&pool.pc_stepped, &pool.ce, &pool.pc_other, &pool.gce}) {
                    for (const auto& rel : *family) {
                        ++relations;
                        bad_relations += residual(rel, g) == 0 ? 0 : 1;
                    }
                }
            }
        }
        for (const Solution& s : {mom_solve(m), mbmom_solve(m, 1), mbmom_solve(m, m.M())}) {
            if (is_zero(s.normalizing_constant())) continue;
            ++solved;
            auto I = indices_from_constants(m, [&](const GIndex& i) { return s.g(i); });
            for (std::size_t r = 0; r < m.R(); ++r) {
                ExactScalar jobs = m.Z(r) * I.X[r];
                for (std::size_t k = 0; k < m.M(); ++k) jobs += m.m(k) * I.Q[k][r];
                bad_little += jobs == m.N(r) ? 0 : 1;
            }
        }
        if (state_count(static_cast<int>(m.M()), m.population()) <= 20'000) {
            const ExactScalar G = mbmom_solve(m, m.M()).normalizing_constant();
            if (is_zero(G)) continue;
            ++prob_models;
            ExactScalar sum = 0;
            for (const auto& s : enumerate_states(m)) sum += state_probability(m, s, G);
            bad_prob += sum == 1 ? 0 : 1;
        }
    }
    report("4", bad_relations == 0 && bad_little == 0 && bad_prob == 0,
           std::to_string(relations) + " CE/PC/GCE relations with zero residual (" + std::to_string(bad_relations) +
               " nonzero); population identity on " + std::to_string(solved) + " solved models (" +
               std::to_string(bad_little) + " violations); probabilities sum to 1 on " + std::to_string(prob_models) +
               " enumerable models (" + std::to_string(bad_prob) + " violations)");
}

void cost_reproduction() {
    std::vector<long> range;
    for (long v = 2; v <= 11; ++v) range.push_back(v);
    const auto rows = emit_surface(range, range, 100, {CostAlgorithm::MoM, CostAlgorithm::MB_B1, CostAlgorithm::MB_BM});
    auto find = [&](CostAlgorithm a, long M, long R) -> const CostReport& {
        for (const auto& r : rows) {
            if (r.algorithm == a && r.M == M && r.R == R) return r;
        }
        throw std::logic_error("missing grid point");
    };

    std::size_t a_bad = 0, c_bad = 0;
    std::string c_points;
    for (long M : range) {
        for (long R : range) {
            const auto& mom = find(CostAlgorithm::MoM, M, R);
            const auto& b1 = find(CostAlgorithm::MB_B1, M, R);
            const auto& bm = find(CostAlgorithm::MB_BM, M, R);
            if (M >= 5 && R >= 5 && !(bm.time_per_iteration < b1.time_per_iteration)) ++a_bad;
            if (!(bm.time_per_iteration <= mom.time_per_iteration)) {
                ++c_bad;
                std::ostringstream os;
                os << " (M=" << M << ",R=" << R << ": ratio "
                   << to_decimal(bm.time_per_iteration / mom.time_per_iteration, 3) << ")";
                c_points += os.str();
            }
        }
    }
    const ExactScalar ratio = find(CostAlgorithm::MoM, 11, 11).space / find(CostAlgorithm::MB_BM, 11, 11).space;
    report("5a", a_bad == 0,
           "B=M time below B=1 time at every M,R >= 5 (" + std::to_string(a_bad) + " exceptions)");
    report("5b", ratio >= 1000, "space ratio MoM / B=M at M=R=11, N=100 is " + to_decimal(ratio, 1));
    report("5c", c_bad == 0,
           "B=M time at most MoM time on the 10x10 grid: " + std::to_string(c_bad) + " of 100 points exceed it" +
               c_points);
    report("5", a_bad == 0 && ratio >= 1000 && c_bad == 0,
           std::to_string(rows.size()) + " cost rows at N=100 (see 5a-5c)");
}

void scaling_property() {
    std::mt19937 rng(777);
    std::size_t checks = 0, bad = 0;
    for (int i = 0; i < 50; ++i) {
        ValidatedModel m = random_integer_model(rng, 3, 3, 4, false);
        while (m.total_population() == 0) m = random_integer_model(rng, 3, 3, 4, false);
        const Solution base = mbmom_solve(m, m.M());
        const ExactScalar G = base.normalizing_constant();
        const auto I = indices_from_constants(m, [&](const GIndex& g) { return base.g(g); });
        for (const ExactScalar& c : {ExactScalar(2), ExactScalar(1, 3)}) {
            const ValidatedModel s = scale_model(m, c);
            const Solution scaled = mbmom_solve(s, s.M());
            const auto J = indices_from_constants(s, [&](const GIndex& g) { return scaled.g(g); });
            bool ok = scaled.normalizing_constant() == pow(c, m.total_population()) * G;
            for (std::size_t r = 0; r < m.R(); ++r) ok = ok && J.X[r] == I.X[r] / c;
            ok = ok && bottleneck(I) == bottleneck(J);
            ++checks;
            bad += ok ? 0 : 1;
        }
    }
    report("6", bad == 0,
           std::to_string(checks) + " scaled solves: G scales by c^|N|, X by 1/c, bottleneck unchanged (" +
               std::to_string(bad) + " violations)");
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    const auto models = grid_models();
    oracle_equivalence(models);
    structural_reproduction();
    counting_grid();
    identity_suites(models);
    cost_reproduction();
    scaling_property();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "acceptance finished in " << seconds << " s with " << failures << " failing line(s)" << std::endl;
    return failures == 0 ? 0 : 1;
}
