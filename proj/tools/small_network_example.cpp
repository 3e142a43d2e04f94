// Solves a small two-class network with every algorithm in the library and
// prints the normalizing constant and throughputs.

#include <iostream>

#include "mbmom.hpp"

int main() {
    using namespace mbmom;
    NetworkModel raw;
    raw.demands = {{parse_exact("0.2"), parse_exact("1/3")}, {parse_exact("0.45"), parse_exact("0.1")}};
    raw.think_times = {1, 2};
    raw.multiplicities = {1, 2};
    raw.populations = {4, 3};
    const ValidatedModel model = validate_model(raw);

    const Solution full = mom_solve(model);
    const Solution single = mbmom_solve(model, 1);
    const Solution multi = mbmom_solve(model, model.M());
    const ExactScalar G = g_convolution(model, {model.multiplicities(), model.population()});

    std::cout << "G(m, N) = " << to_string(G) << '\n';
    std::cout << "  MoM             " << (full.normalizing_constant() == G ? "agrees" : "differs")
              << ", largest system " << full.stats.max_order << '\n';
    std::cout << "  one branch      " << (single.normalizing_constant() == G ? "agrees" : "differs")
              << ", largest system " << single.stats.max_order << '\n';
    std::cout << "  all branches    " << (multi.normalizing_constant() == G ? "agrees" : "differs")
              << ", largest system " << multi.stats.max_order << '\n';

    const MeanIndices I = indices_from_constants(model, [&](const GIndex& g) { return multi.g(g); });
    for (std::size_t r = 0; r < model.R(); ++r) {
        std::cout << "X_" << r + 1 << " = " << to_string(I.X[r]) << " ~ " << to_decimal(I.X[r], 6) << '\n';
    }
    std::cout << "bottleneck queue: " << bottleneck(I) + 1 << '\n';
    return 0;
}
