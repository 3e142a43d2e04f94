#ifndef MBMOM_MULTIBRANCH_HPP
#define MBMOM_MULTIBRANCH_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "basis.hpp"
#include "error.hpp"
#include "model.hpp"
#include "recursion.hpp"
#include "solver.hpp"

namespace mbmom {

/// Recursion tree for branching factor B. A node drops one copy of each of
/// its min(B, M') highest-indexed retained queues; nodes are shared by base
/// multiplicity, so with all m_k = 1 and B = M there is one node per
/// non-empty queue subset. A non-root node with a single retained queue is a
/// leaf evaluated in closed form.
inline RecursionTree build_tree(const ValidatedModel& model, std::size_t B) {
    const std::size_t M = model.M();
    const long R = static_cast<long>(model.R());
    if (B < 1 || B > M) throw std::invalid_argument("branching factor must satisfy 1 <= B <= M");

    RecursionTree tree;
    tree.branching = B;
    std::map<IntVector, std::size_t> index;
    auto add = [&](const IntVector& base, int depth) {
        auto [it, inserted] = index.emplace(base, tree.nodes.size());
        if (!inserted) return it->second;
        RecursionNode node;
        node.base = base;
        node.depth = depth;
        for (std::size_t k = 0; k < M; ++k) {
            if (base[k] > 0) node.retained.push_back(k);
        }
        const long kept = static_cast<long>(node.retained.size());
        node.leaf = depth > 0 && kept == 1;
        node.level = static_cast<int>(std::max<long>(1, R - std::min<long>(static_cast<long>(B), kept)));
        tree.nodes.push_back(std::move(node));
        return it->second;
    };
    add(model.multiplicities(), 0);

    // Nodes are appended breadth first, so each one is expanded exactly once.
    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
        if (tree.nodes[id].leaf || tree.nodes[id].retained.size() < 2) continue;
        const auto retained = tree.nodes[id].retained;
        const std::size_t width = std::min(B, retained.size());
        const IntVector base = tree.nodes[id].base;
        const int depth = tree.nodes[id].depth;
        for (std::size_t i = retained.size() - width; i < retained.size(); ++i) {
            const std::size_t k = retained[i];
            const std::size_t child = add(base - unit(M, k), depth + 1);
            tree.nodes[id].gce_queues.push_back(k);
            tree.nodes[id].children.push_back(child);
        }
    }

    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
        if (!tree.nodes[id].leaf) tree.order.push_back(id);
    }
    std::stable_sort(tree.order.begin(), tree.order.end(), [&](std::size_t a, std::size_t b) {
        return total(tree.nodes[a].base) < total(tree.nodes[b].base);
    });
    return tree;
}

/// The reduced system A_l V_l(N) = V^-(N) + B_l V_l(N - 1_R) of one tree node.
inline StepSystem build_mb_system(const ValidatedModel& model, const RecursionTree& tree, std::size_t node,
                                  const IntVector& anchor_pop) {
    if (anchor_pop.size() != model.R()) throw DimensionMismatch("anchor population has wrong length");
    TreeSolver solver(with_population(model, anchor_pop), tree);
    return solver.system(node, anchor_pop);
}

inline Solution mbmom_solve(const ValidatedModel& model, std::size_t B) {
    TreeSolver solver(model, build_tree(model, B));
    return solver.solve();
}

}  // namespace mbmom

#endif  // MBMOM_MULTIBRANCH_HPP
