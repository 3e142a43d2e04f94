#ifndef MBMOM_MOM_HPP
#define MBMOM_MOM_HPP

#include <utility>

#include "basis.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "model.hpp"
#include "recursion.hpp"
#include "solver.hpp"

namespace mbmom {

/// The plain recursion: a single node over all queues at level R, no GCEs.
inline RecursionTree mom_tree(const ValidatedModel& model) {
    RecursionNode root;
    root.base = model.multiplicities();
    for (std::size_t k = 0; k < model.M(); ++k) root.retained.push_back(k);
    root.level = static_cast<int>(model.R());
    RecursionTree tree;
    tree.nodes.push_back(std::move(root));
    tree.order.push_back(0);
    return tree;
}

/// A(N) V(N) = B(N) V(N - 1_R) at the given anchor population. Rows are the
/// CEs of every queue, the PCs of classes 1..R-1, then the class-R PCs that
/// express the layer l-1 constants.
inline std::pair<ExactMatrix, ExactMatrix> build_mom_system(const ValidatedModel& model, const BasisLayout& layout,
                                                            const IntVector& anchor_pop) {
    if (layout.level() != static_cast<int>(model.R()) || layout.M() != model.M() || layout.R() != model.R()) {
        throw LayoutMismatch("the full recursion needs a level-R layout over all queues and classes");
    }
    if (anchor_pop.size() != model.R()) throw DimensionMismatch("anchor population has wrong length");
    TreeSolver solver(with_population(model, anchor_pop), mom_tree(model));
    auto system = solver.system(0, anchor_pop);
    return {std::move(system.A), std::move(system.B)};
}

inline Solution mom_solve(const ValidatedModel& model) {
    TreeSolver solver(model, mom_tree(model));
    return solver.solve();
}

}  // namespace mbmom

#endif  // MBMOM_MOM_HPP
