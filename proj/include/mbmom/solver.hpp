#ifndef MBMOM_SOLVER_HPP
#define MBMOM_SOLVER_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "basis.hpp"
#include "equations.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "model.hpp"
#include "oracles.hpp"
#include "recursion.hpp"

namespace mbmom {

/// Result of a recursive solve: the root basis at N and at N - 1_R.
struct Solution {
    RecursionNode root;
    BasisValues current;
    BasisValues previous;
    SolveStats stats;

    /// G(idx) for any constant held by the root basis or its predecessor.
    ExactScalar g(const GIndex& idx) const {
        auto where = resolve_term(root, *current.layout, current.anchor_pop, idx);
        switch (where.slot) {
            case Slot::Zero: return 0;
            case Slot::Current: return current.values[where.position];
            case Slot::Previous: return previous.values[where.position];
            case Slot::External: break;
        }
        std::ostringstream os;
        os << idx << " is not part of the solved basis";
        throw LayoutMismatch(os.str());
    }

    ExactScalar normalizing_constant() const { return g({root.base, current.anchor_pop}); }
};

inline std::string describe(const IntVector& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

/// Evaluates a recursion tree population step by population step. The last
/// class is stepped from 0 to N_R; at N_R = 0 the whole tree is re-seeded from
/// a run on the model without that class, down to a single class at zero
/// population where every constant is 1.
class TreeSolver {
public:
    TreeSolver(const ValidatedModel& model, RecursionTree tree) : tree_(std::move(tree)) {
        const std::size_t R = model.R();
        models_.reserve(R);
        for (std::size_t c = 1; c <= R; ++c) models_.push_back(c == R ? model : restrict_classes(model, c));
        layouts_.resize(R);
        for (std::size_t c = 1; c <= R; ++c) {
            for (std::size_t id = 0; id < tree_.nodes.size(); ++id) {
                const auto& node = tree_.nodes[id];
                if (node.leaf) {
                    layouts_[c - 1].push_back(nullptr);
                    continue;
                }
                std::optional<int> lowest;
                if (id == 0) lowest = 0;
                layouts_[c - 1].push_back(
                    std::make_shared<const BasisLayout>(node.retained.size(), c, node.level, lowest));
            }
        }
    }

    const RecursionTree& tree() const { return tree_; }
    const ValidatedModel& model() const { return models_.back(); }
    const BasisLayout& layout(std::size_t node) const { return *layouts_.back()[node]; }

    Solution solve() {
        stats_ = {};
        const std::size_t R = models_.size();
        auto vals = run(R, model().population());
        Solution out{tree_.nodes[0],
                     {layouts_.back()[0], model().population(), std::move(vals[0].cur)},
                     {layouts_.back()[0], model().population() - unit(R, R - 1), std::move(vals[0].prev)},
                     std::move(stats_)};
        return out;
    }

    /// The square system one node solves at population n, with external
    /// constants resolved to the child nodes that provide them.
    StepSystem system(std::size_t node_id, const IntVector& n) const {
        const std::size_t c = models_.size();
        const auto& node = tree_.nodes[node_id];
        if (node.leaf) throw NotLeaf("leaf nodes are evaluated in closed form and have no system");
        const auto& lay = *layouts_[c - 1][node_id];
        auto rows = compile_pool(models_.back(), node, lay, n);
        auto unknowns = unknown_positions(lay, n);
        auto pool = coefficient_rows(rows, unknowns);
        auto chosen = select_independent_rows(pool, unknowns.size());
        if (chosen.size() < unknowns.size()) {
            throw RankDeficientPool("pool has rank " + std::to_string(chosen.size()) + " < " +
                                    std::to_string(unknowns.size()) + " unknowns");
        }
        std::stable_sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
            const auto& ra = rows[a].relation;
            const auto& rb = rows[b].relation;
            return display_rank(ra.kind, ra.index, c - 1) < display_rank(rb.kind, rb.index, c - 1);
        });

        StepSystem out{{}, unknowns, ExactMatrix(chosen.size(), unknowns.size()),
                       ExactMatrix(chosen.size(), lay.core_size()), {}};
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            const auto& row = rows[chosen[i]];
            out.rows.push_back(row.relation);
            for (std::size_t j = 0; j < unknowns.size(); ++j) out.A(i, j) = pool[chosen[i]].coeffs[j];
            for (const auto& [pos, coeff] : row.b) {
                if (pos >= lay.core_size()) throw LayoutMismatch("previous-step term outside the core basis");
                out.B(i, pos) = coeff;
            }
            for (const auto& t : row.external) {
                ExternalTerm ext{i, t.coeff, t.idx, kNoNode, std::nullopt};
                if (!terminal_value(models_.back(), t.idx)) {
                    ext.child = child_of(node, t.idx);
                    const auto& child = tree_.nodes[ext.child];
                    if (!child.leaf) {
                        auto where = resolve_term(child, *layouts_[c - 1][ext.child], n, t.idx);
                        if (where.slot != Slot::Current) throw MissingChildValue("external constant outside child basis");
                        ext.child_position = where.position;
                    }
                }
                out.assembly.terms.push_back(std::move(ext));
            }
        }
        return out;
    }

private:
    struct NodeValues {
        ExactVector cur;
        ExactVector prev;
    };

    std::size_t child_of(const RecursionNode& node, const GIndex& idx) const {
        for (std::size_t i = 0; i < node.gce_queues.size(); ++i) {
            const std::size_t k = node.gce_queues[i];
            if (idx.mult[k] < node.base[k]) return node.children[i];
        }
        std::ostringstream os;
        os << idx << " is not provided by any child";
        throw MissingChildValue(os.str());
    }

    std::vector<NodeValues> run(std::size_t c, const IntVector& target) {
        const std::size_t stepped = c - 1;
        std::vector<NodeValues> vals(tree_.nodes.size());
        IntVector n = target;
        n[stepped] = 0;

        bool empty = true;
        for (std::size_t s = 0; s < stepped; ++s) empty = empty && n[s] == 0;
        if (empty) {
            for (std::size_t id : tree_.order) {
                const auto& lay = *layouts_[c - 1][id];
                vals[id].cur.assign(lay.size(), 0);
                for (std::size_t i = 0; i < lay.size(); i += c) vals[id].cur[i] = 1;
            }
        } else {
            IntVector reduced(target.begin(), target.begin() + static_cast<long>(stepped));
            auto sub = run(c - 1, reduced);
            for (std::size_t id : tree_.order) {
                const auto& lay = *layouts_[c - 1][id];
                auto& cur = vals[id].cur;
                cur.assign(lay.size(), 0);
                for (std::size_t d = 0; d < lay.deltas().size(); ++d) {
                    for (std::size_t v = 0; v + 1 < c; ++v) cur[d * c + v] = sub[id].cur[d * (c - 1) + v];
                    cur[d * c + stepped] = sub[id].prev[d * (c - 1)];
                }
            }
        }
        for (std::size_t id : tree_.order) vals[id].prev.assign(vals[id].cur.size(), 0);

        for (int step = 1; step <= target[stepped]; ++step) {
            n[stepped] = step;
            for (std::size_t id : tree_.order) {
                ExactVector next = step_node(c, id, n, vals);
                vals[id].prev = std::move(vals[id].cur);
                vals[id].cur = std::move(next);
            }
        }
        return vals;
    }

    ExactScalar external_value(std::size_t c, const RecursionNode& node, const IntVector& n, const GIndex& idx,
                               const std::vector<NodeValues>& vals) const {
        const auto& mdl = models_[c - 1];
        if (auto t = terminal_value(mdl, idx)) return *t;
        const std::size_t id = child_of(node, idx);
        const auto& child = tree_.nodes[id];
        if (child.leaf) return leaf_g(mdl, idx);
        auto where = resolve_term(child, *layouts_[c - 1][id], n, idx);
        if (where.slot != Slot::Current) {
            std::ostringstream os;
            os << idx << " is outside the child basis";
            throw MissingChildValue(os.str());
        }
        return vals[id].cur[where.position];
    }

    ExactVector step_node(std::size_t c, std::size_t id, const IntVector& n, const std::vector<NodeValues>& vals) {
        const auto& mdl = models_[c - 1];
        const auto& node = tree_.nodes[id];
        const auto& lay = *layouts_[c - 1][id];
        const ExactVector& prev = vals[id].cur;
        ExactVector out(lay.size(), 0);
        auto unknowns = unknown_positions(lay, n);
        ++stats_.steps;
        stats_.max_order = std::max(stats_.max_order, unknowns.size());

        auto rhs = [&](const CompiledRow& row) {
            ExactScalar acc = 0;
            for (const auto& [pos, coeff] : row.b) acc += coeff * prev[pos];
            for (const auto& t : row.external) acc += t.coeff * external_value(c, node, n, t.idx, vals);
            return acc;
        };

        try {
            auto rows = compile_pool(mdl, node, lay, n);
            auto pool = coefficient_rows(rows, unknowns);
            for (std::size_t i = 0; i < rows.size(); ++i) pool[i].rhs = rhs(rows[i]);
            ExactVector x = solve_pool(pool, unknowns.size());
            for (std::size_t j = 0; j < unknowns.size(); ++j) out[unknowns[j]] = std::move(x[j]);
        } catch (const RankDeficientPool& e) {
            return fallback(c, id, n, e.what());
        } catch (const SingularMatrix& e) {
            return fallback(c, id, n, e.what());
        }

        // Layers below l-1 follow from the previous step through the stepped
        // class's population constraint.
        for (std::size_t i = lay.core_size(); i < lay.size(); ++i) {
            const std::size_t v = i % c;
            IntVector pop = lay.population(n, v);
            if (any_negative(pop)) continue;
            auto row = compile_relation(node, lay, n, pc(mdl, stepped_class(c), {node_mult(node, lay.deltas()[i / c]), pop}));
            if (!row.external.empty() || row.a.size() != 1 || row.a.begin()->first != i) {
                throw LayoutMismatch("lower-layer constant is not determined by the previous step");
            }
            out[i] = rhs(row) / row.a.begin()->second;
        }
        return out;
    }

    static std::size_t stepped_class(std::size_t c) { return c - 1; }

    ExactVector fallback(std::size_t c, std::size_t id, const IntVector& n, const std::string& why) {
        const auto& mdl = models_[c - 1];
        const auto& node = tree_.nodes[id];
        const auto& lay = *layouts_[c - 1][id];
        ++stats_.fallbacks;
        stats_.diagnostics.push_back("step at population " + describe(n) + " of node " + describe(node.base) +
                                     " recomputed by convolution: " + why);
        ExactVector out(lay.size(), 0);
        try {
            for (std::size_t d = 0; d < lay.deltas().size(); ++d) {
                ConvolutionTable table(mdl, node_mult(node, lay.deltas()[d]), n);
                for (std::size_t v = 0; v < c; ++v) out[d * c + v] = table.at(lay.population(n, v));
            }
        } catch (const std::exception& e) {
            throw SingularStep("singular step at population " + describe(n) + ": " + e.what());
        }
        return out;
    }

    RecursionTree tree_;
    std::vector<ValidatedModel> models_;                               // models_[c-1] keeps classes 1..c
    std::vector<std::vector<std::shared_ptr<const BasisLayout>>> layouts_;  // [c-1][node]
    SolveStats stats_;
};

/// Sum of the external terms of each selected row, using child values
/// `children_values[node]` (aligned to that child's layout) or the closed form
/// for leaf children and terminal constants.
inline ExactVector assemble_vminus(const ValidatedModel& model, const StepSystem& system,
                                   const std::map<std::size_t, ExactVector>& children_values) {
    ExactVector out(system.rows.size(), 0);
    for (const auto& t : system.assembly.terms) {
        ExactScalar value;
        if (auto term = terminal_value(model, t.idx)) {
            value = *term;
        } else if (!t.child_position) {
            value = leaf_g(model, t.idx);
        } else {
            auto it = children_values.find(t.child);
            if (it == children_values.end() || *t.child_position >= it->second.size()) {
                std::ostringstream os;
                os << "no value for " << t.idx;
                throw MissingChildValue(os.str());
            }
            value = it->second[*t.child_position];
        }
        out[t.row] += t.coeff * value;
    }
    return out;
}

}  // namespace mbmom

#endif  // MBMOM_SOLVER_HPP
