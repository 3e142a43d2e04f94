#ifndef MBMOM_RECURSION_HPP
#define MBMOM_RECURSION_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
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

namespace mbmom {

inline constexpr std::size_t kNoNode = std::numeric_limits<std::size_t>::max();

/// One model of the recursion: the original network with base multiplicity
/// `base` (queues dropped by earlier GCEs have base 0).
struct RecursionNode {
    IntVector base;
    std::vector<std::size_t> retained;    // queues with base >= 1
    std::vector<std::size_t> gce_queues;  // queues whose GCEs enter the system
    std::vector<std::size_t> children;    // node of base - 1_k for each GCE queue
    int depth = 0;
    int level = 1;
    bool leaf = false;                    // one retained queue, solved in closed form
};

struct RecursionTree {
    std::vector<RecursionNode> nodes;     // nodes[0] is the root
    std::vector<std::size_t> order;       // non-leaf nodes, deepest first
    std::size_t branching = 0;            // 0 for the plain MoM recursion
};

struct SolveStats {
    std::size_t steps = 0;                // linear systems solved
    std::size_t fallbacks = 0;            // steps recomputed by convolution
    std::size_t max_order = 0;            // largest coefficient matrix solved
    std::vector<std::string> diagnostics;
};

/// Basis values at one anchor population.
struct BasisValues {
    std::shared_ptr<const BasisLayout> layout;
    IntVector anchor_pop;
    ExactVector values;
};

enum class Slot { Zero, Current, Previous, External };

struct ResolvedTerm {
    Slot slot;
    std::size_t position = 0;
};

/// Global multiplicity vector of a layout delta at a node.
inline IntVector node_mult(const RecursionNode& node, const IntVector& delta) {
    IntVector mult = node.base;
    for (std::size_t i = 0; i < node.retained.size(); ++i) mult[node.retained[i]] += delta[i];
    return mult;
}

/// Locates G(idx) relative to a node's layout anchored at n: inside the
/// current basis, inside the basis at n - 1_R, zero by termination, or
/// external (a constant of a model with fewer queues).
inline ResolvedTerm resolve_term(const RecursionNode& node, const BasisLayout& layout, const IntVector& n,
                                 const GIndex& idx) {
    if (any_negative(idx.pop) || any_negative(idx.mult)) return {Slot::Zero};

    IntVector delta(node.retained.size(), 0);
    bool inside = true;
    std::size_t next = 0;
    for (std::size_t k = 0; k < idx.mult.size(); ++k) {
        const int d = idx.mult[k] - node.base[k];
        const bool kept = next < node.retained.size() && node.retained[next] == k;
        if (kept) delta[next++] = d;
        if (d < 0 || (!kept && d != 0)) inside = false;
    }
    if (!inside) return {Slot::External};
    auto dpos = layout.delta_position(delta);
    if (!dpos) return {Slot::External};

    const std::size_t R = layout.R();
    const std::size_t stepped = R - 1;
    IntVector diff = n - idx.pop;
    if (any_negative(diff) || total(diff) > 2) {
        std::ostringstream os;
        os << idx << " is not reachable from anchor population";
        throw LayoutMismatch(os.str());
    }
    const bool previous = diff[stepped] > 0;
    if (previous) --diff[stepped];
    std::size_t variant = 0;
    for (std::size_t s = 0; s < stepped; ++s) {
        if (diff[s] == 0) continue;
        if (diff[s] > 1 || variant != 0) {
            std::ostringstream os;
            os << idx << " is not a population variant of the basis";
            throw LayoutMismatch(os.str());
        }
        variant = s + 1;
    }
    if (diff[stepped] != 0) {
        std::ostringstream os;
        os << idx << " lies more than one step back";
        throw LayoutMismatch(os.str());
    }
    return {previous ? Slot::Previous : Slot::Current, layout.position(*dpos, variant)};
}

/// A relation compiled against a layout: a . V(n) = b . V(n - 1_R) + sum(external).
struct CompiledRow {
    LinearRelation relation;
    std::map<std::size_t, ExactScalar> a;
    std::map<std::size_t, ExactScalar> b;
    std::vector<Term> external;  // already moved to the right-hand side
};

inline CompiledRow compile_relation(const RecursionNode& node, const BasisLayout& layout, const IntVector& n,
                                    LinearRelation rel) {
    CompiledRow row{std::move(rel), {}, {}, {}};
    auto add = [&](const Term& t, int sign) {
        if (is_zero(t.coeff)) return;
        auto where = resolve_term(node, layout, n, t.idx);
        ExactScalar s = sign > 0 ? t.coeff : ExactScalar(-t.coeff);
        switch (where.slot) {
            case Slot::Zero: break;
            case Slot::Current: row.a[where.position] += s; break;
            case Slot::Previous: row.b[where.position] -= s; break;
            case Slot::External: row.external.push_back({-s, t.idx}); break;
        }
    };
    for (const auto& t : row.relation.lhs_terms) add(t, +1);
    for (const auto& t : row.relation.rhs_terms) add(t, -1);
    std::erase_if(row.a, [](const auto& kv) { return is_zero(kv.second); });
    std::erase_if(row.b, [](const auto& kv) { return is_zero(kv.second); });
    return row;
}

/// Relations offered to a step, grouped by family.
struct RelationPool {
    std::vector<LinearRelation> pc_stepped;  // PC of the stepped class, all layer l-1 entries
    std::vector<LinearRelation> ce;
    std::vector<LinearRelation> pc_other;    // PC of classes 1..R-1 at layer l-1 anchors
    std::vector<LinearRelation> gce;         // GCEs on layer-l constants that are not CEs
};

inline RelationPool generate_pool(const ValidatedModel& model, const RecursionNode& node, const BasisLayout& layout,
                                  const IntVector& n) {
    const std::size_t R = layout.R();
    const int l = layout.level();
    RelationPool pool;
    auto [lo_begin, lo_end] = layout.layer_range(l - 1);
    auto [hi_begin, hi_end] = layout.layer_range(l);

    for (std::size_t d = lo_begin; d < lo_end; ++d) {
        const IntVector mult = node_mult(node, layout.deltas()[d]);
        for (std::size_t v = 0; v < R; ++v) {
            IntVector pop = layout.population(n, v);
            if (any_negative(pop)) continue;
            pool.pc_stepped.push_back(pc(model, R - 1, {mult, std::move(pop)}));
        }
    }
    for (std::size_t k : node.retained) {
        for (std::size_t d = lo_begin; d < lo_end; ++d) {
            pool.ce.push_back(ce(model, k, {node_mult(node, layout.deltas()[d]), n}));
        }
    }
    for (std::size_t r = 0; r + 1 < R; ++r) {
        for (std::size_t d = lo_begin; d < lo_end; ++d) {
            pool.pc_other.push_back(pc(model, r, {node_mult(node, layout.deltas()[d]), n}));
        }
    }
    for (std::size_t d = hi_begin; d < hi_end; ++d) {
        const IntVector& delta = layout.deltas()[d];
        const IntVector mult = node_mult(node, delta);
        for (std::size_t k : node.gce_queues) {
            auto local = std::find(node.retained.begin(), node.retained.end(), k) - node.retained.begin();
            if (delta[static_cast<std::size_t>(local)] != 0) continue;
            pool.gce.push_back(gce(model, k, {mult, n}));
        }
    }
    return pool;
}

/// Rows in selection priority: the stepped-class PCs pin every layer l-1
/// constant, then CEs, the remaining PCs, and GCEs only as far as needed.
inline std::vector<CompiledRow> compile_pool(const ValidatedModel& model, const RecursionNode& node,
                                             const BasisLayout& layout, const IntVector& n) {
    RelationPool pool = generate_pool(model, node, layout, n);
    std::vector<CompiledRow> rows;
    for (auto* family : {&pool.pc_stepped, &pool.ce, &pool.pc_other, &pool.gce}) {
        for (auto& rel : *family) rows.push_back(compile_relation(node, layout, n, std::move(rel)));
    }
    return rows;
}

/// Core entries whose population is non-negative; the others are zero.
inline std::vector<std::size_t> unknown_positions(const BasisLayout& layout, const IntVector& n) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < layout.core_size(); ++i) {
        if (!any_negative(layout.population(n, i % layout.R()))) out.push_back(i);
    }
    return out;
}

inline std::vector<PoolRow> coefficient_rows(const std::vector<CompiledRow>& rows,
                                             const std::vector<std::size_t>& unknowns) {
    std::map<std::size_t, std::size_t> column;
    for (std::size_t j = 0; j < unknowns.size(); ++j) column[unknowns[j]] = j;
    std::vector<PoolRow> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        PoolRow p{ExactVector(unknowns.size(), 0), 0};
        for (const auto& [pos, c] : row.a) {
            auto it = column.find(pos);
            if (it == column.end()) throw LayoutMismatch("relation touches a constant outside the core basis");
            p.coeffs[it->second] = c;
        }
        out.push_back(std::move(p));
    }
    return out;
}

inline int display_rank(RelationKind kind, std::size_t index, std::size_t stepped) {
    switch (kind) {
        case RelationKind::CE: return 0;
        case RelationKind::GCE: return 1;
        case RelationKind::PC: return index == stepped ? 3 : 2;
    }
    return 4;
}

/// One external constant on the right-hand side of a selected row.
struct ExternalTerm {
    std::size_t row;
    ExactScalar coeff;
    GIndex idx;
    std::size_t child = kNoNode;  // node providing the value; kNoNode for closed form
    std::optional<std::size_t> child_position;
};

struct VMinusAssembly {
    std::vector<ExternalTerm> terms;
};

/// Square system A V(n) = V^-(n) + B V(n - 1_R) of one step. Columns of A are
/// the unknown core entries; columns of B are the core entries of the
/// previous basis. Rows are listed CE, GCE, PC (classes 1..R-1), PC (class R).
struct StepSystem {
    std::vector<LinearRelation> rows;
    std::vector<std::size_t> unknowns;
    ExactMatrix A;
    ExactMatrix B;
    VMinusAssembly assembly;
};

}  // namespace mbmom

#endif  // MBMOM_RECURSION_HPP
