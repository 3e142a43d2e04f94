#ifndef MBMOM_EQUATIONS_HPP
#define MBMOM_EQUATIONS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "lattice.hpp"
#include "model.hpp"
#include "oracles.hpp"
#include "scalar.hpp"

namespace mbmom {

enum class RelationKind { CE, PC, GCE };

inline const char* to_string(RelationKind kind) {
    switch (kind) {
        case RelationKind::CE: return "CE";
        case RelationKind::PC: return "PC";
        case RelationKind::GCE: return "GCE";
    }
    return "?";
}

struct Term {
    ExactScalar coeff;
    GIndex idx;

    bool operator==(const Term&) const = default;
};

/// sum(lhs) = sum(rhs) over normalizing constants.
///
/// `index` is the queue k (CE, GCE) or class r (PC), zero-based; `anchor` is
/// the (multiplicity, population) pair the relation was instantiated at.
/// Right-hand terms with a zero coefficient are omitted. The left-hand side
/// always holds exactly one term; for a PC anchored at N'_r = 0 its
/// coefficient is zero and the relation is trivially satisfied.
struct LinearRelation {
    std::vector<Term> lhs_terms;
    std::vector<Term> rhs_terms;
    RelationKind kind;
    std::size_t index;
    GIndex anchor;
};

/// Convolution expression at anchor (m', N'):
/// G(m'+1_k, N') = G(m', N') + sum_r D_kr G(m'+1_k, N'-1_r).
inline LinearRelation ce(const ValidatedModel& model, std::size_t k, const GIndex& anchor) {
    const std::size_t M = model.M();
    const std::size_t R = model.R();
    LinearRelation rel{{}, {}, RelationKind::CE, k, anchor};
    const IntVector grown = anchor.mult + unit(M, k);
    rel.lhs_terms.push_back({1, {grown, anchor.pop}});
    rel.rhs_terms.push_back({1, anchor});
    for (std::size_t r = 0; r < R; ++r) {
        if (is_zero(model.D(k, r))) continue;
        rel.rhs_terms.push_back({model.D(k, r), {grown, anchor.pop - unit(R, r)}});
    }
    return rel;
}

/// Population constraint for class r at anchor (m', N'):
/// N'_r G(m', N') = Z_r G(m', N'-1_r) + sum_k m'_k D_kr G(m'+1_k, N'-1_r).
inline LinearRelation pc(const ValidatedModel& model, std::size_t r, const GIndex& anchor) {
    const std::size_t M = model.M();
    const std::size_t R = model.R();
    LinearRelation rel{{}, {}, RelationKind::PC, r, anchor};
    const IntVector fewer = anchor.pop - unit(R, r);
    rel.lhs_terms.push_back({anchor.pop[r], anchor});
    if (!is_zero(model.Z(r))) rel.rhs_terms.push_back({model.Z(r), {anchor.mult, fewer}});
    for (std::size_t k = 0; k < M; ++k) {
        if (anchor.mult[k] == 0 || is_zero(model.D(k, r))) continue;
        rel.rhs_terms.push_back({anchor.mult[k] * model.D(k, r), {anchor.mult + unit(M, k), fewer}});
    }
    return rel;
}

/// Generalized convolution expression removing one copy of queue k:
/// G(m', N') = G(m'-1_k, N') + sum_r D_kr G(m', N'-1_r).
inline LinearRelation gce(const ValidatedModel& model, std::size_t k, const GIndex& anchor) {
    const std::size_t M = model.M();
    const std::size_t R = model.R();
    if (anchor.mult[k] < 1) {
        throw QueueAbsent("GCE for queue " + std::to_string(k + 1) + " needs at least one copy of it");
    }
    LinearRelation rel{{}, {}, RelationKind::GCE, k, anchor};
    rel.lhs_terms.push_back({1, anchor});
    rel.rhs_terms.push_back({1, {anchor.mult - unit(M, k), anchor.pop}});
    for (std::size_t r = 0; r < R; ++r) {
        if (is_zero(model.D(k, r))) continue;
        rel.rhs_terms.push_back({model.D(k, r), {anchor.mult, anchor.pop - unit(R, r)}});
    }
    return rel;
}

/// Coefficients of lhs - rhs keyed by GIndex, zero entries dropped. Two
/// relations with equal normal forms carry the same information.
inline std::map<GIndex, ExactScalar> normalized_terms(const LinearRelation& rel) {
    std::map<GIndex, ExactScalar> out;
    for (const auto& t : rel.lhs_terms) out[t.idx] += t.coeff;
    for (const auto& t : rel.rhs_terms) out[t.idx] -= t.coeff;
    std::erase_if(out, [](const auto& kv) { return is_zero(kv.second); });
    return out;
}

/// sum(lhs) - sum(rhs) with every constant taken from `g`.
template <class Lookup>
ExactScalar residual(const LinearRelation& rel, Lookup&& g) {
    ExactScalar acc = 0;
    for (const auto& t : rel.lhs_terms) acc += t.coeff * g(t.idx);
    for (const auto& t : rel.rhs_terms) acc -= t.coeff * g(t.idx);
    return acc;
}

/// Value of G fixed by the termination conditions: zero for any negative
/// entry, and the delay-only weight prod(Z_r^n_r / n_r!) when no queue is
/// left (which covers G(0, 0) = 1).
inline std::optional<ExactScalar> terminal_value(const ValidatedModel& model, const GIndex& idx) {
    if (any_negative(idx.pop) || any_negative(idx.mult)) return ExactScalar(0);
    if (all_zero(idx.mult)) return delay_weight(model.raw().think_times, idx.pop);
    return std::nullopt;
}

/// G for a network with copies of a single distinct queue plus the delay.
/// c identical stations hold p jobs with weight
/// C(|p|+c-1, c-1) |p|!/prod(p_r!) prod(D_r^p_r); the delay takes the rest.
inline ExactScalar leaf_g(const ValidatedModel& model, const GIndex& idx) {
    std::size_t present = model.M();
    for (std::size_t k = 0; k < idx.mult.size(); ++k) {
        if (idx.mult[k] > 0) {
            if (present != model.M()) throw NotLeaf("leaf_g needs at most one distinct queue");
            present = k;
        }
    }
    if (auto t = terminal_value(model, idx)) return *t;

    const int copies = idx.mult[present];
    const auto& demands = model.raw().demands[present];
    PopulationLattice box(idx.pop);
    ExactScalar sum = 0;
    IntVector at_queue(model.R(), 0);
    do {
        const int jobs = total(at_queue);
        ExactScalar w = station_weight(demands, at_queue);
        if (is_zero(w)) continue;
        w *= ExactScalar(binomial(jobs + copies - 1, copies - 1));
        sum += w * delay_weight(model.raw().think_times, idx.pop - at_queue);
    } while (box.next(at_queue));
    return sum;
}

}  // namespace mbmom

#endif  // MBMOM_EQUATIONS_HPP
