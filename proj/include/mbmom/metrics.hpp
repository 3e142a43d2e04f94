#ifndef MBMOM_METRICS_HPP
#define MBMOM_METRICS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "error.hpp"
#include "model.hpp"
#include "oracles.hpp"
#include "scalar.hpp"

namespace mbmom {

/// Mean performance indices from normalizing constants. `g` must provide
/// G(m, N), G(m, N-1_r) and G(m+1_k, N-1_r) for every k and r. Queue
/// lengths, utilizations and residence times are per replica.
template <class Lookup>
MeanIndices indices_from_constants(const ValidatedModel& model, Lookup&& g) {
    const std::size_t M = model.M();
    const std::size_t R = model.R();
    const IntVector& m = model.multiplicities();
    const IntVector& N = model.population();
    const ExactScalar G = g(GIndex{m, N});
    if (is_zero(G)) throw DegenerateModel("normalizing constant is zero");

    MeanIndices out;
    out.X.assign(R, 0);
    out.Rr.assign(R, 0);
    out.Q.assign(M, std::vector<ExactScalar>(R, 0));
    out.U = out.Rkr = out.Q;
    for (std::size_t r = 0; r < R; ++r) {
        if (N[r] == 0) continue;
        const IntVector fewer = N - unit(R, r);
        out.X[r] = g(GIndex{m, fewer}) / G;
        if (!is_zero(out.X[r])) out.Rr[r] = N[r] / out.X[r];
        for (std::size_t k = 0; k < M; ++k) {
            out.Q[k][r] = model.D(k, r) * g(GIndex{m + unit(M, k), fewer}) / G;
            out.U[k][r] = model.D(k, r) * out.X[r];
            if (!is_zero(out.X[r])) out.Rkr[k][r] = out.Q[k][r] / out.X[r];
        }
    }
    return out;
}

/// Queue with the largest total utilization; ties go to the lower index.
inline std::size_t bottleneck(const MeanIndices& indices) {
    std::size_t best = 0;
    ExactScalar best_u = -1;
    for (std::size_t k = 0; k < indices.U.size(); ++k) {
        ExactScalar u = 0;
        for (const auto& x : indices.U[k]) u += x;
        if (u > best_u) {
            best_u = u;
            best = k;
        }
    }
    return best;
}

/// Product-form weight of one state of a network of distinct queues.
inline ExactScalar state_weight(const ValidatedModel& model, const StateVector& state) {
    const std::size_t M = model.M();
    const std::size_t R = model.R();
    for (std::size_t k = 0; k < M; ++k) {
        if (model.m(k) != 1) throw ReplicatedQueuesUnsupported("state probabilities need every multiplicity equal to 1");
    }
    if (state.n.size() != M + 1) {
        throw InfeasibleState("state needs " + std::to_string(M + 1) + " rows (queues then delay), got " +
                              std::to_string(state.n.size()));
    }
    IntVector placed(R, 0);
    for (const auto& row : state.n) {
        if (row.size() != R) throw InfeasibleState("state row length must equal class count");
        if (any_negative(row)) throw InfeasibleState("state holds a negative job count");
        placed = placed + row;
    }
    if (placed != model.population()) throw InfeasibleState("state does not place exactly N jobs of each class");

    ExactScalar w = delay_weight(model.raw().think_times, state.n[M]);
    for (std::size_t k = 0; k < M && !is_zero(w); ++k) w *= station_weight(model.raw().demands[k], state.n[k]);
    return w;
}

inline ExactScalar state_probability(const ValidatedModel& model, const StateVector& state, const ExactScalar& g_norm) {
    ExactScalar w = state_weight(model, state);
    if (is_zero(g_norm)) throw DegenerateModel("normalizing constant is zero");
    return w / g_norm;
}

/// Every state of a network of distinct queues, queues first then delay.
inline std::vector<StateVector> enumerate_states(const ValidatedModel& model) {
    const std::size_t M = model.M();
    const std::size_t R = model.R();
    if (state_count(static_cast<int>(M), model.population()) > kMaxBruteForceStates) {
        throw StateSpaceTooLarge("too many states to enumerate");
    }
    std::vector<StateVector> out;
    StateVector s{std::vector<IntVector>(M + 1, IntVector(R, 0))};
    auto place = [&](auto&& self, std::size_t station, const IntVector& left) -> void {
        if (station == M) {
            s.n[M] = left;
            out.push_back(s);
            return;
        }
        IntVector n(R, 0);
        PopulationLattice box(left);
        do {
            s.n[station] = n;
            self(self, station + 1, left - n);
        } while (box.next(n));
    };
    place(place, 0, model.population());
    return out;
}

}  // namespace mbmom

#endif  // MBMOM_METRICS_HPP
