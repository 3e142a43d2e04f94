#ifndef MBMOM_ORACLES_HPP
#define MBMOM_ORACLES_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"
#include "lattice.hpp"
#include "model.hpp"
#include "scalar.hpp"

namespace mbmom {

inline constexpr std::uint64_t kMaxBruteForceStates = 10'000'000;
inline constexpr std::uint64_t kMaxLatticePoints = 10'000'000;

/// Per-station class counts of one network state: one row per physical
/// queue replica followed by one row for the delay stage.
struct StateVector {
    std::vector<IntVector> n;

    bool operator==(const StateVector&) const = default;
};

/// Un-normalized product-form weight of a single-server station holding
/// counts[r] jobs of each class: n!/prod(n_r!) * prod(D_r^n_r).
inline ExactScalar station_weight(const std::vector<ExactScalar>& demands, const IntVector& counts) {
    ExactInteger coefficient = factorial(total(counts));
    ExactScalar w = 1;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        if (counts[r] == 0) continue;
        coefficient /= factorial(counts[r]);
        w *= pow(demands[r], counts[r]);
    }
    return w * ExactScalar(coefficient);
}

/// Weight of the infinite-server delay stage: prod(Z_r^j_r / j_r!).
inline ExactScalar delay_weight(const std::vector<ExactScalar>& think_times, const IntVector& counts) {
    ExactScalar w = 1;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        if (counts[r] == 0) continue;
        w *= pow(think_times[r], counts[r]) / ExactScalar(factorial(counts[r]));
    }
    return w;
}

/// Number of states of a network with `stations` single-server stations plus
/// a delay, saturated above the brute-force guard.
inline std::uint64_t state_count(int stations, const IntVector& pop) {
    std::uint64_t count = 1;
    for (int p : pop) {
        ExactInteger c = binomial(p + stations, stations);
        if (c > kMaxBruteForceStates) return kMaxBruteForceStates + 1;
        count *= c.get_ui();
        if (count > kMaxBruteForceStates) return kMaxBruteForceStates + 1;
    }
    return count;
}

/// G(mult, pop) by summing the product-form weight of every state of the
/// physical network (each replica enumerated separately).
inline ExactScalar g_bruteforce(const ValidatedModel& model, const GIndex& idx) {
    if (any_negative(idx.pop) || any_negative(idx.mult)) return 0;
    const std::size_t R = model.R();
    const int stations = total(idx.mult);
    if (state_count(stations, idx.pop) > kMaxBruteForceStates) {
        throw StateSpaceTooLarge("state space of " + std::to_string(stations) + " queues exceeds " +
                                 std::to_string(kMaxBruteForceStates) + " states");
    }

    // Station weights only depend on the distinct queue and the class counts,
    // so tabulate them over the population box once.
    PopulationLattice box(idx.pop);
    std::vector<std::vector<ExactScalar>> weight(model.M());
    for (std::size_t k = 0; k < model.M(); ++k) {
        if (idx.mult[k] == 0) continue;
        weight[k].resize(box.size());
        IntVector n(R, 0);
        do {
            weight[k][box.index(n)] = station_weight(model.raw().demands[k], n);
        } while (box.next(n));
    }
    std::vector<std::size_t> station_type;
    for (std::size_t k = 0; k < model.M(); ++k) {
        for (int c = 0; c < idx.mult[k]; ++c) station_type.push_back(k);
    }

    ExactScalar sum = 0;
    IntVector remaining = idx.pop;
    IntVector counts(R, 0);
    // Depth-first over stations; each level picks the class counts of one station.
    auto visit = [&](auto&& self, std::size_t s, const ExactScalar& partial) -> void {
        if (s == station_type.size()) {
            sum += partial * delay_weight(model.raw().think_times, remaining);
            return;
        }
        PopulationLattice choices(remaining);
        IntVector n(R, 0);
        const IntVector before = remaining;
        do {
            const ExactScalar& w = weight[station_type[s]][box.index(n)];
            if (!is_zero(w)) {
                remaining = before - n;
                self(self, s + 1, partial * w);
            }
        } while (choices.next(n));
        remaining = before;
    };
    visit(visit, 0, ExactScalar(1));
    return sum;
}

/// G(mult, n) for every n in the box below `bound`, built by adding queue
/// replicas one at a time to the delay-only network:
/// G(m, n) = G(m - 1_k, n) + sum_r D_kr G(m, n - 1_r).
class ConvolutionTable {
public:
    ConvolutionTable(const ValidatedModel& model, const IntVector& mult, const IntVector& bound)
        : box_(bound), values_(box_.size()) {
        const std::size_t R = model.R();
        IntVector n(R, 0);
        do {
            values_[box_.index(n)] = delay_weight(model.raw().think_times, n);
        } while (box_.next(n));

        for (std::size_t k = 0; k < model.M(); ++k) {
            for (int copy = 0; copy < mult[k]; ++copy) {
                std::fill(n.begin(), n.end(), 0);
                do {
                    const std::size_t i = box_.index(n);
                    for (std::size_t r = 0; r < R; ++r) {
                        if (n[r] == 0 || is_zero(model.D(k, r))) continue;
                        values_[i] += model.D(k, r) * values_[i - box_.stride(r)];
                    }
                } while (box_.next(n));
            }
        }
    }

    /// Zero outside the box's lower boundary (negative entries).
    ExactScalar at(const IntVector& n) const {
        if (any_negative(n)) return 0;
        return values_[box_.index(n)];
    }

private:
    PopulationLattice box_;
    std::vector<ExactScalar> values_;
};

inline ExactScalar g_convolution(const ValidatedModel& model, const GIndex& idx) {
    if (any_negative(idx.pop) || any_negative(idx.mult)) return 0;
    return ConvolutionTable(model, idx.mult, idx.pop).at(idx.pop);
}

/// Exact multiclass MVA over the population lattice; each of the m_k
/// replicas of queue k is an identical single-server station.
inline MeanIndices mva(const ValidatedModel& model) {
    const std::size_t M = model.M();
    const std::size_t R = model.R();
    PopulationLattice lattice(model.population());
    if (lattice.size() > kMaxLatticePoints) {
        throw LatticeTooLarge("population lattice exceeds " + std::to_string(kMaxLatticePoints) + " points");
    }

    // Per-replica total queue length sum_s Q_ks at every lattice point.
    std::vector<ExactVector> queue_total(lattice.size(), ExactVector(M, 0));
    MeanIndices out;
    std::vector<std::vector<ExactScalar>> residence(M, std::vector<ExactScalar>(R));
    std::vector<ExactScalar> X(R);
    std::vector<std::vector<ExactScalar>> Q(M, std::vector<ExactScalar>(R));

    IntVector n(R, 0);
    while (lattice.next(n)) {
        const std::size_t i = lattice.index(n);
        for (std::size_t r = 0; r < R; ++r) {
            if (n[r] == 0) {
                X[r] = 0;
                for (std::size_t k = 0; k < M; ++k) residence[k][r] = Q[k][r] = 0;
                continue;
            }
            const auto& before = queue_total[i - lattice.stride(r)];
            ExactScalar cycle = model.Z(r);
            for (std::size_t k = 0; k < M; ++k) {
                residence[k][r] = model.D(k, r) * (1 + before[k]);
                cycle += model.m(k) * residence[k][r];
            }
            if (is_zero(cycle)) throw DegenerateModel("class " + std::to_string(r + 1) + " has no holding place with positive demand");
            X[r] = n[r] / cycle;
            for (std::size_t k = 0; k < M; ++k) Q[k][r] = X[r] * residence[k][r];
        }
        for (std::size_t k = 0; k < M; ++k) {
            ExactScalar q = 0;
            for (std::size_t r = 0; r < R; ++r) q += Q[k][r];
            queue_total[i][k] = q;
        }
    }

    const bool empty = model.total_population() == 0;
    out.X.assign(R, 0);
    out.Rr.assign(R, 0);
    out.Q.assign(M, std::vector<ExactScalar>(R, 0));
    out.U = out.Rkr = out.Q;
    if (empty) return out;
    for (std::size_t r = 0; r < R; ++r) {
        out.X[r] = X[r];
        if (model.N(r) > 0) out.Rr[r] = model.N(r) / X[r];
        for (std::size_t k = 0; k < M; ++k) {
            out.Q[k][r] = Q[k][r];
            out.U[k][r] = model.D(k, r) * X[r];
            if (model.N(r) > 0) out.Rkr[k][r] = residence[k][r];
        }
    }
    return out;
}

}  // namespace mbmom

#endif  // MBMOM_ORACLES_HPP
