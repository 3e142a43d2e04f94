#ifndef MBMOM_MODEL_HPP
#define MBMOM_MODEL_HPP

#include <compare>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "scalar.hpp"

namespace mbmom {

using IntVector = std::vector<int>;

/// Closed multiclass product-form network: M distinct queues, R classes,
/// demands D[k][r], think times Z[r], multiplicities m[k], populations N[r].
struct NetworkModel {
    std::vector<std::vector<ExactScalar>> demands;
    std::vector<ExactScalar> think_times;
    IntVector multiplicities;
    IntVector populations;

    std::size_t queues() const { return demands.size(); }
    std::size_t classes() const { return think_times.size(); }

    bool operator==(const NetworkModel&) const = default;
};

class ValidatedModel;
ValidatedModel validate_model(NetworkModel raw);
ValidatedModel restrict_classes(const ValidatedModel& model, std::size_t classes);

/// A NetworkModel whose invariants have been checked. Immutable.
class ValidatedModel {
public:
    std::size_t M() const { return raw_.demands.size(); }
    std::size_t R() const { return raw_.think_times.size(); }
    const ExactScalar& D(std::size_t k, std::size_t r) const { return raw_.demands[k][r]; }
    const ExactScalar& Z(std::size_t r) const { return raw_.think_times[r]; }
    int m(std::size_t k) const { return raw_.multiplicities[k]; }
    int N(std::size_t r) const { return raw_.populations[r]; }
    const IntVector& multiplicities() const { return raw_.multiplicities; }
    const IntVector& population() const { return raw_.populations; }
    int total_queues() const {
        return std::accumulate(raw_.multiplicities.begin(), raw_.multiplicities.end(), 0);
    }
    int total_population() const {
        return std::accumulate(raw_.populations.begin(), raw_.populations.end(), 0);
    }
    const NetworkModel& raw() const { return raw_; }

    bool operator==(const ValidatedModel&) const = default;

private:
    explicit ValidatedModel(NetworkModel raw) : raw_(std::move(raw)) {}
    friend ValidatedModel validate_model(NetworkModel raw);
    friend ValidatedModel restrict_classes(const ValidatedModel& model, std::size_t classes);

    NetworkModel raw_;
};

inline ValidatedModel validate_model(NetworkModel raw) {
    const std::size_t M = raw.demands.size();
    const std::size_t R = raw.think_times.size();
    if (M < 1) throw InvalidModel("model needs at least one queue");
    if (R < 1) throw InvalidModel("model needs at least one class");
    if (raw.multiplicities.size() != M) throw InvalidModel("multiplicity vector length must equal queue count");
    if (raw.populations.size() != R) throw InvalidModel("population vector length must equal class count");
    // Values built from (num, den) pairs may not be in lowest terms; GMP
    // comparisons assume they are.
    for (auto& row : raw.demands) {
        for (auto& d : row) d.canonicalize();
    }
    for (auto& z : raw.think_times) z.canonicalize();
    for (std::size_t k = 0; k < M; ++k) {
        if (raw.demands[k].size() != R) throw InvalidModel("demand row length must equal class count");
        if (raw.multiplicities[k] < 1) throw InvalidModel("multiplicity must be ≥ 1");
        bool any_positive = false;
        for (const auto& d : raw.demands[k]) {
            if (sgn(d) < 0) throw InvalidModel("demands must be ≥ 0");
            any_positive = any_positive || sgn(d) > 0;
        }
        if (!any_positive) throw InvalidModel("queue with all-zero demands");
    }
    for (std::size_t r = 0; r < R; ++r) {
        if (sgn(raw.think_times[r]) < 0) throw InvalidModel("think times must be ≥ 0");
        if (raw.populations[r] < 0) throw InvalidModel("populations must be ≥ 0");
    }
    return ValidatedModel(std::move(raw));
}

/// Multiplies every demand and think time by c > 0.
inline ValidatedModel scale_model(const ValidatedModel& model, const ExactScalar& c) {
    if (sgn(c) <= 0) throw NonPositiveScale("scale factor must be > 0, got " + to_string(c));
    NetworkModel raw = model.raw();
    for (auto& row : raw.demands) {
        for (auto& d : row) d *= c;
    }
    for (auto& z : raw.think_times) z *= c;
    return validate_model(std::move(raw));
}

/// Same network restricted to its first `classes` classes.
inline ValidatedModel restrict_classes(const ValidatedModel& model, std::size_t classes) {
    if (classes < 1 || classes > model.R()) throw InvalidModel("cannot restrict to " + std::to_string(classes) + " classes");
    NetworkModel raw = model.raw();
    for (auto& row : raw.demands) row.resize(classes);
    raw.think_times.resize(classes);
    raw.populations.resize(classes);
    // A queue whose positive demands all belonged to dropped classes becomes a
    // zero-demand station. It contributes a factor of one, so the restricted
    // network is still well defined even though validate_model would reject it.
    return ValidatedModel(std::move(raw));
}

inline ValidatedModel with_population(const ValidatedModel& model, IntVector population) {
    NetworkModel raw = model.raw();
    raw.populations = std::move(population);
    return validate_model(std::move(raw));
}

/// Identifies the normalizing constant G(mult, pop). Population entries may be
/// negative while relations are being generated.
struct GIndex {
    IntVector mult;
    IntVector pop;

    auto operator<=>(const GIndex&) const = default;
    bool operator==(const GIndex&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const GIndex& g) {
    auto put = [&](const IntVector& v) {
        os << '(';
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << ')';
    };
    os << "G";
    put(g.mult);
    put(g.pop);
    return os;
}

inline IntVector unit(std::size_t size, std::size_t at, int value = 1) {
    IntVector v(size, 0);
    v[at] = value;
    return v;
}

inline IntVector operator+(IntVector a, const IntVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline IntVector operator-(IntVector a, const IntVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline bool any_negative(const IntVector& v) {
    for (int x : v) {
        if (x < 0) return true;
    }
    return false;
}

inline bool all_zero(const IntVector& v) {
    for (int x : v) {
        if (x != 0) return false;
    }
    return true;
}

inline int total(const IntVector& v) { return std::accumulate(v.begin(), v.end(), 0); }

/// Mean performance indices. Q, U and residence times are per replica of
/// each distinct queue.
struct MeanIndices {
    std::vector<ExactScalar> X;
    std::vector<std::vector<ExactScalar>> Q;
    std::vector<std::vector<ExactScalar>> U;
    std::vector<ExactScalar> Rr;
    std::vector<std::vector<ExactScalar>> Rkr;

    bool operator==(const MeanIndices&) const = default;
};

}  // namespace mbmom

#endif  // MBMOM_MODEL_HPP
