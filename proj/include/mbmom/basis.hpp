#ifndef MBMOM_BASIS_HPP
#define MBMOM_BASIS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "model.hpp"
#include "scalar.hpp"

namespace mbmom {

/// All non-negative M-vectors with the given component sum, in colexicographic
/// order of the multisets they encode (compare delta_M first, then delta_{M-1}, ...).
inline std::vector<IntVector> multisets(std::size_t M, int size) {
    std::vector<IntVector> out;
    if (size < 0) return out;
    IntVector d(M, 0);
    auto fill = [&](auto&& self, std::size_t k, int left) -> void {
        if (k + 1 == M) {
            d[k] = left;
            out.push_back(d);
            return;
        }
        for (int v = left; v >= 0; --v) {
            d[k] = v;
            self(self, k + 1, left - v);
        }
    };
    if (M == 0) {
        if (size == 0) out.push_back(d);
        return out;
    }
    fill(fill, 0, size);
    std::sort(out.begin(), out.end(), [](const IntVector& a, const IntVector& b) {
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    });
    return out;
}

struct BasisEntry {
    IntVector delta;
    std::size_t variant;  // 0 -> N, s -> N - 1_s (s = 1..R-1)

    bool operator==(const BasisEntry&) const = default;
};

/// Ordered index of the level-l basis: multiplicity increments delta with
/// |delta| in {l-1, l}, each crossed with the R population variants
/// N, N-1_1, ..., N-1_{R-1}. Entries of one delta are contiguous, variants in
/// that order; layer l precedes layer l-1.
///
/// An extended layout also carries the lower layers l-2, ..., lowest after the
/// core entries. Solvers use them to keep the constants of the original
/// network (layer 0) and its one-queue extensions (layer 1) available.
class BasisLayout {
public:
    BasisLayout(std::size_t M, std::size_t R, int level, std::optional<int> lowest_layer = std::nullopt)
        : M_(M), R_(R), level_(level), lowest_(lowest_layer.value_or(level - 1)) {
        if (M < 1 || R < 1 || level < 1) throw std::invalid_argument("basis layout needs M, R, l >= 1");
        if (lowest_ < 0 || lowest_ > level - 1) throw std::invalid_argument("lowest layer out of range");
        for (int layer = level; layer >= lowest_; --layer) {
            layer_begin_.push_back(deltas_.size());
            for (auto& d : multisets(M, layer)) {
                position_.emplace(d, deltas_.size());
                deltas_.push_back(std::move(d));
                layers_.push_back(layer);
            }
        }
        layer_begin_.push_back(deltas_.size());
    }

    std::size_t M() const { return M_; }
    std::size_t R() const { return R_; }
    int level() const { return level_; }
    int lowest_layer() const { return lowest_; }

    /// Entries of layers l and l-1.
    std::size_t core_size() const { return layer_begin_[2] * R_; }
    std::size_t size() const { return deltas_.size() * R_; }

    const std::vector<IntVector>& deltas() const { return deltas_; }
    int layer(std::size_t delta_pos) const { return layers_[delta_pos]; }

    /// Delta positions [first, last) of a layer.
    std::pair<std::size_t, std::size_t> layer_range(int layer) const {
        if (layer > level_ || layer < lowest_) return {0, 0};
        std::size_t i = static_cast<std::size_t>(level_ - layer);
        return {layer_begin_[i], layer_begin_[i + 1]};
    }

    std::optional<std::size_t> delta_position(const IntVector& delta) const {
        auto it = position_.find(delta);
        if (it == position_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t position(std::size_t delta_pos, std::size_t variant) const { return delta_pos * R_ + variant; }

    BasisEntry entry(std::size_t i) const { return {deltas_[i / R_], i % R_}; }

    std::vector<BasisEntry> entries() const {
        std::vector<BasisEntry> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) out.push_back(entry(i));
        return out;
    }

    /// Population the entry's constant is evaluated at, given the anchor N.
    IntVector population(const IntVector& anchor, std::size_t variant) const {
        IntVector p = anchor;
        if (variant > 0) --p[variant - 1];
        return p;
    }

private:
    std::size_t M_;
    std::size_t R_;
    int level_;
    int lowest_;
    std::vector<IntVector> deltas_;
    std::vector<int> layers_;
    std::vector<std::size_t> layer_begin_;
    std::map<IntVector, std::size_t> position_;
};

inline BasisLayout enumerate_basis(std::size_t M, std::size_t R, int l) { return BasisLayout(M, R, l); }

namespace detail {

inline void check_params(long M, long R, long l) {
    if (M < 1 || R < 1 || l < 1) throw std::invalid_argument("counting functions need M, R, l >= 1");
}

inline void check_branching(long M, long B) {
    if (B < 1 || B > M) throw std::invalid_argument("branching factor must satisfy 1 <= B <= M");
}

}  // namespace detail

/// Layer-l constants per step: C(M+l-1, l) R.
inline std::uint64_t unknown_count(long M, long R, long l) {
    detail::check_params(M, R, l);
    return binomial_u64(M + l - 1, l) * static_cast<std::uint64_t>(R);
}

/// M CEs and R-1 PCs for each of the C(M+l-2, l-1) layer-(l-1) constants.
inline std::uint64_t count_ce_pc(long M, long R, long l) {
    detail::check_params(M, R, l);
    return binomial_u64(M + l - 2, l - 1) * static_cast<std::uint64_t>(M + R - 1);
}

/// GCEs on layer-l constants that do not coincide with a CE, when the GCEs
/// of the B highest-indexed queues are used. A GCE removing queue k from
/// m + delta is a CE exactly when delta_k >= 1.
inline std::uint64_t count_gce_not_ce(long M, long l, long B) {
    detail::check_params(M, 1, l);
    detail::check_branching(M, B);
    if (B == M) return binomial_u64(M + l - 2, l) * static_cast<std::uint64_t>(M);
    if (B == 1) return binomial_u64(M + l - 2, l);
    std::uint64_t count = 0;
    for (const auto& d : multisets(static_cast<std::size_t>(M), static_cast<int>(l))) {
        for (long k = M - B; k < M; ++k) count += d[static_cast<std::size_t>(k)] == 0 ? 1 : 0;
    }
    return count;
}

inline int min_level(long M, long R, long B) {
    detail::check_branching(M, B);
    return static_cast<int>(std::max<long>(1, R - B));
}

struct EquationBalance {
    std::uint64_t equations;
    std::uint64_t unknowns;

    bool operator==(const EquationBalance&) const = default;
};

inline EquationBalance equation_balance(long M, long R, long l, long B) {
    return {count_ce_pc(M, R, l) + count_gce_not_ce(M, l, B), unknown_count(M, R, l)};
}

/// Basis level at each depth of the recursion tree: a node at depth d keeps
/// M-d queues and can use min(B, M-d) GCEs, so l(d) = max{1, R - min(B, M-d)}.
/// For B = M this is max{1, R-M+d}; for B = 1 it is the constant max{1, R-1}.
struct LevelSchedule {
    long M;
    long R;
    long B;

    int level(long depth) const {
        const long queues = M - depth;
        return static_cast<int>(std::max<long>(1, R - std::min(B, std::max<long>(queues, 1))));
    }
};

}  // namespace mbmom

#endif  // MBMOM_BASIS_HPP
