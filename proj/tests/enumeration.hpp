#ifndef MBMOM_TEST_ENUMERATION_HPP
#define MBMOM_TEST_ENUMERATION_HPP

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "mbmom.hpp"

namespace mbmom::testing {

/// Every non-negative M-vector summing to `size`, by odometer over [0, size]^M.
inline std::vector<IntVector> vectors_with_sum(std::size_t M, int size) {
    std::vector<IntVector> out;
    IntVector v(M, 0);
    while (true) {
        if (total(v) == size) out.push_back(v);
        std::size_t i = 0;
        while (i < M && v[i] == size) v[i++] = 0;
        if (i == M) break;
        ++v[i];
    }
    return out;
}

struct EnumeratedCounts {
    std::uint64_t unknowns;
    std::uint64_t ce_pc;
    std::uint64_t gce_not_ce;
};

/// Counts the relations of one level-l step by instantiating them on a
/// concrete network and comparing their normal forms. The GCEs are those of
/// the B highest-indexed queues.
inline EnumeratedCounts enumerate_counts(std::size_t M, std::size_t R, int l, std::size_t B) {
    NetworkModel raw;
    for (std::size_t k = 0; k < M; ++k) {
        raw.demands.emplace_back();
        for (std::size_t r = 0; r < R; ++r) raw.demands.back().emplace_back(static_cast<long>(7 * k + r + 2), static_cast<long>(k + 3 * r + 1));
    }
    raw.think_times.assign(R, 1);
    raw.multiplicities.assign(M, 1);
    raw.populations.assign(R, l + 3);
    const ValidatedModel model = validate_model(raw);
    const IntVector& m = model.multiplicities();
    const IntVector& N = model.population();

    std::set<GIndex> unknowns;
    for (const auto& d : vectors_with_sum(M, l)) {
        unknowns.insert({m + d, N});
        for (std::size_t s = 0; s + 1 < R; ++s) unknowns.insert({m + d, N - unit(R, s)});
    }

    using Form = std::map<GIndex, ExactScalar>;
    std::set<Form> ce_forms;
    std::set<Form> ce_pc_forms;
    for (const auto& d : vectors_with_sum(M, l - 1)) {
        for (std::size_t k = 0; k < M; ++k) {
            auto f = normalized_terms(ce(model, k, {m + d, N}));
            ce_forms.insert(f);
            ce_pc_forms.insert(f);
        }
        for (std::size_t r = 0; r + 1 < R; ++r) ce_pc_forms.insert(normalized_terms(pc(model, r, {m + d, N})));
    }
    std::set<Form> gce_forms;
    for (const auto& d : vectors_with_sum(M, l)) {
        for (std::size_t k = M - B; k < M; ++k) {
            auto f = normalized_terms(gce(model, k, {m + d, N}));
            if (!ce_forms.count(f)) gce_forms.insert(f);
        }
    }
    return {unknowns.size(), ce_pc_forms.size(), gce_forms.size()};
}

}  // namespace mbmom::testing

#endif  // MBMOM_TEST_ENUMERATION_HPP
