#ifndef MBMOM_COSTMODEL_HPP
#define MBMOM_COSTMODEL_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "scalar.hpp"

namespace mbmom {

enum class CostAlgorithm { MoM, MB_B1, MB_BM };

inline const char* to_string(CostAlgorithm a) {
    switch (a) {
        case CostAlgorithm::MoM: return "MoM";
        case CostAlgorithm::MB_B1: return "MB-B1";
        case CostAlgorithm::MB_BM: return "MB-BM";
    }
    return "?";
}

/// Case-insensitive: "mb-bm" and "MB-BM" name the same algorithm.
inline CostAlgorithm parse_cost_algorithm(std::string_view name) {
    auto same = [](std::string_view a, std::string_view b) {
        return std::ranges::equal(a, b, [](char x, char y) {
            return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
        });
    };
    for (auto a : {CostAlgorithm::MoM, CostAlgorithm::MB_B1, CostAlgorithm::MB_BM}) {
        if (same(name, to_string(a))) return a;
    }
    throw ParseError("unknown cost algorithm '" + std::string(name) + "' (expected MoM, MB-B1 or MB-BM)");
}

struct CostReport {
    CostAlgorithm algorithm;
    long M;
    long R;
    long N;
    ExactScalar time_per_iteration;
    ExactScalar space;

    bool operator==(const CostReport&) const = default;
};

namespace detail {

inline void check_cost_params(long M, long R, long N) {
    if (M < 1 || R < 1 || N < 1) throw std::invalid_argument("cost parameters need M, R, N >= 1");
}

inline void check_cost_branching(long M, long B) {
    if (B == 1 || B == M) return;
    throw UnsupportedB("cost formulas cover B = 1 and B = M only, got B = " + std::to_string(B));
}

/// ln(x) at double precision, carried exactly into the rational result.
inline ExactScalar log_term(long x) { return ExactScalar(std::log(static_cast<double>(x))); }

inline ExactScalar layer_size(long M, long R, long l) { return ExactScalar(binomial(M + l - 1, l) * R); }

inline long level_at(long M, long R, long B, long d) {
    return std::max<long>(1, R - std::min(B, M - d));
}

}  // namespace detail

/// Storage of one normalizing constant: N ln(M+N) digits.
inline ExactScalar storage_per_constant(long M, long N) { return N * detail::log_term(M + N); }

/// Exact-algebra overhead of one step: N ln(M_eff+N) C(M_eff+l-1, l) R.
inline ExactScalar sexact(long M_eff, long R, long N, long l) {
    detail::check_cost_params(M_eff, R, N);
    if (l < 1) throw std::invalid_argument("level must be >= 1");
    return storage_per_constant(M_eff, N) * detail::layer_size(M_eff, R, l);
}

inline ExactScalar time_mom(long M, long R, long N) {
    detail::check_cost_params(M, R, N);
    ExactScalar order = detail::layer_size(M, R, R);
    return order * order * sexact(M, R, N, R);
}

inline ExactScalar time_mb(long M, long R, long N, long B) {
    detail::check_cost_params(M, R, N);
    detail::check_cost_branching(M, B);
    ExactScalar sum = 0;
    for (long d = 0; d < M; ++d) {
        const long l = detail::level_at(M, R, B, d);
        ExactScalar order = detail::layer_size(M - d, R, l);
        ExactScalar width = B == 1 ? ExactScalar(1) : ExactScalar(binomial(M, M - d));
        sum += width * order * order * sexact(M - d, R, N, l);
    }
    return sum;
}

inline ExactScalar space_mom(long M, long R, long N) {
    detail::check_cost_params(M, R, N);
    ExactScalar order = detail::layer_size(M, R, R);
    return 2 * order * order + 3 * detail::layer_size(M, R, R - 1) * storage_per_constant(M, N);
}

inline ExactScalar space_mb(long M, long R, long N, long B) {
    detail::check_cost_params(M, R, N);
    detail::check_cost_branching(M, B);
    if (B == 1) {
        const long l = detail::level_at(M, R, 1, 0);
        ExactScalar order = detail::layer_size(M, R, l);
        return 2 * order * order + 3 * order * storage_per_constant(M, N);
    }
    // All nodes of one depth are alive together; keep the widest depth.
    ExactScalar best = 0;
    for (long d = 0; d < M; ++d) {
        const long l = detail::level_at(M, R, B, d);
        ExactScalar order = detail::layer_size(M - d, R, l);
        ExactScalar s = ExactScalar(binomial(M, M - d)) *
                        (2 * order * order + 2 * order * storage_per_constant(M - d, N));
        best = std::max(best, s);
    }
    return best;
}

inline CostReport cost_report(CostAlgorithm a, long M, long R, long N) {
    switch (a) {
        case CostAlgorithm::MoM: return {a, M, R, N, time_mom(M, R, N), space_mom(M, R, N)};
        case CostAlgorithm::MB_B1: return {a, M, R, N, time_mb(M, R, N, 1), space_mb(M, R, N, 1)};
        case CostAlgorithm::MB_BM: return {a, M, R, N, time_mb(M, R, N, M), space_mb(M, R, N, M)};
    }
    throw std::invalid_argument("unknown algorithm");
}

/// One report per (algorithm, M, R), algorithms in the order given, then M, then R.
inline std::vector<CostReport> emit_surface(const std::vector<long>& Ms, const std::vector<long>& Rs, long N,
                                            const std::vector<CostAlgorithm>& algorithms) {
    if (Ms.empty() || Rs.empty() || algorithms.empty()) throw std::invalid_argument("cost grid is empty");
    std::vector<CostReport> out;
    out.reserve(Ms.size() * Rs.size() * algorithms.size());
    for (auto a : algorithms) {
        for (long M : Ms) {
            for (long R : Rs) out.push_back(cost_report(a, M, R, N));
        }
    }
    return out;
}

inline void write_cost_csv(std::ostream& os, const std::vector<CostReport>& rows) {
    os << "algorithm,M,R,N,time,space\n";
    for (const auto& r : rows) {
        os << to_string(r.algorithm) << ',' << r.M << ',' << r.R << ',' << r.N << ','
           << to_decimal(r.time_per_iteration, 3) << ',' << to_decimal(r.space, 3) << '\n';
    }
}

}  // namespace mbmom

#endif  // MBMOM_COSTMODEL_HPP
