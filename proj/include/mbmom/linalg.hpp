#ifndef MBMOM_LINALG_HPP
#define MBMOM_LINALG_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "scalar.hpp"

namespace mbmom {

/// Dense row-major rational matrix.
class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    ExactMatrix(std::initializer_list<std::initializer_list<ExactScalar>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    ExactScalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const ExactScalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<ExactScalar> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const ExactScalar> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    bool operator==(const ExactMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<ExactScalar> data_;
};

inline ExactVector matvec(const ExactMatrix& A, std::span<const ExactScalar> x) {
    if (A.cols() != x.size()) {
        throw DimensionMismatch("matvec: " + std::to_string(A.cols()) + " columns vs vector of " +
                                std::to_string(x.size()));
    }
    ExactVector out(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        ExactScalar acc = 0;
        for (std::size_t j = 0; j < A.cols(); ++j) {
            if (!is_zero(A(i, j))) acc += A(i, j) * x[j];
        }
        out[i] = acc;
    }
    return out;
}

inline ExactScalar dot(std::span<const ExactScalar> a, std::span<const ExactScalar> b) {
    ExactScalar acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!is_zero(a[i])) acc += a[i] * b[i];
    }
    return acc;
}

namespace detail {

inline void check_square(const ExactMatrix& A, std::size_t b_len) {
    if (A.rows() != A.cols()) throw DimensionMismatch("coefficient matrix is not square");
    if (A.rows() != b_len) throw DimensionMismatch("right-hand side length differs from matrix order");
}

}  // namespace detail

/// Solves A x = b exactly by fraction-free (Bareiss) elimination. Rows are
/// scaled to integers first; pivots are the first nonzero entry of each column.
inline ExactVector solve_exact(const ExactMatrix& A, std::span<const ExactScalar> b) {
    detail::check_square(A, b.size());
    const std::size_t n = A.rows();
    const std::size_t w = n + 1;
    std::vector<ExactInteger> M(n * w);
    for (std::size_t i = 0; i < n; ++i) {
        ExactInteger scale = 1;
        for (std::size_t j = 0; j < n; ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), A(i, j).get_den_mpz_t());
        mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), b[i].get_den_mpz_t());
        for (std::size_t j = 0; j < n; ++j) M[i * w + j] = A(i, j).get_num() * (scale / A(i, j).get_den());
        M[i * w + n] = b[i].get_num() * (scale / b[i].get_den());
    }

    ExactInteger previous = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && M[pivot * w + k] == 0) ++pivot;
        if (pivot == n) throw SingularMatrix("matrix of order " + std::to_string(n) + " is singular");
        if (pivot != k) {
            for (std::size_t j = 0; j < w; ++j) std::swap(M[pivot * w + j], M[k * w + j]);
        }
        const ExactInteger& akk = M[k * w + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            ExactInteger& aik = M[i * w + k];
            for (std::size_t j = k + 1; j < w; ++j) {
                ExactInteger& aij = M[i * w + j];
                aij = aij * akk - aik * M[k * w + j];
                mpz_divexact(aij.get_mpz_t(), aij.get_mpz_t(), previous.get_mpz_t());
            }
            aik = 0;
        }
        previous = akk;
    }

    ExactVector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        ExactScalar acc(M[ii * w + n]);
        for (std::size_t j = ii + 1; j < n; ++j) {
            if (M[ii * w + j] != 0) acc -= ExactScalar(M[ii * w + j]) * x[j];
        }
        x[ii] = acc / ExactScalar(M[ii * w + ii]);
    }
    return x;
}

/// Plain Gauss-Jordan elimination over the rationals. Kept as an independent
/// route for cross-checking solve_exact.
inline ExactVector solve_gauss(const ExactMatrix& A, std::span<const ExactScalar> b) {
    detail::check_square(A, b.size());
    const std::size_t n = A.rows();
    ExactMatrix M(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) M(i, j) = A(i, j);
        M(i, n) = b[i];
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && is_zero(M(pivot, k))) ++pivot;
        if (pivot == n) throw SingularMatrix("matrix of order " + std::to_string(n) + " is singular");
        if (pivot != k) {
            for (std::size_t j = 0; j <= n; ++j) std::swap(M(pivot, j), M(k, j));
        }
        ExactScalar inv = 1 / M(k, k);
        for (std::size_t j = k; j <= n; ++j) M(k, j) *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || is_zero(M(i, k))) continue;
            ExactScalar f = M(i, k);
            for (std::size_t j = k; j <= n; ++j) M(i, j) -= f * M(k, j);
        }
    }
    ExactVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = M(i, n);
    return x;
}

/// One equation of an over-determined pool: coeffs · x = rhs.
struct PoolRow {
    ExactVector coeffs;
    ExactScalar rhs;
};

struct SquareSubsystem {
    ExactMatrix A;
    ExactVector b;
    std::vector<std::size_t> rows;  // pool positions, ascending
};

/// Greedy elimination over the pool in pool order: a row is kept when it is
/// independent of the rows kept before it.
inline std::vector<std::size_t> select_independent_rows(std::span<const PoolRow> pool, std::size_t unknowns) {
    struct Reduced {
        std::size_t pivot;
        ExactVector row;  // normalized to 1 at pivot
    };
    std::vector<Reduced> echelon;
    std::vector<std::size_t> chosen;
    for (std::size_t p = 0; p < pool.size() && chosen.size() < unknowns; ++p) {
        if (pool[p].coeffs.size() != unknowns) throw DimensionMismatch("pool row has wrong length");
        ExactVector cand = pool[p].coeffs;
        for (const auto& e : echelon) {
            if (is_zero(cand[e.pivot])) continue;
            ExactScalar f = cand[e.pivot];
            for (std::size_t j = 0; j < unknowns; ++j) {
                if (!is_zero(e.row[j])) cand[j] -= f * e.row[j];
            }
        }
        std::size_t pivot = 0;
        while (pivot < unknowns && is_zero(cand[pivot])) ++pivot;
        if (pivot == unknowns) continue;
        ExactScalar inv = 1 / cand[pivot];
        for (auto& c : cand) c *= inv;
        echelon.push_back({pivot, std::move(cand)});
        chosen.push_back(p);
    }
    return chosen;
}

inline SquareSubsystem select_square_subsystem(std::span<const PoolRow> pool, std::size_t unknowns) {
    if (pool.size() < unknowns) {
        throw RankDeficientPool("pool of " + std::to_string(pool.size()) + " rows cannot determine " +
                                std::to_string(unknowns) + " unknowns");
    }
    auto chosen = select_independent_rows(pool, unknowns);
    if (chosen.size() < unknowns) {
        throw RankDeficientPool("pool has rank " + std::to_string(chosen.size()) + " < " +
                                std::to_string(unknowns) + " unknowns");
    }
    SquareSubsystem out{ExactMatrix(unknowns, unknowns), ExactVector(unknowns), std::move(chosen)};
    for (std::size_t i = 0; i < unknowns; ++i) {
        const auto& src = pool[out.rows[i]];
        for (std::size_t j = 0; j < unknowns; ++j) out.A(i, j) = src.coeffs[j];
        out.b[i] = src.rhs;
    }
    return out;
}

/// Selects a square full-rank subsystem, solves it, and checks that the
/// solution satisfies every row of the pool.
inline ExactVector solve_pool(std::span<const PoolRow> pool, std::size_t unknowns) {
    if (unknowns == 0) return {};
    auto sub = select_square_subsystem(pool, unknowns);
    ExactVector x = solve_exact(sub.A, sub.b);
    std::size_t next = 0;
    for (std::size_t p = 0; p < pool.size(); ++p) {
        if (next < sub.rows.size() && sub.rows[next] == p) {
            ++next;
            continue;
        }
        if (dot(pool[p].coeffs, x) != pool[p].rhs) {
            throw InconsistentPool("solution violates unselected pool row " + std::to_string(p));
        }
    }
    return x;
}

}  // namespace mbmom

#endif  // MBMOM_LINALG_HPP
