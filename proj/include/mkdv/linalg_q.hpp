// linalg_q.hpp -- dense exact linear algebra over Q with a right hand side
// living in an arbitrary Q-vector space (rationals or polynomials).
#ifndef MKDV_LINALG_Q_HPP
#define MKDV_LINALG_Q_HPP

#include <optional>
#include <vector>

#include "mkdv/errors.hpp"
#include "mkdv/rational.hpp"

namespace mkdv {

// Solves A x = b by Gaussian elimination, A rational with full column rank
// expected.  V needs +, -, scalar multiplication by Rat and an is_zero-like
// predicate supplied by the caller.
//
// Returns nullopt when the system is inconsistent; throws on rank
// deficiency (ambiguous solution), which callers treat as a logic error.
template <class V, class IsZero>
std::optional<std::vector<V>> solve_exact(std::vector<std::vector<Rat>> A,
                                          std::vector<V> b, const V& zero,
                                          IsZero is_zero) {
    const std::size_t rows = A.size();
    const std::size_t cols = rows ? A[0].size() : 0;
    if (b.size() != rows) throw InvalidArgument("solve_exact: shape mismatch");

    std::vector<std::size_t> pivot_row(cols, SIZE_MAX);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = SIZE_MAX;
        for (std::size_t r = rank; r < rows; ++r)
            if (A[r][c] != 0) {
                p = r;
                break;
            }
        if (p == SIZE_MAX) continue;
        std::swap(A[p], A[rank]);
        std::swap(b[p], b[rank]);
        Rat inv = 1 / A[rank][c];
        for (std::size_t j = c; j < cols; ++j) A[rank][j] *= inv;
        b[rank] = b[rank] * inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || A[r][c] == 0) continue;
            Rat f = A[r][c];
            for (std::size_t j = c; j < cols; ++j) A[r][j] -= f * A[rank][j];
            b[r] = b[r] - b[rank] * f;
        }
        pivot_row[c] = rank;
        ++rank;
    }
    // Inconsistent rows: zero coefficients, nonzero right hand side.
    for (std::size_t r = rank; r < rows; ++r)
        if (!is_zero(b[r])) return std::nullopt;
    for (std::size_t c = 0; c < cols; ++c)
        if (pivot_row[c] == SIZE_MAX)
            throw Unsolvable("solve_exact: underdetermined system");
    std::vector<V> x(cols, zero);
    for (std::size_t c = 0; c < cols; ++c) x[c] = b[pivot_row[c]];
    return x;
}

} // namespace mkdv

#endif
