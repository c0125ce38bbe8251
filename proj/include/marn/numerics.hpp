#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace marn {

using cd = std::complex<double>;

/// Raised for contract violations by the caller (bad dimensions, bad parameters).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot produce a finite answer
/// (degenerate channel draw, singular matrix, non-finite input).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief Small dense complex matrix, row-major.
 *
 * Sized for the handful-of-antennas problems of this library (at most a few
 * dozen rows), so every operation is a plain loop over a std::vector.
 * Column vectors are n x 1 matrices.
 */
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    /// Row-major initializer; the list length must equal rows*cols.
    CMatrix(std::size_t rows, std::size_t cols, std::initializer_list<cd> values);
    CMatrix(std::size_t rows, std::size_t cols, std::vector<cd> values);

    static CMatrix identity(std::size_t n);
    static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }
    static CMatrix column(std::span<const cd> values);
    static CMatrix diagonal(std::span<const cd> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    cd& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cd& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    /// Linear access, intended for column vectors.
    cd& operator[](std::size_t i) { return data_[i]; }
    const cd& operator[](std::size_t i) const { return data_[i]; }

    std::span<cd> values() noexcept { return data_; }
    std::span<const cd> values() const noexcept { return data_; }

    CMatrix adjoint() const;
    CMatrix transpose() const;
    CMatrix conjugate() const;

    CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const CMatrix& b);
    CMatrix col(std::size_t c) const { return block(0, c, rows_, 1); }

    double frobenius_norm() const;
    double frobenius_norm_sq() const;
    double max_abs() const;
    cd trace() const;
    bool all_finite() const;

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cd s);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cd> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(CMatrix a, cd s);
CMatrix operator*(cd s, CMatrix a);

/// a* b without forming the adjoint.
CMatrix adjoint_times(const CMatrix& a, const CMatrix& b);
/// a b* without forming the adjoint.
CMatrix times_adjoint(const CMatrix& a, const CMatrix& b);
/// [a b]
CMatrix hstack(const CMatrix& a, const CMatrix& b);
/// [a; b]
CMatrix vstack(const CMatrix& a, const CMatrix& b);
/// diag(a, b)
CMatrix block_diag(const CMatrix& a, const CMatrix& b);

/// x* y for column vectors.
cd inner(const CMatrix& x, const CMatrix& y);

/// Orthogonal projector onto a subspace; holds an n x n Hermitian idempotent matrix.
struct Projector {
    CMatrix matrix;

    std::size_t dim() const { return matrix.rows(); }
    /// Dimension of the range, i.e. round(trace).
    std::size_t rank() const;
};

/// True iff m = [[a, -conj(b)], [b, conj(a)]] within tol, entrywise.
bool is_alamouti(const CMatrix& m, double tol = 1e-10);

/// Builds [[a, -conj(b)], [b, conj(a)]].
CMatrix alamouti(cd a, cd b);

/// Orthonormal basis of the column space, columns whose residual after
/// Gram-Schmidt falls below 1e-10 of the largest column norm are dropped.
CMatrix orthonormal_basis(const CMatrix& columns);

/// Projector onto the orthogonal complement of span(columns). columns is n x k, k < n.
Projector null_space_projector(const CMatrix& columns);

/// Projector onto span(columns).
Projector range_projector(const CMatrix& columns);

/**
 * @brief Cached LDL* factorization of a Hermitian positive-definite matrix.
 *
 * When the smallest pivot is below 1e-12 of the largest, the matrix is
 * refactored with a diagonal load of 1e-12 * trace/n and loaded() reports it.
 */
class HermitianFactor {
public:
    explicit HermitianFactor(const CMatrix& a, bool allow_loading = true);

    std::size_t dim() const { return n_; }
    bool loaded() const { return loaded_; }

    CMatrix solve(const CMatrix& b) const;
    /// Returns L^{-1} b where a = L L*.
    CMatrix whiten(const CMatrix& b) const;
    /// x* a^{-1} x for a column vector x.
    double quadratic_form(const CMatrix& x) const;

private:
    bool factor(const CMatrix& a, bool check_ratio);

    std::size_t n_ = 0;
    CMatrix l_;  // unit lower triangular
    std::vector<double> d_;
    bool loaded_ = false;
};

struct SolveResult {
    CMatrix x;
    bool loaded = false;
};

/// Solves a x = b for Hermitian positive-definite a.
SolveResult hermitian_solve(const CMatrix& a, const CMatrix& b);

/**
 * @brief Instantaneous SNR through the matrix-inversion-lemma expansion.
 *
 * bb = B B*, g = B G_1 and s = sum|f_i|^2 / c_1^2. Returns
 * y - y^2 / (s + y) with y = g_1* (BB*)^{-1} g_1, where g_1 is the first
 * column of g. Equals g_1* (bb + g g* / s)^{-1} g_1 whenever g^* bb^{-1} g
 * is diagonal (the Alamouti case). No diagonal loading: a singular bb throws.
 */
double matrix_inversion_lemma_check(const CMatrix& bb, const CMatrix& g, double s);

std::string to_string(const CMatrix& m);

}  // namespace marn
