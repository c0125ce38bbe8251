#include "marn/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace marn {

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::initializer_list<cd> values)
    : rows_(rows), cols_(cols), data_(values) {
    if (data_.size() != rows * cols) throw UsageError("CMatrix: initializer size mismatch");
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cd> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (data_.size() != rows * cols) throw UsageError("CMatrix: value count mismatch");
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::column(std::span<const cd> values) {
    return CMatrix(values.size(), 1, std::vector<cd>(values.begin(), values.end()));
}

CMatrix CMatrix::diagonal(std::span<const cd> values) {
    CMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

CMatrix CMatrix::transpose() const {
    CMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

CMatrix CMatrix::conjugate() const {
    CMatrix r = *this;
    for (auto& v : r.data_) v = std::conj(v);
    return r;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw UsageError("CMatrix::block out of range");
    CMatrix r(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
    return r;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw UsageError("CMatrix::set_block out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

double CMatrix::frobenius_norm_sq() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return s;
}

double CMatrix::frobenius_norm() const { return std::sqrt(frobenius_norm_sq()); }

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

cd CMatrix::trace() const {
    cd t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

bool CMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cd& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw UsageError("CMatrix: dimension mismatch in +");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw UsageError("CMatrix: dimension mismatch in -");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(cd s) {
    for (auto& v : data_) v *= s;
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(CMatrix a, cd s) { return a *= s; }
CMatrix operator*(cd s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw UsageError("CMatrix: dimension mismatch in *");
    CMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cd aik = a(i, k);
            if (aik == cd{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

CMatrix adjoint_times(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows()) throw UsageError("adjoint_times: dimension mismatch");
    CMatrix r(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k)
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const cd aki = std::conj(a(k, i));
            if (aki == cd{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aki * b(k, j);
        }
    return r;
}

CMatrix times_adjoint(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.cols()) throw UsageError("times_adjoint: dimension mismatch");
    CMatrix r(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.rows(); ++j) {
            cd s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * std::conj(b(j, k));
            r(i, j) = s;
        }
    return r;
}

CMatrix hstack(const CMatrix& a, const CMatrix& b) {
    if (a.empty()) return b;
    if (a.rows() != b.rows()) throw UsageError("hstack: row mismatch");
    CMatrix r(a.rows(), a.cols() + b.cols());
    r.set_block(0, 0, a);
    r.set_block(0, a.cols(), b);
    return r;
}

CMatrix vstack(const CMatrix& a, const CMatrix& b) {
    if (a.empty()) return b;
    if (a.cols() != b.cols()) throw UsageError("vstack: column mismatch");
    CMatrix r(a.rows() + b.rows(), a.cols());
    r.set_block(0, 0, a);
    r.set_block(a.rows(), 0, b);
    return r;
}

CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
    CMatrix r(a.rows() + b.rows(), a.cols() + b.cols());
    r.set_block(0, 0, a);
    r.set_block(a.rows(), a.cols(), b);
    return r;
}

cd inner(const CMatrix& x, const CMatrix& y) {
    if (x.size() != y.size()) throw UsageError("inner: length mismatch");
    cd s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

std::size_t Projector::rank() const {
    return static_cast<std::size_t>(std::lround(matrix.trace().real()));
}

bool is_alamouti(const CMatrix& m, double tol) {
    if (m.rows() != 2 || m.cols() != 2) throw UsageError("is_alamouti: expected a 2x2 matrix");
    return std::abs(m(1, 1) - std::conj(m(0, 0))) <= tol && std::abs(m(0, 1) + std::conj(m(1, 0))) <= tol;
}

CMatrix alamouti(cd a, cd b) { return CMatrix(2, 2, {a, -std::conj(b), b, std::conj(a)}); }

CMatrix orthonormal_basis(const CMatrix& columns) {
    const std::size_t n = columns.rows();
    double max_norm = 0.0;
    for (std::size_t c = 0; c < columns.cols(); ++c) max_norm = std::max(max_norm, columns.col(c).frobenius_norm());
    const double drop = 1e-10 * max_norm;

    CMatrix basis;
    for (std::size_t c = 0; c < columns.cols(); ++c) {
        CMatrix v = columns.col(c);
        // two passes of modified Gram-Schmidt
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t q = 0; q < basis.cols(); ++q) {
                cd proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += std::conj(basis(i, q)) * v[i];
                for (std::size_t i = 0; i < n; ++i) v[i] -= proj * basis(i, q);
            }
        const double norm = v.frobenius_norm();
        if (norm <= drop || norm == 0.0) continue;
        v *= 1.0 / norm;
        basis = hstack(basis, v);
    }
    if (basis.empty()) return CMatrix(n, 0);
    return basis;
}

Projector range_projector(const CMatrix& columns) {
    const CMatrix q = orthonormal_basis(columns);
    if (q.cols() == 0) return {CMatrix(columns.rows(), columns.rows())};
    return {times_adjoint(q, q)};
}

Projector null_space_projector(const CMatrix& columns) {
    if (columns.cols() >= columns.rows())
        throw UsageError("null_space_projector: need fewer columns than rows");
    if (!columns.all_finite()) throw NumericError("null_space_projector: non-finite input");
    Projector p = range_projector(columns);
    p.matrix = CMatrix::identity(columns.rows()) - p.matrix;
    return p;
}

HermitianFactor::HermitianFactor(const CMatrix& a, bool allow_loading) : n_(a.rows()) {
    if (a.rows() != a.cols()) throw UsageError("HermitianFactor: matrix must be square");
    if (!a.all_finite()) throw NumericError("HermitianFactor: non-finite input");
    double asym = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j) asym += 2.0 * std::norm(a(i, j) - std::conj(a(j, i)));
    if (std::sqrt(asym) > 1e-8 * a.frobenius_norm()) throw UsageError("HermitianFactor: matrix is not Hermitian");

    if (factor(a, true)) return;
    if (!allow_loading) throw NumericError("HermitianFactor: matrix is singular or not positive definite");
    const double load = 1e-12 * a.trace().real() / static_cast<double>(n_);
    CMatrix loaded = a;
    for (std::size_t i = 0; i < n_; ++i) loaded(i, i) += load;
    loaded_ = true;
    if (!factor(loaded, false)) throw NumericError("HermitianFactor: matrix not positive definite after loading");
}

bool HermitianFactor::factor(const CMatrix& a, bool check_ratio) {
    l_ = CMatrix::identity(n_);
    d_.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        double dj = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) dj -= std::norm(l_(j, k)) * d_[k];
        if (!(dj > 0.0)) return false;
        d_[j] = dj;
        for (std::size_t i = j + 1; i < n_; ++i) {
            cd s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * std::conj(l_(j, k)) * d_[k];
            l_(i, j) = s / dj;
        }
    }
    if (!check_ratio || n_ == 0) return true;
    const auto [lo, hi] = std::minmax_element(d_.begin(), d_.end());
    return *lo >= 1e-12 * *hi;
}

CMatrix HermitianFactor::solve(const CMatrix& b) const {
    if (b.rows() != n_) throw UsageError("HermitianFactor::solve: dimension mismatch");
    CMatrix x = b;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < i; ++k) x(i, c) -= l_(i, k) * x(k, c);
        for (std::size_t i = 0; i < n_; ++i) x(i, c) /= d_[i];
        for (std::size_t i = n_; i-- > 0;)
            for (std::size_t k = i + 1; k < n_; ++k) x(i, c) -= std::conj(l_(k, i)) * x(k, c);
    }
    return x;
}

CMatrix HermitianFactor::whiten(const CMatrix& b) const {
    if (b.rows() != n_) throw UsageError("HermitianFactor::whiten: dimension mismatch");
    CMatrix x = b;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < i; ++k) x(i, c) -= l_(i, k) * x(k, c);
        for (std::size_t i = 0; i < n_; ++i) x(i, c) /= std::sqrt(d_[i]);
    }
    return x;
}

double HermitianFactor::quadratic_form(const CMatrix& x) const { return whiten(x).frobenius_norm_sq(); }

SolveResult hermitian_solve(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows()) throw UsageError("hermitian_solve: dimension mismatch");
    if (!b.all_finite()) throw NumericError("hermitian_solve: non-finite right-hand side");
    HermitianFactor f(a);
    return {f.solve(b), f.loaded()};
}

double matrix_inversion_lemma_check(const CMatrix& bb, const CMatrix& g, double s) {
    if (bb.rows() != g.rows()) throw UsageError("matrix_inversion_lemma_check: dimension mismatch");
    const HermitianFactor f(bb, false);
    const double y = f.quadratic_form(g.col(0));
    return y - y * y / (s + y);
}

std::string to_string(const CMatrix& m) {
    std::ostringstream os;
    os.precision(6);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i == 0 ? "[" : " ");
        for (std::size_t j = 0; j < m.cols(); ++j) os << ' ' << m(i, j);
        os << (i + 1 == m.rows() ? " ]" : "\n");
    }
    return os.str();
}

}  // namespace marn
