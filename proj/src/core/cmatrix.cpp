#include "cmatrix.hpp"

#include <algorithm>
#include <cmath>

namespace orad {

namespace {

void check_dim(int n) {
    require(n >= 1 && n <= kMaxDim, ErrCode::dimension,
            "matrix dimension must be in [1," + std::to_string(kMaxDim) + "], got " + std::to_string(n));
}

} // namespace

CMatrix::CMatrix(int n) : n_(n) {
    check_dim(n);
    entries_.assign(static_cast<std::size_t>(n) * n, Complex{0.0, 0.0});
}

CMatrix::CMatrix(int n, std::vector<Complex> entries) : n_(n), entries_(std::move(entries)) {
    check_dim(n);
    require(entries_.size() == static_cast<std::size_t>(n) * n, ErrCode::dimension,
            "matrix data is not square: expected " + std::to_string(n * n) + " entries, got " +
                std::to_string(entries_.size()));
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    n_ = static_cast<int>(rows.size());
    check_dim(n_);
    entries_.reserve(static_cast<std::size_t>(n_) * n_);
    for (const auto& row : rows) {
        require(static_cast<int>(row.size()) == n_, ErrCode::dimension, "matrix rows have unequal length");
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

CMatrix CMatrix::identity(int n) {
    CMatrix I(n);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1.0;
    return I;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r.at(j, i) = std::conj(at(i, j));
    return r;
}

Complex CMatrix::trace() const {
    Complex t{0.0, 0.0};
    for (int i = 0; i < n_; ++i) t += at(i, i);
    return t;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : entries_) s += std::norm(z);
    return std::sqrt(s);
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const Complex& z : entries_) m = std::max(m, std::abs(z));
    return m;
}

bool CMatrix::is_finite() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool CMatrix::is_hermitian(double tol) const {
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j)
            if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
    return true;
}

CMatrix& CMatrix::operator+=(const CMatrix& rhs) {
    require(n_ == rhs.n_, ErrCode::dimension, "matrix addition with mismatched dimensions");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& rhs) {
    require(n_ == rhs.n_, ErrCode::dimension, "matrix subtraction with mismatched dimensions");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(Complex c) {
    for (Complex& z : entries_) z *= c;
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    require(a.n_ == b.n_, ErrCode::dimension, "matrix product with mismatched dimensions");
    const int n = a.n_;
    CMatrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const Complex aik = a.at(i, k);
            if (aik == Complex{0.0, 0.0}) continue;
            for (int j = 0; j < n; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    }
    return r;
}

bool approx_equal(const CMatrix& a, const CMatrix& b, double tol_abs) {
    if (a.dim() != b.dim()) return false;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (std::abs(a.at(i, j) - b.at(i, j)) > tol_abs) return false;
    return true;
}

CMatrix matrix_power(const CMatrix& a, int k) {
    require(k >= 0, ErrCode::invalid_argument, "matrix power exponent must be >= 0");
    CMatrix r = CMatrix::identity(a.dim());
    for (int i = 0; i < k; ++i) r = r * a;
    return r;
}

CVector operator*(const CMatrix& a, const CVector& x) {
    require(static_cast<int>(x.size()) == a.dim(), ErrCode::dimension, "matrix-vector product dimension mismatch");
    const int n = a.dim();
    CVector y(static_cast<std::size_t>(n), Complex{0.0, 0.0});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) y[static_cast<std::size_t>(i)] += a.at(i, j) * x[static_cast<std::size_t>(j)];
    return y;
}

Complex inner(const CVector& x, const CVector& y) {
    require(x.size() == y.size(), ErrCode::dimension, "inner product dimension mismatch");
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
    return s;
}

double vec_norm(const CVector& x) {
    double s = 0.0;
    for (const Complex& z : x) s += std::norm(z);
    return std::sqrt(s);
}

CVector normalized(const CVector& x) {
    const double n = vec_norm(x);
    require(n > 0.0, ErrCode::invalid_argument, "cannot normalize zero vector");
    CVector y = x;
    for (Complex& z : y) z /= n;
    return y;
}

void require_finite(const CMatrix& a, const char* who) {
    require(a.dim() >= 1, ErrCode::dimension, std::string(who) + ": empty matrix");
    require(a.is_finite(), ErrCode::invalid_argument, std::string(who) + ": matrix has non-finite entries");
}

} // namespace orad
