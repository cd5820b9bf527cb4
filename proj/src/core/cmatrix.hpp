#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include "error.hpp"

namespace orad {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline constexpr int kMaxDim = 64;

/// Dense square complex matrix, row-major. Dimensions 1..64.
/// Equality is always tolerance-based (approx_equal); there is no operator==.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(int n);
    CMatrix(int n, std::vector<Complex> entries);
    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static CMatrix identity(int n);

    int dim() const { return n_; }
    Complex& at(int r, int c) { return entries_[static_cast<std::size_t>(r) * n_ + c]; }
    const Complex& at(int r, int c) const { return entries_[static_cast<std::size_t>(r) * n_ + c]; }

    std::span<const Complex> data() const { return entries_; }
    std::span<Complex> data() { return entries_; }

    CMatrix adjoint() const;
    Complex trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool is_finite() const;
    bool is_hermitian(double tol) const;

    CMatrix& operator+=(const CMatrix& rhs);
    CMatrix& operator-=(const CMatrix& rhs);
    CMatrix& operator*=(Complex c);

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(Complex c, CMatrix a) { return a *= c; }
    friend CMatrix operator*(CMatrix a, Complex c) { return a *= c; }
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

private:
    int n_ = 0;
    std::vector<Complex> entries_;
};

bool approx_equal(const CMatrix& a, const CMatrix& b, double tol_abs);

CMatrix matrix_power(const CMatrix& a, int k); // k >= 0, k = 0 gives identity

CVector operator*(const CMatrix& a, const CVector& x);

/// Inner product, linear in the first argument: <x,y> = sum x_i * conj(y_i).
Complex inner(const CVector& x, const CVector& y);
double vec_norm(const CVector& x);
CVector normalized(const CVector& x);

void require_finite(const CMatrix& a, const char* who);

} // namespace orad
