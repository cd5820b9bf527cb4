#pragma once

#include <functional>
#include <vector>

#include "cmatrix.hpp"

namespace orad {

/// Full spectral decomposition of a Hermitian matrix.
/// values are sorted descending; vectors holds the matching orthonormal
/// eigenvectors as columns, so A = V diag(values) V*.
struct EigenDecomposition {
    std::vector<double> values;
    CMatrix vectors;

    CMatrix reconstruct() const;
    /// V diag(f(values)) V* without touching the input matrix again.
    CMatrix map(const std::function<double(double)>& f) const;
};

/// Cyclic Jacobi on a Hermitian matrix. Rejects inputs that are not
/// Hermitian within 1e-12 * max(1, max|a_ij|).
EigenDecomposition hermitian_eig(const CMatrix& a);

/// Eigenvalues only (descending); same iteration, no vector accumulation.
std::vector<double> hermitian_eigvalues(const CMatrix& a);

/// sqrt(lambda_max(T*T)); 0 for the zero matrix.
double operator_norm(const CMatrix& t);

/// |T| = (T*T)^(1/2) by spectral mapping, eigenvalues clamped at 0.
CMatrix abs_op(const CMatrix& t);

/// Spectral mapping f(A) of a Hermitian PSD matrix. Eigenvalues in
/// [-1e-10*||A||, 0) are clamped to 0; more negative is an error.
/// f must return finite values on the spectrum.
CMatrix psd_fun(const CMatrix& a, const std::function<double(double)>& f);

/// t -> t^p with the convention t^0 = 1 everywhere (including t = 0).
std::function<double(double)> power_fn(double p);

namespace detail {

/// In-place cyclic Jacobi kernel on a Hermitian matrix stored row-major in a.
/// If v is non-null it must hold the identity on entry and accumulates the
/// eigenvector matrix. Returns the number of sweeps used.
int jacobi_hermitian(Complex* a, Complex* v, int n);

/// Largest eigenvalue of the Hermitian matrix in buf (destroyed). Uses
/// Householder tridiagonalization plus Sturm bisection; exact to a few ulps
/// of the matrix scale and much cheaper than a full decomposition.
double jacobi_lambda_max(Complex* buf, int n);

} // namespace detail

} // namespace orad
