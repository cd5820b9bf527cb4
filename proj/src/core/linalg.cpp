#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace orad {

namespace detail {

namespace {

double offdiag_norm(const Complex* a, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s += 2.0 * std::norm(a[static_cast<std::size_t>(i) * n + j]);
    return std::sqrt(s);
}

double frob_norm(const Complex* a, int n) {
    double s = 0.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n) * n; ++i) s += std::norm(a[i]);
    return std::sqrt(s);
}

} // namespace

int jacobi_hermitian(Complex* a, Complex* v, int n) {
    constexpr int kMaxSweeps = 100;
    const double anorm = frob_norm(a, n);
    if (anorm == 0.0) return 0;
    const double stop = 1e-14 * anorm;

    auto idx = [n](int r, int c) { return static_cast<std::size_t>(r) * n + c; };

    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        if (offdiag_norm(a, n) < stop) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = a[idx(p, q)];
                const double m = std::abs(apq);
                if (m == 0.0) continue;
                const double app = a[idx(p, p)].real();
                const double aqq = a[idx(q, q)].real();
                // Phase-absorbed real rotation: apq = m * phase.
                const Complex phase = apq / m;
                const double tau = (aqq - app) / (2.0 * m);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex sp = s * phase;        // J(p,q) = s*phase, J(q,p) = -conj(sp)
                const Complex spc = std::conj(sp);

                // Columns p and q of A <- A J for all rows k.
                for (int k = 0; k < n; ++k) {
                    const Complex akp = a[idx(k, p)];
                    const Complex akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - spc * akq;
                    a[idx(k, q)] = sp * akp + c * akq;
                }
                // Rows p and q of A <- J* A.
                for (int k = 0; k < n; ++k) {
                    const Complex apk = a[idx(p, k)];
                    const Complex aqk = a[idx(q, k)];
                    a[idx(p, k)] = c * apk - sp * aqk;
                    a[idx(q, k)] = spc * apk + c * aqk;
                }
                // Restore exact structure of the rotated 2x2 block.
                a[idx(p, p)] = Complex{app - t * m, 0.0};
                a[idx(q, q)] = Complex{aqq + t * m, 0.0};
                a[idx(p, q)] = Complex{0.0, 0.0};
                a[idx(q, p)] = Complex{0.0, 0.0};

                if (v != nullptr) {
                    for (int k = 0; k < n; ++k) {
                        const Complex vkp = v[idx(k, p)];
                        const Complex vkq = v[idx(k, q)];
                        v[idx(k, p)] = c * vkp - spc * vkq;
                        v[idx(k, q)] = sp * vkp + c * vkq;
                    }
                }
            }
        }
    }
    // Clean residual imaginary parts on the diagonal.
    for (int i = 0; i < n; ++i) a[idx(i, i)] = Complex{a[idx(i, i)].real(), 0.0};
    return sweep;
}

namespace {

// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
// form; fills diag (n) and the squared moduli of the subdiagonal (n-1).
// Destroys buf.
void tridiagonalize(Complex* a, int n, double* diag, double* offsq) {
    auto idx = [n](int r, int c) { return static_cast<std::size_t>(r) * n + c; };

    std::vector<Complex> v(static_cast<std::size_t>(n));
    std::vector<Complex> w(static_cast<std::size_t>(n));

    for (int k = 0; k + 2 < n; ++k) {
        // Column below the subdiagonal.
        double col_norm_sq = 0.0;
        for (int i = k + 1; i < n; ++i) col_norm_sq += std::norm(a[idx(i, k)]);
        const double col_norm = std::sqrt(col_norm_sq);
        const Complex x0 = a[idx(k + 1, k)];
        if (col_norm == 0.0) {
            continue; // already in tridiagonal form at this column
        }
        // Reflector phase chosen to avoid cancellation.
        const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex{1.0, 0.0};
        const Complex alpha = -phase * col_norm;

        double vnorm_sq = 0.0;
        for (int i = k + 1; i < n; ++i) {
            Complex u = a[idx(i, k)];
            if (i == k + 1) u -= alpha;
            v[static_cast<std::size_t>(i)] = u;
            vnorm_sq += std::norm(u);
        }
        if (vnorm_sq <= 0.0) continue;
        const double inv = 1.0 / std::sqrt(vnorm_sq);
        for (int i = k + 1; i < n; ++i) v[static_cast<std::size_t>(i)] *= inv;

        // Two-sided rank-2 update of the trailing block:
        // A <- A - 2 v q* - 2 q v* with w = A v, q = w - (v* w) v.
        for (int i = k + 1; i < n; ++i) {
            Complex acc{0.0, 0.0};
            for (int j = k + 1; j < n; ++j) acc += a[idx(i, j)] * v[static_cast<std::size_t>(j)];
            w[static_cast<std::size_t>(i)] = acc;
        }
        Complex vw{0.0, 0.0};
        for (int i = k + 1; i < n; ++i)
            vw += std::conj(v[static_cast<std::size_t>(i)]) * w[static_cast<std::size_t>(i)];
        for (int i = k + 1; i < n; ++i)
            w[static_cast<std::size_t>(i)] -= vw * v[static_cast<std::size_t>(i)]; // w is now q
        for (int i = k + 1; i < n; ++i) {
            const Complex vi = v[static_cast<std::size_t>(i)];
            const Complex qi = w[static_cast<std::size_t>(i)];
            for (int j = k + 1; j < n; ++j) {
                a[idx(i, j)] -= 2.0 * (vi * std::conj(w[static_cast<std::size_t>(j)]) +
                                       qi * std::conj(v[static_cast<std::size_t>(j)]));
            }
        }
        a[idx(k + 1, k)] = alpha;
        a[idx(k, k + 1)] = std::conj(alpha);
        for (int i = k + 2; i < n; ++i) {
            a[idx(i, k)] = Complex{0.0, 0.0};
            a[idx(k, i)] = Complex{0.0, 0.0};
        }
    }

    for (int i = 0; i < n; ++i) diag[i] = a[idx(i, i)].real();
    for (int i = 0; i + 1 < n; ++i) offsq[i] = std::norm(a[idx(i + 1, i)]);
}

// Number of eigenvalues of the tridiagonal matrix strictly below x
// (negative pivots of the LDL^T factorization of T - x I).
int count_below(const double* diag, const double* offsq, int n, double x) {
    int count = 0;
    double d = diag[0] - x;
    if (d < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
        if (d == 0.0) d = -1e-300;
        d = (diag[i] - x) - offsq[i - 1] / d;
        if (d < 0.0) ++count;
    }
    return count;
}

} // namespace

double jacobi_lambda_max(Complex* buf, int n) {
    if (n == 1) return buf[0].real();

    // Rescale huge matrices so squared moduli cannot overflow (phi values can
    // reach e^600 for the quadratic-exponential function).
    double amax = 0.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n) * n; ++i)
        amax = std::max({amax, std::abs(buf[i].real()), std::abs(buf[i].imag())});
    double rescale = 1.0;
    if (amax > 1e100) {
        rescale = amax;
        const double inv = 1.0 / amax;
        for (std::size_t i = 0; i < static_cast<std::size_t>(n) * n; ++i) buf[i] *= inv;
    }

    std::vector<double> diag(static_cast<std::size_t>(n));
    std::vector<double> offsq(static_cast<std::size_t>(n > 1 ? n - 1 : 0));
    tridiagonalize(buf, n, diag.data(), offsq.data());

    // Gershgorin bracket.
    double lo = diag[0], hi = diag[0];
    for (int i = 0; i < n; ++i) {
        const double left = i > 0 ? std::sqrt(offsq[static_cast<std::size_t>(i - 1)]) : 0.0;
        const double right = i + 1 < n ? std::sqrt(offsq[static_cast<std::size_t>(i)]) : 0.0;
        lo = std::min(lo, diag[static_cast<std::size_t>(i)] - left - right);
        hi = std::max(hi, diag[static_cast<std::size_t>(i)] + left + right);
    }
    const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
    const double tol = 1e-16 * scale;
    for (int it = 0; it < 128 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(diag.data(), offsq.data(), n, mid) == n)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi) * rescale;
}

} // namespace detail

namespace {

// Symmetrized copy after the Hermitian tolerance check passed, so the
// iteration runs on an exactly Hermitian matrix.
CMatrix hermitian_checked_copy(const CMatrix& a, const char* who) {
    require_finite(a, who);
    const double tol = 1e-12 * std::max(1.0, a.max_abs());
    require(a.is_hermitian(tol), ErrCode::not_hermitian, std::string(who) + ": matrix is not Hermitian within tolerance");
    const int n = a.dim();
    CMatrix h(n);
    for (int i = 0; i < n; ++i) {
        h.at(i, i) = Complex{a.at(i, i).real(), 0.0};
        for (int j = i + 1; j < n; ++j) {
            const Complex z = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));
            h.at(i, j) = z;
            h.at(j, i) = std::conj(z);
        }
    }
    return h;
}

std::vector<int> descending_order(const std::vector<double>& values) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return values[i] > values[j]; });
    return order;
}

} // namespace

CMatrix EigenDecomposition::reconstruct() const {
    return map([](double x) { return x; });
}

CMatrix EigenDecomposition::map(const std::function<double(double)>& f) const {
    const int n = vectors.dim();
    CMatrix r(n);
    for (int k = 0; k < n; ++k) {
        const double fk = f(values[static_cast<std::size_t>(k)]);
        require(std::isfinite(fk), ErrCode::domain, "spectral map produced a non-finite value");
        if (fk == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            const Complex vik = vectors.at(i, k);
            for (int j = 0; j < n; ++j) r.at(i, j) += fk * vik * std::conj(vectors.at(j, k));
        }
    }
    return r;
}

EigenDecomposition hermitian_eig(const CMatrix& a) {
    CMatrix h = hermitian_checked_copy(a, "hermitian_eig");
    const int n = h.dim();
    CMatrix v = CMatrix::identity(n);
    detail::jacobi_hermitian(h.data().data(), v.data().data(), n);

    std::vector<double> raw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) raw[static_cast<std::size_t>(i)] = h.at(i, i).real();
    const std::vector<int> order = descending_order(raw);

    EigenDecomposition d;
    d.values.resize(static_cast<std::size_t>(n));
    d.vectors = CMatrix(n);
    for (int k = 0; k < n; ++k) {
        d.values[static_cast<std::size_t>(k)] = raw[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
        for (int i = 0; i < n; ++i) d.vectors.at(i, k) = v.at(i, order[static_cast<std::size_t>(k)]);
    }
    return d;
}

std::vector<double> hermitian_eigvalues(const CMatrix& a) {
    CMatrix h = hermitian_checked_copy(a, "hermitian_eigvalues");
    const int n = h.dim();
    detail::jacobi_hermitian(h.data().data(), nullptr, n);
    std::vector<double> raw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) raw[static_cast<std::size_t>(i)] = h.at(i, i).real();
    std::sort(raw.begin(), raw.end(), std::greater<>());
    return raw;
}

double operator_norm(const CMatrix& t) {
    require_finite(t, "operator_norm");
    const int n = t.dim();
    CMatrix g = t.adjoint() * t;
    const double lmax = detail::jacobi_lambda_max(g.data().data(), n);
    return std::sqrt(std::max(0.0, lmax));
}

CMatrix abs_op(const CMatrix& t) {
    require_finite(t, "abs_op");
    CMatrix g = t.adjoint() * t;
    EigenDecomposition d = hermitian_eig(g);
    return d.map([](double x) { return std::sqrt(std::max(0.0, x)); });
}

CMatrix psd_fun(const CMatrix& a, const std::function<double(double)>& f) {
    EigenDecomposition d = hermitian_eig(a);
    const double norm_a = d.values.empty() ? 0.0 : std::max(std::abs(d.values.front()), std::abs(d.values.back()));
    const double clamp_tol = 1e-10 * norm_a;
    for (double& lam : d.values) {
        require(lam >= -clamp_tol, ErrCode::not_psd,
                "psd_fun: eigenvalue " + std::to_string(lam) + " is negative beyond tolerance");
        if (lam < 0.0) lam = 0.0;
    }
    return d.map(f);
}

std::function<double(double)> power_fn(double p) {
    if (p == 0.0) return [](double) { return 1.0; };
    return [p](double t) { return std::pow(t, p); };
}

} // namespace orad
