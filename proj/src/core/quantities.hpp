#pragma once

#include <map>
#include <optional>

#include "cmatrix.hpp"
#include "linalg.hpp"
#include "numrad.hpp"

namespace orad {

/// Lazily memoized spectral quantities of one draw (T and optionally S).
/// Everything is computed on the unscaled inputs; evaluators that cap the
/// operator norm rescale through the known homogeneity degree of each
/// quantity (w(cT) = |c| w(T), |cT|^p = |c|^p |T|^p, ...), so one cache
/// serves every norm cap.
class QuantityCache {
public:
    explicit QuantityCache(CMatrix t, std::optional<CMatrix> s = std::nullopt, RadiusOptions ropts = {});

    const CMatrix& T() const { return t_; }
    bool has_S() const { return s_.has_value(); }
    const CMatrix& S() const;
    int dim() const { return t_.dim(); }
    const RadiusOptions& radius_options() const { return ropts_; }

    double norm_T();
    double norm_S();
    double w_T();
    double w_Tpow(int k);    // w(T^k), k >= 1
    double norm_Tpow(int k); // ||T^k||
    const CMatrix& Tpow(int k);

    double w_absT_absTadj();        // w(|T| |T*|)
    double w_mixed(double s);       // w(|T*|^{2(1-s)} |T|^{2s})
    double w_absT_plus_i_absTadj(); // w(|T| + i |T*|)

    double w_TstarS(); // w(T* S)
    double w_SstarT(); // w(S* T); equals w(T*S) up to fp, kept for diagnostics
    double w_S2T2();   // w(|S|^2 |T|^2)

    // Spectral data of T*T / TT* (and the S versions): singular values of T
    // are sqrt of the eigenvalues, shared by every |T|^p construction.
    const EigenDecomposition& eig_TstarT();
    const EigenDecomposition& eig_TTstar();
    const EigenDecomposition& eig_SstarS();
    const EigenDecomposition& eig_SSstar();

private:
    double radius_of(const CMatrix& m);

    CMatrix t_;
    std::optional<CMatrix> s_;
    RadiusOptions ropts_;

    std::optional<double> norm_t_, norm_s_;
    std::map<int, double> w_tpow_;
    std::map<int, double> norm_tpow_;
    std::map<int, CMatrix> tpow_;
    std::optional<double> w_abs_prod_;
    std::map<double, double> w_mixed_;
    std::optional<double> w_abs_plus_i_;
    std::optional<double> w_tstars_, w_sstart_, w_s2t2_;
    std::optional<EigenDecomposition> eig_tstart_, eig_ttstar_, eig_sstars_, eig_ssstar_;
};

/// One spectral term of a PSD combination: coeff * V f(scale * sqrt(lambda)) V*.
struct SpectralTerm {
    const EigenDecomposition* eig = nullptr; // decomposition of X*X (values = sigma^2)
    double sigma_scale = 1.0;                // norm-cap factor applied to sigma
    double coeff = 1.0;
    std::function<double(double)> f;         // applied to the scaled sigma
};

/// lambda_max of sum(coeff_k * V_k f_k(sigma) V_k*). All terms must have
/// nonnegative coefficients and f >= 0, so the sum is PSD and the norm is
/// its top eigenvalue.
double lambda_max_of_sum(std::span<const SpectralTerm> terms);

} // namespace orad
