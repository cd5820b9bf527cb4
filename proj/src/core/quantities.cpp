#include "quantities.hpp"

#include <cmath>

namespace orad {

QuantityCache::QuantityCache(CMatrix t, std::optional<CMatrix> s, RadiusOptions ropts)
    : t_(std::move(t)), s_(std::move(s)), ropts_(ropts) {
    require_finite(t_, "QuantityCache");
    if (s_) {
        require_finite(*s_, "QuantityCache");
        require(s_->dim() == t_.dim(), ErrCode::dimension, "paired operators must have equal dimension");
    }
}

const CMatrix& QuantityCache::S() const {
    require(s_.has_value(), ErrCode::invalid_argument, "case requires a second operator S");
    return *s_;
}

double QuantityCache::radius_of(const CMatrix& m) { return numerical_radius(m, ropts_).value; }

double QuantityCache::norm_T() {
    if (!norm_t_) norm_t_ = operator_norm(t_);
    return *norm_t_;
}

double QuantityCache::norm_S() {
    if (!norm_s_) norm_s_ = operator_norm(S());
    return *norm_s_;
}

double QuantityCache::w_T() { return w_Tpow(1); }

const CMatrix& QuantityCache::Tpow(int k) {
    require(k >= 1 && k <= 16, ErrCode::invalid_argument, "cached T^k supports 1 <= k <= 16");
    auto it = tpow_.find(k);
    if (it == tpow_.end()) it = tpow_.emplace(k, k == 1 ? t_ : Tpow(k - 1) * t_).first;
    return it->second;
}

double QuantityCache::w_Tpow(int k) {
    auto it = w_tpow_.find(k);
    if (it == w_tpow_.end()) it = w_tpow_.emplace(k, radius_of(Tpow(k))).first;
    return it->second;
}

double QuantityCache::norm_Tpow(int k) {
    auto it = norm_tpow_.find(k);
    if (it == norm_tpow_.end()) it = norm_tpow_.emplace(k, k == 1 ? norm_T() : operator_norm(Tpow(k))).first;
    return it->second;
}

const EigenDecomposition& QuantityCache::eig_TstarT() {
    if (!eig_tstart_) eig_tstart_ = hermitian_eig(t_.adjoint() * t_);
    return *eig_tstart_;
}

const EigenDecomposition& QuantityCache::eig_TTstar() {
    if (!eig_ttstar_) eig_ttstar_ = hermitian_eig(t_ * t_.adjoint());
    return *eig_ttstar_;
}

const EigenDecomposition& QuantityCache::eig_SstarS() {
    if (!eig_sstars_) eig_sstars_ = hermitian_eig(S().adjoint() * S());
    return *eig_sstars_;
}

const EigenDecomposition& QuantityCache::eig_SSstar() {
    if (!eig_ssstar_) eig_ssstar_ = hermitian_eig(S() * S().adjoint());
    return *eig_ssstar_;
}

namespace {

// |X|^p from the decomposition of X*X: eigenvalues lambda = sigma^2, clamped
// at 0 before the fractional power. p = 0 maps everything to 1.
CMatrix abs_power_from(const EigenDecomposition& d, double p) {
    return d.map([p](double lam) {
        if (p == 0.0) return 1.0;
        return std::pow(std::sqrt(std::max(0.0, lam)), p);
    });
}

} // namespace

double QuantityCache::w_absT_absTadj() {
    if (!w_abs_prod_) {
        const CMatrix prod = abs_power_from(eig_TstarT(), 1.0) * abs_power_from(eig_TTstar(), 1.0);
        w_abs_prod_ = radius_of(prod);
    }
    return *w_abs_prod_;
}

double QuantityCache::w_mixed(double s) {
    auto it = w_mixed_.find(s);
    if (it == w_mixed_.end()) {
        // |T*|^{2(1-s)} |T|^{2s}
        const CMatrix left = abs_power_from(eig_TTstar(), 2.0 * (1.0 - s));
        const CMatrix right = abs_power_from(eig_TstarT(), 2.0 * s);
        it = w_mixed_.emplace(s, radius_of(left * right)).first;
    }
    return it->second;
}

double QuantityCache::w_absT_plus_i_absTadj() {
    if (!w_abs_plus_i_) {
        CMatrix m = abs_power_from(eig_TstarT(), 1.0);
        m += Complex{0.0, 1.0} * abs_power_from(eig_TTstar(), 1.0);
        w_abs_plus_i_ = radius_of(m);
    }
    return *w_abs_plus_i_;
}

double QuantityCache::w_TstarS() {
    if (!w_tstars_) w_tstars_ = radius_of(t_.adjoint() * S());
    return *w_tstars_;
}

double QuantityCache::w_SstarT() {
    if (!w_sstart_) w_sstart_ = radius_of(S().adjoint() * t_);
    return *w_sstart_;
}

double QuantityCache::w_S2T2() {
    if (!w_s2t2_) {
        const CMatrix s2 = S().adjoint() * S();
        const CMatrix t2 = t_.adjoint() * t_;
        w_s2t2_ = radius_of(s2 * t2);
    }
    return *w_s2t2_;
}

double lambda_max_of_sum(std::span<const SpectralTerm> terms) {
    require(!terms.empty(), ErrCode::invalid_argument, "lambda_max_of_sum needs at least one term");
    const int n = terms.front().eig->vectors.dim();
    CMatrix sum(n);
    for (const SpectralTerm& term : terms) {
        require(term.eig->vectors.dim() == n, ErrCode::dimension, "spectral terms have mismatched dimensions");
        if (term.coeff == 0.0) continue;
        sum += term.coeff * term.eig->map([&term](double lam) {
            return term.f(term.sigma_scale * std::sqrt(std::max(0.0, lam)));
        });
    }
    return detail::jacobi_lambda_max(sum.data().data(), n);
}

} // namespace orad
