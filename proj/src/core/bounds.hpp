#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmatrix.hpp"
#include "orlicz.hpp"
#include "quantities.hpp"

namespace orad {

struct Tolerances {
    double tol_abs = 1e-7;
    double tol_rel = 1e-7;

    double band(double rhs) const { return tol_abs + tol_rel * std::max(1.0, std::abs(rhs)); }
};

/// One entry of the inequality catalogue, identified by id plus whichever
/// parameters that entry uses. Construction validates ranges and rejects
/// parameters the case does not take.
struct BoundCase {
    std::string id;
    std::optional<OrliczFn> phi;
    std::optional<double> alpha;   // [0,1]
    std::optional<double> v;       // f(t) value, >= 0 (strictly inside (0,1) where v stands for t)
    std::optional<double> s;       // power split g(t)=t^s, h(t)=t^{1-s}, [0,1]
    std::optional<double> r;       // >= 1
    std::optional<int> n;          // >= 2
    std::optional<char> variant;   // 'a' | 'b' for the adjoint-swapped theorem pairs

    std::string key() const; // canonical "id[phi=...;alpha=...]" form
};

struct CaseParams {
    std::optional<std::string> phi;
    std::optional<double> alpha;
    std::optional<double> v;
    std::optional<double> s;
    std::optional<double> r;
    std::optional<int> n;
    std::optional<char> variant;
};

BoundCase make_case(const std::string& id, const CaseParams& params);

/// Catalogue metadata for one case id.
struct CaseInfo {
    std::string id;
    std::string description;
    std::vector<std::string> params;      // parameter names the case accepts
    std::vector<std::string> chain;       // chain member names, LHS first
    bool two_operator = false;
    bool vector_lemma = false;
    bool needs_phi = false;
    bool needs_submult = false;
    bool nilpotent_only = false;          // requires T^n = 0
    bool comparable = false;              // RHS free of w(T): invertible to a w upper estimate
};

const std::vector<CaseInfo>& catalogue();
const CaseInfo& case_info(const std::string& id);

enum class EvalStatus { ok, untestable };

struct BoundEvaluation {
    std::string case_key;
    std::string input_label;
    EvalStatus status = EvalStatus::ok;
    std::string untestable_reason;
    std::vector<std::pair<std::string, double>> chain; // named values, LHS first
    std::vector<double> slack;                         // chain[i+1] - chain[i]
    std::vector<bool> pass;
    Tolerances tol;
    std::vector<std::pair<std::string, double>> quantities;

    bool all_pass() const;
    /// LHS/RHS of one link; equals 1 when both sides vanish.
    double ratio(std::size_t link) const;
    double worst_slack() const;
};

/// Evaluates one catalogue case on T (and S for the product cases), computing
/// every chain member from scratch. norm_cap > 0 rescales inputs with
/// operator norm above the cap down to it before evaluating (used to keep
/// exponential phi arguments inside their domain).
BoundEvaluation evaluate_bound(const BoundCase& bc, const CMatrix& t, const CMatrix* s = nullptr,
                               Tolerances tol = {}, double norm_cap = 0.0);

/// Same, over a shared quantity cache (the cache owns T/S).
BoundEvaluation evaluate_bound(const BoundCase& bc, QuantityCache& q, Tolerances tol = {},
                               double norm_cap = 0.0);

/// Concrete inputs for the vector lemma checks.
struct VectorLemmaInputs {
    std::vector<CVector> vectors; // x, y (e is given separately); ext_buzano uses all of them
    CVector e;                    // unit vector where the lemma needs one
    std::optional<CMatrix> psd;   // PSD operator for the McCarthy / operator-Jensen checks
    std::optional<CMatrix> op;    // operator for the mixed Schwarz check
};

BoundEvaluation check_vector_lemma(const BoundCase& bc, const VectorLemmaInputs& in, Tolerances tol = {});

/// Deterministic lemma inputs derived from a matrix and a seed: the harness
/// and the CLI share this derivation so witnesses reproduce exactly.
VectorLemmaInputs derive_lemma_inputs(const BoundCase& bc, const CMatrix& t, std::uint64_t seed,
                                      double norm_cap = 0.0);

BoundEvaluation evaluate_vector_lemma_seeded(const BoundCase& bc, const CMatrix& t, std::uint64_t seed,
                                             Tolerances tol = {}, double norm_cap = 0.0);

/// Effective upper estimate on w from an evaluation of a comparable case
/// (first RHS inverted through phi and the w exponent).
double w_upper_estimate(const BoundCase& bc, const BoundEvaluation& ev);

/// For non-power phi on a sub-multiplicativity-gated case: verify phi on a
/// geometric grid covering [lo, hi] and attach the checked status; throws if
/// the check fails.
OrliczFn gate_phi_for_submult(const OrliczFn& phi, double lo, double hi);

} // namespace orad
