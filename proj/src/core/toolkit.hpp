#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "harness.hpp"

namespace orad {

/// The bundled verification suite: every catalogue case over the standard
/// ensembles (7 families, n = 2..8, 200 draws) with the default parameter
/// grids. Exponential phi instances carry norm caps that keep their
/// arguments inside the overflow domain.
SuiteConfig default_suite_config();

/// Planted-falsehood suite: the corrupted case must produce violations.
SuiteConfig selftest_suite_config();

/// JSON listing of the catalogue (id, params, chain member names, flags).
std::string catalogue_json();

/// Parses "id" or "id[phi=expm1;alpha=0.5]" into a case instance.
BoundCase parse_case_spec(const std::string& spec);

/// Per-draw comparison of bound estimates against the true w(T).
/// CSV columns: seed,index,n,w followed by one column per bound.
std::string compare_csv(const EnsembleSpec& spec, const std::vector<BoundCase>& bounds,
                        RadiusOptions ropts = {});

struct FuzzResult {
    BoundCase bc;
    CMatrix best_t;
    std::optional<CMatrix> best_s;
    std::uint64_t lemma_seed = 0; // used when the case is a vector lemma
    double best_ratio = 0.0;
    int best_link = 0;
    long long iterations = 0;
    bool violation = false; // best_ratio exceeded 1 + tolerance
};

/// Random search maximizing the first-link ratio LHS/RHS of one case:
/// fresh family draws alternating with perturbations of the incumbent.
/// Runs until the time budget expires (or exactly max_iters when > 0).
FuzzResult fuzz_case(const BoundCase& bc, double seconds, std::uint64_t seed, long long max_iters = 0,
                     Tolerances tol = {});

} // namespace orad
