#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "ensembles.hpp"

namespace orad {

/// Restricts which configured ensembles a case template applies to.
struct EnsembleFilter {
    std::vector<Family> families; // empty = any family
    bool dim_le_n = false;        // ensemble dimension must not exceed the case's n
};

/// One catalogue id with parameter grids; expands to the cross product.
struct CaseTemplate {
    std::string id;
    std::vector<std::string> phis;
    std::vector<double> alphas;
    std::vector<double> vs;
    std::vector<double> ss;
    std::vector<double> rs;
    std::vector<int> ns;
    std::vector<char> variants;
    double norm_cap = 0.0; // > 0: inputs rescaled to this operator norm before evaluation
    std::optional<EnsembleFilter> filter;
};

struct CaseInstance {
    BoundCase bc;
    double norm_cap = 0.0;
    std::optional<EnsembleFilter> filter;
    std::string key;
};

std::vector<CaseInstance> expand_case_template(const CaseTemplate& tpl);

struct SuiteConfig {
    Tolerances tol;
    RadiusOptions radius;
    std::vector<CaseTemplate> cases;
    std::vector<EnsembleSpec> ensembles;
};

/// Reproduction tuple for one evaluation input.
struct Witness {
    std::string family;
    int n = 0;
    std::uint64_t seed = 0;
    int index = 0;
    std::uint64_t lemma_seed = 0;
};

struct LinkStats {
    std::string lhs_name;
    std::string rhs_name;
    long long violations = 0;
    long long grazes = 0;
    double min_ratio = 0.0;
    double mean_ratio = 0.0;
    double max_ratio = 0.0;
    Witness max_ratio_witness;
    double worst_slack = 0.0;
    Witness worst_slack_witness;
};

struct CaseEnsembleStats {
    std::string case_key;
    std::string case_id;
    EnsembleSpec ensemble;
    long long evaluations = 0;
    long long violations = 0; // evaluations with at least one failing link
    long long untestable = 0;
    long long grazes = 0;
    std::vector<LinkStats> links;

    double worst_slack() const;
    int worst_link() const;
};

struct SuiteReport {
    std::string version;
    double wall_time_seconds = 0.0;
    int jobs = 1;
    SuiteConfig config;
    std::vector<CaseEnsembleStats> rows;

    long long total_violations() const;
    long long total_untestable() const;
};

/// Draw-local seed for the vector-lemma inputs; shared with the CLI so
/// suite witnesses reproduce through `bound --seed`.
std::uint64_t lemma_seed_for(const EnsembleSpec& spec, int index);

/// Sub-seed for the paired second operator of the product cases.
EnsembleSpec paired_spec(const EnsembleSpec& spec);

/// Runs every applicable (case instance x ensemble x draw) combination.
/// jobs <= 0 picks the hardware concurrency. The report content is
/// independent of jobs and of evaluation order.
SuiteReport run_suite(const SuiteConfig& config, int jobs = 1);

/// Per-link tightness rows of every instance of the given case id (or exact
/// instance key).
std::vector<CaseEnsembleStats> tightness_stats(const SuiteReport& report, const std::string& case_id);

} // namespace orad
