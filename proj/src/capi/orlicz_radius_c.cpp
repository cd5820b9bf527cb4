#include "orlicz_radius.h"

#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "core/bounds.hpp"
#include "core/ensembles.hpp"
#include "core/harness.hpp"
#include "core/io.hpp"
#include "core/linalg.hpp"
#include "core/numrad.hpp"
#include "core/orlicz.hpp"
#include "core/toolkit.hpp"

using json = nlohmann::ordered_json;

struct orx_matrix {
    orad::CMatrix m;
};

struct orx_phi {
    orad::OrliczFn fn;
};

namespace {

thread_local std::string g_last_error;

int set_error(int code, const std::string& message) {
    g_last_error = message;
    return code;
}

template <typename Fn>
int guard(Fn&& fn) {
    try {
        fn();
        return ORX_OK;
    } catch (const orad::Error& e) {
        return set_error(static_cast<int>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(ORX_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(ORX_ERR_INTERNAL, e.what());
    }
}

int require_arg(bool ok, const char* message) {
    if (ok) return ORX_OK;
    return set_error(ORX_ERR_INVALID_ARGUMENT, message);
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

json evaluation_to_json(const orad::BoundEvaluation& ev) {
    json j;
    j["case"] = ev.case_key;
    j["status"] = ev.status == orad::EvalStatus::ok ? "ok" : "untestable";
    if (ev.status == orad::EvalStatus::untestable) j["reason"] = ev.untestable_reason;
    json chain = json::array();
    for (const auto& [name, value] : ev.chain) chain.push_back(json{{"name", name}, {"value", value}});
    j["chain"] = std::move(chain);
    j["slack"] = ev.slack;
    j["pass"] = ev.pass;
    json ratios = json::array();
    for (std::size_t i = 0; i + 1 < ev.chain.size(); ++i) ratios.push_back(ev.ratio(i));
    j["ratio"] = std::move(ratios);
    j["tolerance"] = json{{"tol_abs", ev.tol.tol_abs}, {"tol_rel", ev.tol.tol_rel}};
    json quantities = json::object();
    for (const auto& [name, value] : ev.quantities) quantities[name] = value;
    j["quantities"] = std::move(quantities);
    j["all_pass"] = ev.all_pass();
    return j;
}

} // namespace

extern "C" {

const char* orx_version(void) { return ORLICZ_RADIUS_VERSION; }

const char* orx_last_error(void) { return g_last_error.c_str(); }

void orx_string_free(char* s) { delete[] s; }

int orx_matrix_create(int n, const double* entries, orx_matrix** out) {
    if (int rc = require_arg(entries != nullptr && out != nullptr, "entries and out must be non-null")) return rc;
    return guard([&] {
        std::vector<orad::Complex> data;
        data.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        for (int i = 0; i < n * n; ++i) data.emplace_back(entries[2 * i], entries[2 * i + 1]);
        orad::CMatrix m(n, std::move(data));
        orad::require_finite(m, "orx_matrix_create");
        *out = new orx_matrix{std::move(m)};
    });
}

int orx_matrix_load(const char* path, orx_matrix** out) {
    if (int rc = require_arg(path != nullptr && out != nullptr, "path and out must be non-null")) return rc;
    return guard([&] { *out = new orx_matrix{orad::load_matrix_file(path)}; });
}

int orx_matrix_save_json(const orx_matrix* m, const char* path) {
    if (int rc = require_arg(m != nullptr && path != nullptr, "matrix and path must be non-null")) return rc;
    return guard([&] { orad::save_matrix_json(m->m, path); });
}

int orx_matrix_save_text(const orx_matrix* m, const char* path) {
    if (int rc = require_arg(m != nullptr && path != nullptr, "matrix and path must be non-null")) return rc;
    return guard([&] { orad::save_matrix_text(m->m, path); });
}

int orx_matrix_dim(const orx_matrix* m, int* n) {
    if (int rc = require_arg(m != nullptr && n != nullptr, "matrix and n must be non-null")) return rc;
    *n = m->m.dim();
    return ORX_OK;
}

int orx_matrix_get(const orx_matrix* m, int row, int col, double* re, double* im) {
    if (int rc = require_arg(m != nullptr && re != nullptr && im != nullptr, "output pointers must be non-null"))
        return rc;
    if (int rc = require_arg(row >= 0 && row < m->m.dim() && col >= 0 && col < m->m.dim(), "index out of range"))
        return rc;
    const orad::Complex z = m->m.at(row, col);
    *re = z.real();
    *im = z.imag();
    return ORX_OK;
}

void orx_matrix_free(orx_matrix* m) { delete m; }

int orx_generate(const char* ensemble_json, int index, orx_matrix** out) {
    if (int rc = require_arg(ensemble_json != nullptr && out != nullptr, "spec and out must be non-null")) return rc;
    return guard([&] {
        const orad::EnsembleSpec spec = orad::ensemble_from_json(ensemble_json);
        *out = new orx_matrix{orad::generate(spec, index)};
    });
}

int orx_operator_norm(const orx_matrix* m, double* out) {
    if (int rc = require_arg(m != nullptr && out != nullptr, "matrix and out must be non-null")) return rc;
    return guard([&] { *out = orad::operator_norm(m->m); });
}

int orx_abs_op(const orx_matrix* m, orx_matrix** out) {
    if (int rc = require_arg(m != nullptr && out != nullptr, "matrix and out must be non-null")) return rc;
    return guard([&] { *out = new orx_matrix{orad::abs_op(m->m)}; });
}

int orx_hermitian_eigenvalues(const orx_matrix* m, double* values) {
    if (int rc = require_arg(m != nullptr && values != nullptr, "matrix and values must be non-null")) return rc;
    return guard([&] {
        const std::vector<double> v = orad::hermitian_eigvalues(m->m);
        for (std::size_t i = 0; i < v.size(); ++i) values[i] = v[i];
    });
}

int orx_numerical_radius(const orx_matrix* m, int grid, double tol, orx_radius_result* out) {
    if (int rc = require_arg(m != nullptr && out != nullptr, "matrix and out must be non-null")) return rc;
    return guard([&] {
        orad::RadiusOptions opts;
        if (grid > 0) opts.grid = grid;
        if (tol > 0.0) opts.tol = tol;
        const orad::RadiusResult r = orad::numerical_radius(m->m, opts);
        out->value = r.value;
        out->theta_star = r.theta_star;
        out->certified_error = r.certified_error;
        out->grid_points = r.grid_points;
        out->refinements = r.refinements;
    });
}

int orx_rotation_support(const orx_matrix* m, double theta, double* out) {
    if (int rc = require_arg(m != nullptr && out != nullptr, "matrix and out must be non-null")) return rc;
    return guard([&] { *out = orad::rotation_support(m->m, theta); });
}

int orx_radius_oracle(const orx_matrix* m, long long samples, uint64_t seed, double* out) {
    if (int rc = require_arg(m != nullptr && out != nullptr, "matrix and out must be non-null")) return rc;
    return guard([&] { *out = orad::radius_oracle(m->m, samples, seed); });
}

int orx_range_boundary(const orx_matrix* m, int points, double* thetas, double* re, double* im) {
    if (int rc = require_arg(m != nullptr && thetas != nullptr && re != nullptr && im != nullptr,
                             "matrix and output arrays must be non-null"))
        return rc;
    return guard([&] {
        const auto pts = orad::range_boundary(m->m, points);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            thetas[i] = pts[i].theta;
            re[i] = pts[i].value.real();
            im[i] = pts[i].value.imag();
        }
    });
}

int orx_phi_create(const char* spec, orx_phi** out) {
    if (int rc = require_arg(spec != nullptr && out != nullptr, "spec and out must be non-null")) return rc;
    return guard([&] { *out = new orx_phi{orad::OrliczFn::parse(spec)}; });
}

void orx_phi_free(orx_phi* phi) { delete phi; }

int orx_phi_eval(const orx_phi* phi, double t, double* out) {
    if (int rc = require_arg(phi != nullptr && out != nullptr, "phi and out must be non-null")) return rc;
    return guard([&] { *out = phi->fn.eval(t); });
}

int orx_phi_inverse(const orx_phi* phi, double y, double tol, double* out) {
    if (int rc = require_arg(phi != nullptr && out != nullptr, "phi and out must be non-null")) return rc;
    return guard([&] { *out = phi->fn.inverse(y, tol > 0.0 ? tol : 1e-12); });
}

int orx_phi_check_axioms(const orx_phi* phi, const double* grid, int len, char** out_json) {
    if (int rc = require_arg(phi != nullptr && grid != nullptr && out_json != nullptr && len > 0,
                             "phi, grid and out must be non-null"))
        return rc;
    return guard([&] {
        const orad::AxiomReport rep =
            orad::check_axioms(phi->fn, std::span<const double>(grid, static_cast<std::size_t>(len)));
        json j;
        j["zero_at_zero"] = rep.zero_at_zero;
        j["positive"] = rep.positive;
        j["convex"] = rep.convex;
        j["increasing"] = rep.increasing;
        j["grows"] = rep.grows;
        j["all_pass"] = rep.all_pass();
        auto witness = [](const std::optional<orad::AxiomViolation>& w) -> json {
            if (!w) return nullptr;
            return json{{"a", w->a}, {"b", w->b}};
        };
        j["positive_witness"] = witness(rep.positive_witness);
        j["convex_witness"] = witness(rep.convex_witness);
        j["increasing_witness"] = witness(rep.increasing_witness);
        *out_json = dup_string(j.dump());
    });
}

int orx_phi_check_submultiplicative(const orx_phi* phi, const double* grid, int len, char** out_json) {
    if (int rc = require_arg(phi != nullptr && grid != nullptr && out_json != nullptr && len > 0,
                             "phi, grid and out must be non-null"))
        return rc;
    return guard([&] {
        const orad::SubmultResult res =
            orad::check_submultiplicative(phi->fn, std::span<const double>(grid, static_cast<std::size_t>(len)));
        json j;
        switch (res.outcome) {
        case orad::SubmultResult::Outcome::exact:
            j["outcome"] = "exact";
            break;
        case orad::SubmultResult::Outcome::pass:
            j["outcome"] = "pass";
            j["range"] = json::array({res.range_lo, res.range_hi});
            break;
        case orad::SubmultResult::Outcome::fail:
            j["outcome"] = "fail";
            j["witness"] = json{{"t1", res.witness_t1},
                                {"t2", res.witness_t2},
                                {"phi_t1t2", res.witness_lhs},
                                {"phi_t1_phi_t2", res.witness_rhs}};
            break;
        }
        j["untestable_points"] = res.untestable_points;
        *out_json = dup_string(j.dump());
    });
}

int orx_catalogue_json(char** out_json) {
    if (int rc = require_arg(out_json != nullptr, "out must be non-null")) return rc;
    return guard([&] { *out_json = dup_string(orad::catalogue_json()); });
}

int orx_evaluate_bound(const char* case_spec, const orx_matrix* t, const orx_matrix* s, double tol_abs,
                       double tol_rel, double norm_cap, char** out_json) {
    if (int rc = require_arg(case_spec != nullptr && t != nullptr && out_json != nullptr,
                             "case, matrix and out must be non-null"))
        return rc;
    return guard([&] {
        const orad::BoundCase bc = orad::parse_case_spec(case_spec);
        orad::Tolerances tol;
        if (tol_abs > 0.0) tol.tol_abs = tol_abs;
        if (tol_rel > 0.0) tol.tol_rel = tol_rel;
        const orad::BoundEvaluation ev =
            orad::evaluate_bound(bc, t->m, s != nullptr ? &s->m : nullptr, tol, norm_cap);
        *out_json = dup_string(evaluation_to_json(ev).dump());
    });
}

int orx_evaluate_vector_lemma(const char* case_spec, const orx_matrix* t, uint64_t seed, double tol_abs,
                              double tol_rel, char** out_json) {
    if (int rc = require_arg(case_spec != nullptr && t != nullptr && out_json != nullptr,
                             "case, matrix and out must be non-null"))
        return rc;
    return guard([&] {
        const orad::BoundCase bc = orad::parse_case_spec(case_spec);
        orad::Tolerances tol;
        if (tol_abs > 0.0) tol.tol_abs = tol_abs;
        if (tol_rel > 0.0) tol.tol_rel = tol_rel;
        const orad::BoundEvaluation ev = orad::evaluate_vector_lemma_seeded(bc, t->m, seed, tol);
        *out_json = dup_string(evaluation_to_json(ev).dump());
    });
}

int orx_default_suite_config(char** out_json) {
    if (int rc = require_arg(out_json != nullptr, "out must be non-null")) return rc;
    return guard([&] { *out_json = dup_string(orad::suite_config_to_json(orad::default_suite_config())); });
}

int orx_selftest_suite_config(char** out_json) {
    if (int rc = require_arg(out_json != nullptr, "out must be non-null")) return rc;
    return guard([&] { *out_json = dup_string(orad::suite_config_to_json(orad::selftest_suite_config())); });
}

int orx_run_suite(const char* config_json, int jobs, char** out_report_json) {
    if (int rc = require_arg(config_json != nullptr && out_report_json != nullptr,
                             "config and out must be non-null"))
        return rc;
    return guard([&] {
        const orad::SuiteConfig config = orad::suite_config_from_json(config_json);
        const orad::SuiteReport report = orad::run_suite(config, jobs);
        *out_report_json = dup_string(orad::report_to_json(report));
    });
}

int orx_report_to_csv(const char* report_json, char** out_csv) {
    if (int rc = require_arg(report_json != nullptr && out_csv != nullptr, "report and out must be non-null"))
        return rc;
    return guard([&] { *out_csv = dup_string(orad::report_to_csv(orad::report_from_json(report_json))); });
}

int orx_report_violations(const char* report_json, long long* out) {
    if (int rc = require_arg(report_json != nullptr && out != nullptr, "report and out must be non-null")) return rc;
    return guard([&] { *out = orad::report_from_json(report_json).total_violations(); });
}

int orx_report_strip_execution(const char* report_json, char** out_json) {
    if (int rc = require_arg(report_json != nullptr && out_json != nullptr, "report and out must be non-null"))
        return rc;
    return guard([&] { *out_json = dup_string(orad::report_json_without_execution(report_json)); });
}

int orx_compare(const char* ensemble_json, const char* bounds, char** out_csv) {
    if (int rc = require_arg(ensemble_json != nullptr && bounds != nullptr && out_csv != nullptr,
                             "ensemble, bounds and out must be non-null"))
        return rc;
    return guard([&] {
        const orad::EnsembleSpec spec = orad::ensemble_from_json(ensemble_json);
        std::vector<orad::BoundCase> cases;
        std::string item;
        std::istringstream ss(bounds);
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) cases.push_back(orad::parse_case_spec(item));
        }
        *out_csv = dup_string(orad::compare_csv(spec, cases));
    });
}

int orx_fuzz(const char* case_spec, double seconds, long long max_iters, uint64_t seed, char** out_json) {
    if (int rc = require_arg(case_spec != nullptr && out_json != nullptr, "case and out must be non-null")) return rc;
    return guard([&] {
        const orad::BoundCase bc = orad::parse_case_spec(case_spec);
        const orad::FuzzResult res = orad::fuzz_case(bc, seconds, seed, max_iters);
        json j;
        j["case"] = res.bc.key();
        j["best_ratio"] = res.best_ratio;
        j["iterations"] = res.iterations;
        j["violation"] = res.violation;
        j["seed"] = seed;
        j["lemma_seed"] = res.lemma_seed;
        j["witness"] = json::parse(orad::matrix_to_json(res.best_t));
        if (res.best_s) j["witness_s"] = json::parse(orad::matrix_to_json(*res.best_s));
        *out_json = dup_string(j.dump());
    });
}

} // extern "C"
