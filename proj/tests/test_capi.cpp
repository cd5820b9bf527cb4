#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "orlicz_radius.h"

namespace {

template <typename F>
std::string take(F&& call) {
    char* s = nullptr;
    REQUIRE(call(&s) == ORX_OK);
    std::string out(s);
    orx_string_free(s);
    return out;
}

orx_matrix* jordan2() {
    const double entries[] = {0, 0, 1, 0, 0, 0, 0, 0};
    orx_matrix* m = nullptr;
    REQUIRE(orx_matrix_create(2, entries, &m) == ORX_OK);
    return m;
}

} // namespace

TEST_CASE("capi: version and error strings") {
    CHECK(orx_version() != nullptr);
    CHECK(std::strlen(orx_version()) > 0);
}

TEST_CASE("capi: matrix lifecycle, IO, and error codes") {
    orx_matrix* m = jordan2();
    int n = 0;
    CHECK(orx_matrix_dim(m, &n) == ORX_OK);
    CHECK(n == 2);
    double re = 0, im = 0;
    CHECK(orx_matrix_get(m, 0, 1, &re, &im) == ORX_OK);
    CHECK(re == 1.0);
    CHECK(orx_matrix_get(m, 2, 0, &re, &im) == ORX_ERR_INVALID_ARGUMENT);

    CHECK(orx_matrix_save_json(m, "capi_m.json") == ORX_OK);
    CHECK(orx_matrix_save_text(m, "capi_m.txt") == ORX_OK);
    orx_matrix* loaded = nullptr;
    CHECK(orx_matrix_load("capi_m.json", &loaded) == ORX_OK);
    orx_matrix_free(loaded);
    loaded = nullptr;
    CHECK(orx_matrix_load("capi_m.txt", &loaded) == ORX_OK);
    orx_matrix_free(loaded);
    std::remove("capi_m.json");
    std::remove("capi_m.txt");

    CHECK(orx_matrix_load("missing_file.json", &loaded) == ORX_ERR_IO);
    CHECK(std::strlen(orx_last_error()) > 0);

    const double bad[] = {1, 0, 0, 0, 0, 0};
    orx_matrix* nope = nullptr;
    CHECK(orx_matrix_create(0, bad, &nope) == ORX_ERR_DIMENSION);
    orx_matrix_free(m);
}

TEST_CASE("capi: norms, radius, oracle, boundary") {
    orx_matrix* m = jordan2();
    double norm = 0.0;
    CHECK(orx_operator_norm(m, &norm) == ORX_OK);
    CHECK(norm == doctest::Approx(1.0));

    orx_radius_result r{};
    CHECK(orx_numerical_radius(m, 0, 0.0, &r) == ORX_OK);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(r.grid_points == 1024);
    CHECK(r.certified_error <= 1e-9);

    double support = 0.0;
    CHECK(orx_rotation_support(m, 1.234, &support) == ORX_OK);
    CHECK(support == doctest::Approx(0.5).epsilon(1e-12));

    double oracle = 0.0;
    CHECK(orx_radius_oracle(m, 1000, 9, &oracle) == ORX_OK);
    CHECK(oracle <= r.value + 1e-9);
    CHECK(oracle >= 0.499);

    double thetas[16], re[16], im[16];
    CHECK(orx_range_boundary(m, 16, thetas, re, im) == ORX_OK);
    for (int i = 0; i < 16; ++i) CHECK(std::hypot(re[i], im[i]) == doctest::Approx(0.5).epsilon(1e-9));

    orx_matrix* abs = nullptr;
    CHECK(orx_abs_op(m, &abs) == ORX_OK);
    double values[2] = {0, 0};
    CHECK(orx_hermitian_eigenvalues(abs, values) == ORX_OK);
    CHECK(values[0] == doctest::Approx(1.0));
    CHECK(values[1] == doctest::Approx(0.0));
    orx_matrix_free(abs);

    // Non-Hermitian input to the eigensolver is a typed error.
    CHECK(orx_hermitian_eigenvalues(m, values) == ORX_ERR_NOT_HERMITIAN);
    orx_matrix_free(m);
}

TEST_CASE("capi: phi create/eval/inverse/check") {
    orx_phi* phi = nullptr;
    REQUIRE(orx_phi_create("expm1", &phi) == ORX_OK);
    double y = 0.0;
    CHECK(orx_phi_eval(phi, 1.0, &y) == ORX_OK);
    CHECK(y == doctest::Approx(std::expm1(1.0)));
    CHECK(orx_phi_eval(phi, 701.0, &y) == ORX_ERR_OVERFLOW);
    double t = 0.0;
    CHECK(orx_phi_inverse(phi, std::expm1(1.0), 0.0, &t) == ORX_OK);
    CHECK(t == doctest::Approx(1.0).epsilon(1e-10));

    const double grid[] = {0.25, 0.5, 0.75, 1.0, 3.0};
    const std::string sub =
        take([&](char** out) { return orx_phi_check_submultiplicative(phi, grid, 5, out); });
    CHECK(sub.find("\"outcome\":\"fail\"") != std::string::npos);
    CHECK(sub.find("\"t1\":3.0") != std::string::npos);
    orx_phi_free(phi);

    orx_phi* pw = nullptr;
    REQUIRE(orx_phi_create("power:p=2", &pw) == ORX_OK);
    double agrid[101];
    for (int i = 0; i <= 100; ++i) agrid[i] = 0.1 * i;
    const std::string ax = take([&](char** out) { return orx_phi_check_axioms(pw, agrid, 101, out); });
    CHECK(ax.find("\"all_pass\":true") != std::string::npos);
    orx_phi_free(pw);

    orx_phi* bad = nullptr;
    CHECK(orx_phi_create("power:p=0.5", &bad) == ORX_ERR_INVALID_ARGUMENT);
}

TEST_CASE("capi: generate, evaluate, catalogue") {
    orx_matrix* t = nullptr;
    REQUIRE(orx_generate("{\"family\":\"ginibre\",\"n\":3,\"count\":4,\"seed\":11}", 1, &t) == ORX_OK);
    orx_matrix* t2 = nullptr;
    REQUIRE(orx_generate("{\"family\":\"ginibre\",\"n\":3,\"count\":4,\"seed\":11}", 1, &t2) == ORX_OK);
    double a = 0, b = 0, ai = 0, bi = 0;
    CHECK(orx_matrix_get(t, 2, 1, &a, &ai) == ORX_OK);
    CHECK(orx_matrix_get(t2, 2, 1, &b, &bi) == ORX_OK);
    CHECK(a == b);
    CHECK(ai == bi);
    orx_matrix_free(t2);

    const std::string catalogue = take([](char** out) { return orx_catalogue_json(out); });
    CHECK(catalogue.find("\"id\": \"th7_power\"") != std::string::npos);
    CHECK(catalogue.find("\"id\": \"buzano_vec\"") != std::string::npos);

    const std::string eval =
        take([&](char** out) { return orx_evaluate_bound("cor_N222", t, nullptr, 0.0, 0.0, 4.0, out); });
    CHECK(eval.find("\"all_pass\":true") != std::string::npos);

    const std::string lemma =
        take([&](char** out) { return orx_evaluate_vector_lemma("buzano_vec", t, 42, 0.0, 0.0, out); });
    CHECK(lemma.find("\"all_pass\":true") != std::string::npos);

    char* bad = nullptr;
    CHECK(orx_evaluate_bound("no_such_case", t, nullptr, 0.0, 0.0, 0.0, &bad) == ORX_ERR_UNKNOWN_CASE);
    orx_matrix_free(t);
}

TEST_CASE("capi: suite round trip with determinism and violations counting") {
    const std::string selftest = take([](char** out) { return orx_selftest_suite_config(out); });
    const std::string report1 = take([&](char** out) { return orx_run_suite(selftest.c_str(), 1, out); });
    const std::string report2 = take([&](char** out) { return orx_run_suite(selftest.c_str(), 3, out); });

    long long violations = 0;
    CHECK(orx_report_violations(report1.c_str(), &violations) == ORX_OK);
    CHECK(violations > 0);

    const std::string stripped1 =
        take([&](char** out) { return orx_report_strip_execution(report1.c_str(), out); });
    const std::string stripped2 =
        take([&](char** out) { return orx_report_strip_execution(report2.c_str(), out); });
    CHECK(stripped1 == stripped2);

    const std::string table = take([&](char** out) { return orx_report_to_csv(report1.c_str(), out); });
    CHECK(table.rfind("id,params,", 0) == 0);
    CHECK(table.find("selftest_corrupt") != std::string::npos);

    char* broken = nullptr;
    CHECK(orx_run_suite("{broken", 1, &broken) == ORX_ERR_PARSE);
}

TEST_CASE("capi: compare and fuzz") {
    const std::string table = take([](char** out) {
        return orx_compare("{\"family\":\"hermitian\",\"n\":2,\"count\":5,\"seed\":3}",
                           "base_norm,power_norm[phi=expm1]", out);
    });
    // header + 5 rows
    long long lines = 0;
    for (char c : table) lines += c == '\n';
    CHECK(lines == 6);

    char* bad = nullptr;
    CHECK(orx_compare("{\"family\":\"hermitian\",\"n\":2,\"count\":2,\"seed\":3}", "th1_product[phi=power:p=1;v=0.5]",
                      &bad) == ORX_ERR_NOT_APPLICABLE);

    const std::string fuzz = take([](char** out) { return orx_fuzz("base_norm", 0.0, 40, 7, out); });
    char* fz = nullptr;
    CHECK(fuzz.find("\"best_ratio\":") != std::string::npos);
    CHECK(fuzz.find("\"violation\":false") != std::string::npos);
    CHECK(orx_fuzz("base_norm", 0.0, 0, 7, &fz) == ORX_ERR_INVALID_ARGUMENT);
}
