#include <doctest.h>

#include <cstdio>
#include <cstring>

#include "core/ensembles.hpp"
#include "core/io.hpp"

using namespace orad;

namespace {

CMatrix awkward_matrix() {
    // Entries chosen to stress decimal round-tripping.
    return CMatrix{{Complex{1.0 / 3.0, -2.0e-17}, Complex{-0.0, 1e300}},
                   {Complex{5e-324, -1.0 / 7.0}, Complex{123456789.123456789, -9.87e-200}}};
}

bool bitwise_equal(const CMatrix& a, const CMatrix& b) {
    return a.dim() == b.dim() &&
           std::memcmp(a.data().data(), b.data().data(), a.data().size() * sizeof(Complex)) == 0;
}

} // namespace

TEST_CASE("matrix JSON round-trips bit-exactly") {
    const CMatrix m = awkward_matrix();
    CHECK(bitwise_equal(matrix_from_json(matrix_to_json(m)), m));

    EnsembleSpec spec;
    spec.family = Family::ginibre;
    spec.n = 5;
    spec.count = 3;
    spec.seed = 7;
    for (int i = 0; i < 3; ++i) {
        const CMatrix g = generate(spec, i);
        CHECK(bitwise_equal(matrix_from_json(matrix_to_json(g)), g));
    }
}

TEST_CASE("matrix text round-trips bit-exactly") {
    const CMatrix m = awkward_matrix();
    CHECK(bitwise_equal(matrix_from_text(matrix_to_text(m)), m));
}

TEST_CASE("matrix file loading detects the format") {
    const CMatrix m = awkward_matrix();
    save_matrix_json(m, "io_test.json");
    save_matrix_text(m, "io_test.txt");
    CHECK(bitwise_equal(load_matrix_file("io_test.json"), m));
    CHECK(bitwise_equal(load_matrix_file("io_test.txt"), m));
    std::remove("io_test.json");
    std::remove("io_test.txt");
    CHECK_THROWS_AS(load_matrix_file("io_test.json"), Error);
}

TEST_CASE("malformed matrix files are rejected") {
    CHECK_THROWS_AS(matrix_from_json("{\"n\": 2}"), Error);
    CHECK_THROWS_AS(matrix_from_json("{\"n\": 2, \"data\": [[1,0]]}"), Error);
    CHECK_THROWS_AS(matrix_from_json("{\"n\": 2, \"data\": [[1,0],[0,0],[0,0],\"x\"]}"), Error);
    CHECK_THROWS_AS(matrix_from_json("not json"), Error);
    CHECK_THROWS_AS(matrix_from_text("2\n1 0\n0 0\n0 0\n"), Error);          // truncated
    CHECK_THROWS_AS(matrix_from_text("2\n1 0\n0 0\n0 0\n1 0\n9 9\n"), Error); // trailing
    CHECK_THROWS_AS(matrix_from_text("2\n1 0\nnan 0\n0 0\n1 0\n"), Error);    // non-finite
    CHECK_THROWS_AS(matrix_from_text("0\n"), Error);
}

TEST_CASE("ensemble spec JSON round trip") {
    EnsembleSpec spec;
    spec.family = Family::scaled;
    spec.base = Family::hermitian;
    spec.scale = Complex{0.25, -1.5};
    spec.n = 6;
    spec.count = 42;
    spec.seed = 123456789ULL;
    const EnsembleSpec back = ensemble_from_json(ensemble_to_json(spec));
    CHECK(back.family == spec.family);
    CHECK(back.base == spec.base);
    CHECK(back.scale == spec.scale);
    CHECK(back.n == spec.n);
    CHECK(back.count == spec.count);
    CHECK(back.seed == spec.seed);

    CHECK_THROWS_AS(ensemble_from_json("{\"family\": \"scaled\", \"n\": 2}"), Error);
    CHECK_THROWS_AS(ensemble_from_json("{\"n\": 2}"), Error);
}
