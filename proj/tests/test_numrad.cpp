#include <doctest.h>

#include <cmath>
#include <numbers>

#include "core/ensembles.hpp"
#include "core/linalg.hpp"
#include "core/numrad.hpp"

using namespace orad;

namespace {

CMatrix draw(Family family, int n, std::uint64_t seed, int index = 0) {
    EnsembleSpec spec;
    spec.family = family;
    spec.n = n;
    spec.count = index + 1;
    spec.seed = seed;
    return generate(spec, index);
}

CMatrix jordan(int n) { return draw(Family::nilpotent_jordan, n, 0); }

} // namespace

TEST_CASE("rotation_support: Jordan block is 1/2 for every angle") {
    const CMatrix j2{{0.0, 1.0}, {0.0, 0.0}};
    for (double theta : {0.0, 0.3, 1.7, 3.14159, 5.5}) {
        CHECK(rotation_support(j2, theta) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("rotation_support: identity flips sign across the circle") {
    const CMatrix id = CMatrix::identity(3);
    CHECK(rotation_support(id, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(rotation_support(id, std::numbers::pi) == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("rotation_support: matches explicit H_theta eigenvalue") {
    const double theta = 0.7;
    const CMatrix t = draw(Family::ginibre, 4, 21);
    const Complex phase{std::cos(theta), std::sin(theta)};
    CMatrix h(4);
    const CMatrix adj = t.adjoint();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) h.at(i, j) = 0.5 * (phase * t.at(i, j) + std::conj(phase) * adj.at(i, j));
    const double direct = hermitian_eig(h).values[0];
    CHECK(rotation_support(t, theta) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("numerical_radius: analytic spot values") {
    CHECK(numerical_radius(jordan(2)).value == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(numerical_radius(CMatrix{{1.0, 1.0}, {0.0, 1.0}}).value == doctest::Approx(1.5).epsilon(1e-9));
    // w of the n=3 Jordan block is cos(pi/4).
    CHECK(numerical_radius(jordan(3)).value == doctest::Approx(0.7071067811865475).epsilon(1e-9));
    CHECK(numerical_radius(CMatrix{{3.0, 0.0}, {0.0, -4.0}}).value == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("numerical_radius: result invariants") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const CMatrix t = draw(Family::ginibre, 3 + static_cast<int>(seed % 4), 400 + seed);
        const RadiusResult r = numerical_radius(t);
        const double norm = operator_norm(t);
        const int n = t.dim();
        CHECK(r.certified_error <= 1e-9 * std::max(1.0, norm));
        CHECK(r.value <= norm + r.certified_error);
        CHECK(r.value >= std::abs(t.trace()) / n - r.certified_error);
        CHECK(r.value >= 0.5 * norm - 1e-9);
        CHECK(r.theta_star >= 0.0);
        CHECK(r.theta_star < 2.0 * std::numbers::pi);
    }
}

TEST_CASE("numerical_radius: grid too small is rejected") {
    RadiusOptions opts;
    opts.grid = 8;
    CHECK_THROWS_AS(numerical_radius(jordan(2), opts), Error);
}

TEST_CASE("numerical_radius: zero matrix") {
    const RadiusResult r = numerical_radius(CMatrix(3));
    CHECK(r.value == doctest::Approx(0.0));
    CHECK(r.certified_error <= 1e-9);
}

TEST_CASE("numerical_radius: adjoint invariance and homogeneity") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const CMatrix t = draw(Family::ginibre, 4, 500 + seed);
        const double wt = numerical_radius(t).value;
        CHECK(std::abs(numerical_radius(t.adjoint()).value - wt) <= 2e-9 * std::max(1.0, wt));

        const Complex c{-1.3, 0.7};
        const double wc = numerical_radius(t * c).value;
        CHECK(std::abs(wc - std::abs(c) * wt) <= 2e-9 * std::max(1.0, std::abs(c)) * std::max(1.0, wt));
    }
}

TEST_CASE("numerical_radius: unitary similarity invariance") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const CMatrix t = draw(Family::ginibre, 5, 600 + seed);
        const CMatrix u = draw(Family::unitary, 5, 700 + seed);
        const CMatrix conj = u.adjoint() * t * u;
        CHECK(std::abs(numerical_radius(conj).value - numerical_radius(t).value) <=
              2e-9 * std::max(1.0, numerical_radius(t).value));
    }
}

TEST_CASE("numerical_radius: Hermitian equals spectral radius") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const CMatrix a = draw(Family::hermitian, 4, 800 + seed);
        const auto vals = hermitian_eigvalues(a);
        const double spectral = std::max(std::abs(vals.front()), std::abs(vals.back()));
        CHECK(numerical_radius(a).value == doctest::Approx(spectral).epsilon(1e-9));
    }
}

TEST_CASE("radius_oracle: lower bound that converges on spot cases") {
    CHECK(radius_oracle(CMatrix(3), 10, 1) == doctest::Approx(0.0));

    const double j2_oracle = radius_oracle(jordan(2), 10000, 42);
    CHECK(j2_oracle >= 0.499);
    CHECK(j2_oracle <= 0.5 + 1e-12);

    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const CMatrix t = draw(Family::ginibre, 4, 900 + seed);
        const double w = numerical_radius(t).value;
        const double oracle = radius_oracle(t, 2000, seed);
        CHECK(oracle <= w + 1e-9 * std::max(1.0, w));
        CHECK(oracle >= 0.9 * w); // the eigenvector sweep gets very close
    }
}

TEST_CASE("radius_oracle: deterministic for a fixed seed") {
    const CMatrix t = draw(Family::ginibre, 4, 37);
    CHECK(radius_oracle(t, 500, 7) == radius_oracle(t, 500, 7));
    CHECK(radius_oracle(t, 1, 0) >= 0.0);
    CHECK_THROWS_AS(radius_oracle(t, 0, 7), Error);
}

TEST_CASE("range_boundary: identity, Jordan disk, and a real segment") {
    for (const BoundaryPoint& p : range_boundary(CMatrix::identity(2), 8))
        CHECK(std::abs(p.value - Complex{1.0, 0.0}) <= 1e-10);

    for (const BoundaryPoint& p : range_boundary(jordan(2), 360))
        CHECK(std::abs(p.value) == doctest::Approx(0.5).epsilon(1e-9));

    for (const BoundaryPoint& p : range_boundary(CMatrix{{0.0, 0.0}, {0.0, 1.0}}, 64)) {
        CHECK(std::abs(p.value.imag()) <= 1e-9);
        CHECK(p.value.real() >= -1e-9);
        CHECK(p.value.real() <= 1.0 + 1e-9);
    }

    CHECK_THROWS_AS(range_boundary(jordan(2), 2), Error);
}
