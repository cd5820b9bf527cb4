#include <doctest.h>

#include <cmath>
#include <numbers>

#include "core/bounds.hpp"
#include "core/ensembles.hpp"
#include "core/harness.hpp"
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

BoundCase simple_case(const std::string& id) { return make_case(id, CaseParams{}); }

BoundCase phi_case(const std::string& id, const std::string& phi) {
    CaseParams p;
    p.phi = phi;
    return make_case(id, p);
}

double quantity(const BoundEvaluation& ev, const std::string& name) {
    for (const auto& [key, value] : ev.quantities)
        if (key == name) return value;
    FAIL("missing quantity ", name);
    return 0.0;
}

} // namespace

TEST_CASE("power_norm with expm1 on the 2x2 Jordan block") {
    const BoundEvaluation ev = evaluate_bound(phi_case("power_norm", "expm1"), jordan(2));
    REQUIRE(ev.chain.size() == 3);
    CHECK(ev.chain[0].second == doctest::Approx(0.5).epsilon(1e-10));
    // log((1+e)/2), frozen from an independent high-precision evaluation
    CHECK(ev.chain[1].second == doctest::Approx(0.62011450695827752).epsilon(1e-12));
    CHECK(ev.chain[2].second == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev.all_pass());
}

TEST_CASE("cor_N222 on the 2x2 Jordan block") {
    const BoundEvaluation ev = evaluate_bound(simple_case("cor_N222"), jordan(2));
    REQUIRE(ev.chain.size() == 3);
    CHECK(ev.chain[0].second == doctest::Approx(0.5).epsilon(1e-10));
    // sqrt(log((1+e)/2))
    CHECK(ev.chain[1].second == doctest::Approx(0.78747349603543961).epsilon(1e-12));
    CHECK(ev.chain[2].second == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev.all_pass());
}

TEST_CASE("cor_1_1 collapses to equality on diag(1,-1)") {
    const BoundEvaluation ev = evaluate_bound(simple_case("cor_1_1"), CMatrix{{1.0, 0.0}, {0.0, -1.0}});
    REQUIRE(ev.chain.size() == 3);
    for (const auto& [name, value] : ev.chain) CHECK(value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ev.all_pass());
}

TEST_CASE("th7_power middle term against a brute-force evaluation on J3") {
    CaseParams p;
    p.phi = "power:p=1";
    p.n = 3;
    const BoundEvaluation ev = evaluate_bound(make_case("th7_power", p), jordan(3));
    REQUIRE(ev.chain.size() == 3);

    // T^3 = 0, ||T|| = ||T^2|| = 1, so the middle reduces to the k-sum.
    const CMatrix t = jordan(3);
    double brute = std::ldexp(1.0, -2) * numerical_radius(matrix_power(t, 3)).value;
    for (int k = 1; k <= 2; ++k)
        brute += std::ldexp(1.0, -k) * operator_norm(matrix_power(t, k)) * std::pow(operator_norm(t), 3 - k);
    CHECK(ev.chain[1].second == doctest::Approx(brute).epsilon(1e-12));
    CHECK(ev.chain[1].second == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(ev.chain[0].second == doctest::Approx(std::pow(std::cos(std::numbers::pi / 4.0), 3)).epsilon(1e-8));
    CHECK(ev.all_pass());
}

TEST_CASE("cor_nilpotent constants and applicability") {
    CaseParams p;
    p.n = 4;
    const BoundEvaluation ev = evaluate_bound(make_case("cor_nilpotent", p), jordan(4));
    REQUIRE(ev.chain.size() == 2);
    CHECK(quantity(ev, "nilpotent_constant") == doctest::Approx(0.97875458578337463).epsilon(1e-12));
    CHECK(ev.chain[0].second == doctest::Approx(std::cos(std::numbers::pi / 5.0)).epsilon(1e-8));
    CHECK(ev.all_pass());

    CHECK_THROWS_AS(evaluate_bound(make_case("cor_nilpotent", p), CMatrix::identity(3)), Error);
}

TEST_CASE("vector lemmas: equality and hand-computed cases") {
    // Buzano with x = y = e = (1,0): both sides are 1.
    VectorLemmaInputs in;
    in.vectors = {{Complex{1.0, 0.0}, Complex{0.0, 0.0}}, {Complex{1.0, 0.0}, Complex{0.0, 0.0}}};
    in.e = {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
    BoundEvaluation ev = check_vector_lemma(simple_case("buzano_vec"), in);
    CHECK(ev.chain[0].second == doctest::Approx(1.0));
    CHECK(ev.chain[1].second == doctest::Approx(1.0));
    CHECK(ev.all_pass());

    // Orthogonal x, y with e on the diagonal: both sides are 1/2.
    const double s = 1.0 / std::numbers::sqrt2;
    in.vectors = {{Complex{1.0, 0.0}, Complex{0.0, 0.0}}, {Complex{0.0, 0.0}, Complex{1.0, 0.0}}};
    in.e = {Complex{s, 0.0}, Complex{s, 0.0}};
    ev = check_vector_lemma(simple_case("buzano_vec"), in);
    CHECK(ev.chain[0].second == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ev.chain[1].second == doctest::Approx(0.5).epsilon(1e-14));

    // McCarthy on diag(1,4), x = (1,1)/sqrt(2), r = 2: 6.25 <= 8.5.
    VectorLemmaInputs mc;
    mc.psd = CMatrix{{1.0, 0.0}, {0.0, 4.0}};
    mc.vectors = {{Complex{s, 0.0}, Complex{s, 0.0}}};
    CaseParams p;
    p.r = 2.0;
    ev = check_vector_lemma(make_case("mccarthy_vec", p), mc);
    CHECK(ev.chain[0].second == doctest::Approx(6.25).epsilon(1e-12));
    CHECK(ev.chain[1].second == doctest::Approx(8.5).epsilon(1e-12));
    CHECK(ev.all_pass());

    // Unnormalized e is rejected.
    in.e = {Complex{1.0, 0.0}, Complex{1.0, 0.0}};
    CHECK_THROWS_AS(check_vector_lemma(simple_case("buzano_vec"), in), Error);
}

TEST_CASE("vector lemmas hold on seeded inputs for every kind") {
    const std::vector<std::pair<std::string, CaseParams>> lemmas = [] {
        std::vector<std::pair<std::string, CaseParams>> out;
        out.push_back({"buzano_vec", {}});
        CaseParams v;
        v.v = 0.5;
        out.push_back({"gen_cauchy_vec", v});
        CaseParams r;
        r.r = 1.5;
        out.push_back({"mccarthy_vec", r});
        CaseParams s;
        s.s = 0.25;
        out.push_back({"mixed_schwarz_vec", s});
        CaseParams phi;
        phi.phi = "expm1";
        out.push_back({"op_jensen_vec", phi});
        CaseParams n;
        n.n = 4;
        out.push_back({"ext_buzano_vec", n});
        CaseParams ob;
        ob.phi = "expsq";
        out.push_back({"orlicz_buzano_vec", ob});
        return out;
    }();

    for (const auto& [id, params] : lemmas) {
        const BoundCase bc = make_case(id, params);
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            const CMatrix t = draw(Family::ginibre, 6, 3000 + seed);
            const BoundEvaluation ev = evaluate_vector_lemma_seeded(bc, t, seed);
            CAPTURE(id);
            CAPTURE(seed);
            REQUIRE(ev.status == EvalStatus::ok);
            CHECK(ev.all_pass());
        }
    }
}

TEST_CASE("gen_cauchy_vec keeps the full three-term chain ordered") {
    CaseParams p;
    p.v = 0.25;
    const BoundCase bc = make_case("gen_cauchy_vec", p);
    const BoundEvaluation ev = evaluate_vector_lemma_seeded(bc, draw(Family::ginibre, 5, 77), 9);
    REQUIRE(ev.chain.size() == 3);
    CHECK(ev.all_pass());
}

TEST_CASE("specialization consistency: th1_product at phi=t, v=1/2 equals cor_N1") {
    const CMatrix t = draw(Family::ginibre, 4, 1234);
    const CMatrix s = draw(Family::ginibre, 4, 5678);
    QuantityCache q1(t, s), q2(t, s);

    CaseParams p;
    p.phi = "power:p=1";
    p.v = 0.5;
    const BoundEvaluation general = evaluate_bound(make_case("th1_product", p), q1);
    const BoundEvaluation special = evaluate_bound(simple_case("cor_N1"), q2);

    // phi = t makes the general LHS w^2 and its RHS the corollary's mix.
    CHECK(std::abs(general.chain[0].second - special.chain[0].second) <=
          1e-12 * std::max(1.0, special.chain[0].second));
    CHECK(std::abs(general.chain[1].second - special.chain[1].second) <=
          1e-12 * std::max(1.0, special.chain[1].second));
}

TEST_CASE("specialization consistency: th2_gh at phi=t, s=1/2, v=1/2 equals cor_22") {
    const CMatrix t = draw(Family::ginibre, 4, 999);
    QuantityCache q1(t), q2(t);
    CaseParams p;
    p.phi = "power:p=1";
    p.v = 0.5;
    p.s = 0.5;
    const BoundEvaluation general = evaluate_bound(make_case("th2_gh", p), q1);
    const BoundEvaluation special = evaluate_bound(simple_case("cor_22"), q2);
    CHECK(std::abs(general.chain[1].second - special.chain[1].second) <=
          1e-12 * std::max(1.0, special.chain[1].second));
}

TEST_CASE("specialization consistency: th8 with expm1 matches the log-mean corollaries") {
    const CMatrix t = draw(Family::ginibre, 3, 4321);
    QuantityCache q(t);
    const BoundEvaluation c11 = evaluate_bound(simple_case("cor_1_1"), q);
    const double wt2 = quantity(c11, "w(T^2)");
    const double half_norm = quantity(c11, "half_norm_sq_sum");
    const double mid = c11.chain[1].second;
    // e^mid - 1 = (phi(w(T^2)) + phi(half_norm)) / 2 for phi = e^t - 1.
    const double th8_branch = 0.5 * std::expm1(wt2) + 0.5 * std::expm1(half_norm);
    CHECK(std::abs(std::expm1(mid) - th8_branch) <= 1e-12 * std::max(1.0, th8_branch));
}

TEST_CASE("specialization consistency: th7_power with expm1 at n=2 matches cor_N222") {
    const CMatrix t = draw(Family::ginibre, 3, 8765);
    QuantityCache q1(t), q2(t);
    CaseParams p;
    p.phi = "expm1";
    p.n = 2;
    const BoundEvaluation th7 = evaluate_bound(make_case("th7_power", p), q1, Tolerances{}, 4.0);
    const BoundEvaluation c222 = evaluate_bound(simple_case("cor_N222"), q2, Tolerances{}, 4.0);
    // th7's tail value M and the corollary's midpoint m satisfy m^2 = log(1+M).
    const double m = c222.chain[1].second;
    const double M = th7.chain[2].second;
    CHECK(std::abs(m * m - std::log1p(M)) <= 1e-12 * std::max(1.0, m * m));
}

TEST_CASE("norm-cap evaluation equals evaluating the pre-scaled matrix") {
    const CMatrix t = draw(Family::ginibre, 5, 31415);
    const double norm = operator_norm(t);
    REQUIRE(norm > 2.0);
    const CMatrix scaled = t * Complex{2.0 / norm, 0.0};

    const std::vector<BoundCase> cases = [] {
        std::vector<BoundCase> out;
        CaseParams th3;
        th3.phi = "expm1";
        th3.alpha = 0.5;
        th3.variant = 'a';
        out.push_back(make_case("th3_alpha", th3));
        out.push_back(phi_case("th5", "expm1"));
        out.push_back(phi_case("cor_halfsum_sq", "expsq"));
        out.push_back(simple_case("cor_N222"));
        return out;
    }();
    for (const BoundCase& bc : cases) {
        const BoundEvaluation capped = evaluate_bound(bc, t, nullptr, Tolerances{}, 2.0);
        const BoundEvaluation direct = evaluate_bound(bc, scaled, nullptr, Tolerances{});
        REQUIRE(capped.chain.size() == direct.chain.size());
        for (std::size_t i = 0; i < capped.chain.size(); ++i) {
            CHECK(std::abs(capped.chain[i].second - direct.chain[i].second) <=
                  1e-10 * std::max(1.0, std::abs(direct.chain[i].second)));
        }
    }
}

TEST_CASE("cor_N1 records the printed-form delta and it stays tiny") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const CMatrix t = draw(Family::ginibre, 4, 100 + seed);
        const CMatrix s = draw(Family::ginibre, 4, 200 + seed);
        const BoundEvaluation ev = evaluate_bound(simple_case("cor_N1"), t, &s);
        CHECK(quantity(ev, "printed_lhs_delta") <= 1e-9 * std::max(1.0, ev.chain[0].second));
        CHECK(ev.all_pass());
    }
}

TEST_CASE("th6 with r=1 never exceeds the product baseline when the min picks w(|T||T*|)") {
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        // Hermitian draws tie the two min branches, so the w(|T||T*|) branch
        // is actually exercised; ginibre draws tend to pick w(T^2).
        for (Family fam : {Family::ginibre, Family::hermitian}) {
            const CMatrix t = draw(fam, 4, 300 + seed);
            QuantityCache q1(t), q2(t);
            CaseParams p;
            p.r = 1.0;
            const BoundEvaluation th6 = evaluate_bound(make_case("th6_power", p), q1);
            const BoundEvaluation bhunia = evaluate_bound(simple_case("base_bhunia"), q2);
            if (quantity(th6, "min_selects_wprod") > 0.5) {
                ++hits;
                CHECK(th6.chain[1].second <= bhunia.chain[1].second + 1e-9);
            }
        }
    }
    CHECK(hits > 0);
}

TEST_CASE("equality collapse for Hermitian inputs") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const CMatrix a = draw(Family::hermitian, 2 + static_cast<int>(seed % 4), 400 + seed);
        for (const char* id : {"cor_1_1", "cor_N222"}) {
            const BoundEvaluation ev = evaluate_bound(simple_case(id), a);
            double lo = ev.chain[0].second, hi = ev.chain[0].second;
            for (const auto& [name, value] : ev.chain) {
                lo = std::min(lo, value);
                hi = std::max(hi, value);
            }
            CHECK(hi - lo <= 1e-8 * std::max(1.0, hi));
        }
        const BoundEvaluation pn = evaluate_bound(phi_case("power_norm", "expm1"), a);
        double lo = pn.chain[0].second, hi = pn.chain[0].second;
        for (const auto& [name, value] : pn.chain) {
            lo = std::min(lo, value);
            hi = std::max(hi, value);
        }
        CHECK(hi - lo <= 1e-8 * std::max(1.0, hi));
    }
}

TEST_CASE("case construction: gating and parameter validation") {
    CaseParams p;
    p.phi = "expm1";
    p.v = 0.5;
    CHECK_THROWS_AS(make_case("th1_product", p), Error); // unverified sub-multiplicativity

    CaseParams ok;
    ok.phi = "power:p=1.5";
    ok.v = 0.5;
    CHECK_NOTHROW(make_case("th1_product", ok));

    CaseParams bad_alpha;
    bad_alpha.phi = "expm1";
    bad_alpha.alpha = 1.5;
    CHECK_THROWS_AS(make_case("th3_alpha", bad_alpha), Error);

    CaseParams t_edge;
    t_edge.v = 1.0; // cor_11 requires t strictly inside (0,1)
    CHECK_THROWS_AS(make_case("cor_11", t_edge), Error);

    CaseParams extra;
    extra.alpha = 0.5;
    CHECK_THROWS_AS(make_case("base_norm", extra), Error);

    CHECK_THROWS_AS(case_info("no_such_case"), Error);
    const CMatrix j2 = jordan(2);
    CHECK_THROWS_AS(evaluate_bound(simple_case("base_norm"), j2, &j2), Error);          // stray S
    CHECK_THROWS_AS(evaluate_bound(simple_case("cor_N1"), j2, nullptr), Error);         // missing S
}

TEST_CASE("phi overflow inside a chain is untestable, not a failure") {
    CaseParams p;
    p.phi = "expm1";
    p.n = 5;
    // ||T|| = 4 gives ||T||^5 = 1024 > 700 without a cap.
    const CMatrix t = CMatrix{{4.0, 0.0}, {0.0, 0.0}};
    const BoundEvaluation ev = evaluate_bound(make_case("th7_power", p), t);
    CHECK(ev.status == EvalStatus::untestable);
    CHECK(ev.chain.empty());

    const BoundEvaluation capped = evaluate_bound(make_case("th7_power", p), t, nullptr, Tolerances{}, 3.5);
    CHECK(capped.status == EvalStatus::ok);
    CHECK(capped.all_pass());
}

TEST_CASE("gate_phi_for_submult verifies a range or rejects") {
    CHECK_THROWS_AS(gate_phi_for_submult(OrliczFn::exp_minus_one(), 0.5, 10.0), Error);
    const OrliczFn gated = gate_phi_for_submult(OrliczFn::exp_minus_one(), 0.01, 0.9);
    CHECK(gated.submult_status().state == SubmultStatus::State::checked);
    CHECK(gate_phi_for_submult(OrliczFn::power(2.0), 0.1, 100.0).submult_status().state ==
          SubmultStatus::State::exact);
}

TEST_CASE("every operator case holds across a mixed mini-ensemble") {
    std::vector<std::pair<BoundCase, double>> cases; // (case, cap)
    auto add = [&cases](const std::string& id, CaseParams p, double cap = 0.0) {
        cases.emplace_back(make_case(id, p), cap);
    };

    add("base_norm", {});
    add("base_kittaneh", {});
    {
        CaseParams p;
        p.r = 1.5;
        add("base_elhaddad", p);
        add("dragomir_product", p);
        add("th6_power", p);
    }
    add("base_abuomar", {});
    add("base_bhunia", {});
    {
        CaseParams p;
        p.phi = "expm1";
        add("power_norm", p, 4.0);
        add("th5", p, 4.0);
        add("th6", p, 4.0);
        add("th8", p, 4.0);
        add("cor_halfsum", p, 4.0);
        add("cor_halfsum_sq", p, 4.0);
    }
    {
        CaseParams p;
        p.phi = "powerlog:p=1";
        add("power_norm", p);
        add("th5", p);
        add("cor_halfsum", p);
    }
    {
        CaseParams p;
        p.phi = "power:p=2";
        p.v = 0.75;
        add("th1_product", p);
        p.s = 0.25;
        add("th2_gh", p);
    }
    {
        CaseParams p;
        p.r = 2.0;
        p.v = 0.25;
        add("cor_th1_power", p);
        add("cor_th1_power_t", p);
    }
    add("cor_N1", {});
    {
        CaseParams p;
        p.v = 0.5;
        add("cor_11", p);
        p.s = 0.75;
        add("cor_th2_linear", p);
    }
    add("cor_22", {});
    {
        CaseParams p;
        p.phi = "expsq";
        p.alpha = 0.75;
        p.variant = 'b';
        add("th3_alpha", p, 4.0);
        p.s = 0.5;
        add("th4_gh_alpha", p, 2.25);
    }
    {
        CaseParams p;
        p.phi = "expm1";
        p.n = 3;
        add("th7_power", p, 4.0);
    }
    {
        CaseParams p;
        p.n = 4;
        add("cor_nil", p, 4.0);
    }
    add("cor_N222", {}, 4.0);
    add("cor_1_1", {}, 4.0);
    add("cor_1_2", {}, 4.0);
    add("cor_prop1", {}, 4.0);

    const std::vector<Family> fams{Family::ginibre, Family::hermitian, Family::normal, Family::unitary,
                                   Family::nilpotent_random, Family::rank1};
    for (Family fam : fams) {
        for (int index = 0; index < 3; ++index) {
            const int n = 2 + index;
            const CMatrix t = draw(fam, n, 5000 + static_cast<std::uint64_t>(fam), index);
            EnsembleSpec pair_spec;
            pair_spec.family = fam;
            pair_spec.n = n;
            pair_spec.count = index + 1;
            pair_spec.seed = 5000 + static_cast<std::uint64_t>(fam);
            const CMatrix s = generate(paired_spec(pair_spec), index);
            QuantityCache cache(t, s);
            for (const auto& [bc, cap] : cases) {
                CAPTURE(bc.key());
                CAPTURE(family_to_string(fam));
                CAPTURE(index);
                const BoundEvaluation ev = evaluate_bound(bc, cache, Tolerances{}, cap);
                if (ev.status == EvalStatus::ok) CHECK(ev.all_pass());
            }
        }
    }
}

TEST_CASE("w upper estimates dominate the true radius") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const CMatrix t = draw(Family::ginibre, 3, 600 + seed);
        QuantityCache cache(t);
        const double w = cache.w_T();
        for (const char* id : {"base_norm", "base_kittaneh", "base_abuomar", "base_bhunia", "cor_N222",
                               "cor_1_1", "cor_prop1"}) {
            BoundCase bc = simple_case(id);
            const BoundEvaluation ev = evaluate_bound(bc, cache, Tolerances{}, 4.0);
            CHECK(w_upper_estimate(bc, ev) >= w - 1e-8 * std::max(1.0, w));
        }
        BoundCase pn = phi_case("power_norm", "expm1");
        CHECK(w_upper_estimate(pn, evaluate_bound(pn, cache, Tolerances{}, 4.0)) >= w - 1e-8);
        BoundCase th6 = phi_case("th6", "power:p=2");
        CHECK(w_upper_estimate(th6, evaluate_bound(th6, cache, Tolerances{})) >= w - 1e-8);
    }
}

TEST_CASE("selftest_corrupt fails on purpose") {
    const BoundEvaluation ev = evaluate_bound(simple_case("selftest_corrupt"), draw(Family::ginibre, 3, 777));
    CHECK_FALSE(ev.all_pass());
}
