#include "toolkit.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "rng.hpp"

namespace orad {

namespace {

using json = nlohmann::ordered_json;

const std::vector<double> kUnitGrid{0.0, 0.25, 0.5, 0.75, 1.0};
const std::vector<double> kInteriorGrid{0.25, 0.5, 0.75};
const std::vector<double> kRGrid{1.0, 1.5, 2.0};
const std::vector<int> kNGrid{2, 3, 4, 5};
const std::vector<std::string> kPowerPhis{"power:p=1", "power:p=1.5", "power:p=2"};
const std::vector<std::string> kAnyPhisPoly{"power:p=1", "power:p=2", "powerlog:p=1"};
const std::vector<std::string> kAnyPhisExp{"expm1", "expsq"};

// Default normalization for exponential phi instances; tighter caps where the
// arguments reach 4th or 5th powers of the norm.
constexpr double kExpCap = 4.0;
constexpr double kExpCapPow5 = 3.5;  // ||T||^5 <= 525 < 700
constexpr double kExpsqCapPow4 = 2.25; // ||T||^4 <= 25.6 < 26

std::vector<EnsembleSpec> standard_ensembles(int count) {
    const std::vector<Family> fams{Family::ginibre,          Family::hermitian,
                                   Family::normal,           Family::unitary,
                                   Family::nilpotent_jordan, Family::nilpotent_random,
                                   Family::rank1};
    std::vector<EnsembleSpec> out;
    for (std::size_t f = 0; f < fams.size(); ++f) {
        for (int n = 2; n <= 8; ++n) {
            EnsembleSpec spec;
            spec.family = fams[f];
            spec.n = n;
            spec.count = count;
            spec.seed = 1000 * (static_cast<std::uint64_t>(f) + 1) + static_cast<std::uint64_t>(n);
            out.push_back(spec);
        }
    }
    return out;
}

CaseTemplate tpl(const std::string& id) {
    CaseTemplate t;
    t.id = id;
    return t;
}

} // namespace

SuiteConfig default_suite_config() {
    SuiteConfig config;
    config.ensembles = standard_ensembles(200);

    auto& cases = config.cases;

    cases.push_back(tpl("base_norm"));
    cases.push_back(tpl("base_kittaneh"));
    {
        CaseTemplate t = tpl("base_elhaddad");
        t.rs = kRGrid;
        cases.push_back(t);
    }
    cases.push_back(tpl("base_abuomar"));
    cases.push_back(tpl("base_bhunia"));
    {
        CaseTemplate t = tpl("dragomir_product");
        t.rs = kRGrid;
        cases.push_back(t);
    }

    {
        CaseTemplate t = tpl("power_norm");
        t.phis = kAnyPhisPoly;
        cases.push_back(t);
        t.phis = kAnyPhisExp;
        t.norm_cap = kExpCap;
        cases.push_back(t);
    }

    {
        CaseTemplate t = tpl("th1_product");
        t.phis = kPowerPhis;
        t.vs = kUnitGrid;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("cor_th1_power");
        t.rs = kRGrid;
        t.vs = kUnitGrid;
        cases.push_back(t);
    }
    cases.push_back(tpl("cor_N1"));
    {
        CaseTemplate t = tpl("cor_11");
        t.vs = kInteriorGrid;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("cor_th1_power_t");
        t.rs = kRGrid;
        t.vs = kInteriorGrid;
        cases.push_back(t);
    }

    {
        CaseTemplate t = tpl("th2_gh");
        t.phis = kPowerPhis;
        t.vs = kUnitGrid;
        t.ss = kUnitGrid;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("cor_th2_linear");
        t.vs = kUnitGrid;
        t.ss = kUnitGrid;
        cases.push_back(t);
    }
    cases.push_back(tpl("cor_22"));

    {
        CaseTemplate t = tpl("th3_alpha");
        t.phis = kAnyPhisPoly;
        t.alphas = kUnitGrid;
        t.variants = {'a', 'b'};
        cases.push_back(t);
        t.phis = kAnyPhisExp;
        t.norm_cap = kExpCap;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("th4_gh_alpha");
        t.phis = kAnyPhisPoly;
        t.alphas = kUnitGrid;
        t.ss = kUnitGrid;
        t.variants = {'a', 'b'};
        cases.push_back(t);
        t.phis = {"expm1"};
        t.norm_cap = kExpCap;
        cases.push_back(t);
        t.phis = {"expsq"};
        t.norm_cap = kExpsqCapPow4;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("cor_halfsum_sq");
        t.phis = kAnyPhisPoly;
        cases.push_back(t);
        t.phis = kAnyPhisExp;
        t.norm_cap = kExpCap;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("th5");
        t.phis = kAnyPhisPoly;
        cases.push_back(t);
        t.phis = {"expm1"};
        t.norm_cap = kExpCap;
        cases.push_back(t);
        t.phis = {"expsq"};
        t.norm_cap = kExpCapPow5; // 2 * 3.5^2 = 24.5 < 26
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("cor_halfsum");
        t.phis = kAnyPhisPoly;
        cases.push_back(t);
        t.phis = kAnyPhisExp;
        t.norm_cap = kExpCap;
        cases.push_back(t);
    }

    for (const char* id : {"th6", "th8"}) {
        CaseTemplate t = tpl(id);
        t.phis = kAnyPhisPoly;
        cases.push_back(t);
        t.phis = kAnyPhisExp;
        t.norm_cap = kExpCap;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("th6_power");
        t.rs = kRGrid;
        cases.push_back(t);
    }

    for (const char* id : {"cor_1_1", "cor_1_2", "cor_prop1", "cor_N222"}) {
        CaseTemplate t = tpl(id);
        t.norm_cap = kExpCap;
        cases.push_back(t);
    }

    {
        CaseTemplate t = tpl("th7_power");
        t.phis = {"power:p=1", "power:p=2"};
        t.ns = kNGrid;
        cases.push_back(t);
        t.phis = {"expm1"};
        t.ns = {2, 3, 4};
        t.norm_cap = kExpCap;
        cases.push_back(t);
        t.ns = {5};
        t.norm_cap = kExpCapPow5;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("cor_nil");
        t.ns = {2, 3, 4};
        t.norm_cap = kExpCap;
        cases.push_back(t);
        t.ns = {5};
        t.norm_cap = kExpCapPow5;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("cor_nilpotent");
        t.ns = kNGrid;
        EnsembleFilter f;
        f.families = {Family::nilpotent_jordan, Family::nilpotent_random};
        f.dim_le_n = true;
        t.filter = f;
        cases.push_back(t);
    }

    cases.push_back(tpl("buzano_vec"));
    {
        CaseTemplate t = tpl("gen_cauchy_vec");
        t.vs = kUnitGrid;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("mccarthy_vec");
        t.rs = kRGrid;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("mixed_schwarz_vec");
        t.ss = kUnitGrid;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("op_jensen_vec");
        t.phis = kAnyPhisPoly;
        cases.push_back(t);
        t.phis = kAnyPhisExp;
        t.norm_cap = kExpCap;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("ext_buzano_vec");
        t.ns = kNGrid;
        cases.push_back(t);
    }
    {
        CaseTemplate t = tpl("orlicz_buzano_vec");
        t.phis = kAnyPhisPoly;
        cases.push_back(t);
        t.phis = kAnyPhisExp;
        cases.push_back(t);
    }

    return config;
}

SuiteConfig selftest_suite_config() {
    SuiteConfig config;
    config.cases.push_back(tpl("selftest_corrupt"));
    EnsembleSpec spec;
    spec.family = Family::ginibre;
    spec.n = 3;
    spec.count = 25;
    spec.seed = 424242;
    config.ensembles.push_back(spec);
    return config;
}

std::string catalogue_json() {
    json arr = json::array();
    for (const CaseInfo& info : catalogue()) {
        json j;
        j["id"] = info.id;
        j["description"] = info.description;
        j["params"] = info.params;
        j["chain"] = info.chain;
        j["two_operator"] = info.two_operator;
        j["vector_lemma"] = info.vector_lemma;
        j["needs_submultiplicative_phi"] = info.needs_submult;
        j["nilpotent_only"] = info.nilpotent_only;
        j["comparable"] = info.comparable;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

BoundCase parse_case_spec(const std::string& spec) {
    std::string id = spec;
    CaseParams params;
    const std::size_t bracket = spec.find('[');
    if (bracket != std::string::npos) {
        require(spec.back() == ']', ErrCode::parse, "malformed case spec '" + spec + "'");
        id = spec.substr(0, bracket);
        std::string body = spec.substr(bracket + 1, spec.size() - bracket - 2);
        std::istringstream ss(body);
        std::string part;
        while (std::getline(ss, part, ';')) {
            if (part.empty()) continue;
            const std::size_t eq = part.find('=');
            require(eq != std::string::npos, ErrCode::parse, "malformed case parameter '" + part + "'");
            const std::string key = part.substr(0, eq);
            const std::string value = part.substr(eq + 1);
            auto as_double = [&value, &part]() {
                std::size_t pos = 0;
                double x = 0.0;
                try {
                    x = std::stod(value, &pos);
                } catch (const std::exception&) {
                    fail(ErrCode::parse, "malformed numeric parameter '" + part + "'");
                }
                require(pos == value.size(), ErrCode::parse, "malformed numeric parameter '" + part + "'");
                return x;
            };
            if (key == "phi")
                params.phi = value;
            else if (key == "alpha")
                params.alpha = as_double();
            else if (key == "v")
                params.v = as_double();
            else if (key == "s")
                params.s = as_double();
            else if (key == "r")
                params.r = as_double();
            else if (key == "n")
                params.n = static_cast<int>(as_double());
            else if (key == "variant") {
                require(value.size() == 1, ErrCode::parse, "variant must be a single character");
                params.variant = value[0];
            } else {
                fail(ErrCode::parse, "unknown case parameter '" + key + "'");
            }
        }
    }
    return make_case(id, params);
}

std::string compare_csv(const EnsembleSpec& spec, const std::vector<BoundCase>& bounds, RadiusOptions ropts) {
    require(!bounds.empty(), ErrCode::invalid_argument, "compare needs at least one bound");
    for (const BoundCase& bc : bounds) {
        const CaseInfo& info = case_info(bc.id);
        require(info.comparable && !info.two_operator && !info.vector_lemma, ErrCode::not_applicable,
                "bound '" + bc.id + "' cannot be compared against w(T) on a single-operator ensemble");
        if (info.nilpotent_only)
            require(spec.family == Family::nilpotent_jordan || spec.family == Family::nilpotent_random,
                    ErrCode::not_applicable, "bound '" + bc.id + "' applies only to nilpotent ensembles");
    }

    auto fmt = [](double x) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return std::string(buf);
    };

    std::ostringstream os;
    os << "seed,index,n,w";
    for (const BoundCase& bc : bounds) os << ",\"" << bc.key() << "\"";
    os << "\n";

    for (int i = 0; i < spec.count; ++i) {
        const CMatrix t = generate(spec, i);
        QuantityCache cache(t, std::nullopt, ropts);
        os << spec.seed << "," << i << "," << spec.n << "," << fmt(cache.w_T());
        for (const BoundCase& bc : bounds) {
            const BoundEvaluation ev = evaluate_bound(bc, cache, Tolerances{});
            if (ev.status == EvalStatus::untestable) {
                os << ",";
            } else {
                os << "," << fmt(w_upper_estimate(bc, ev));
            }
        }
        os << "\n";
    }
    return os.str();
}

FuzzResult fuzz_case(const BoundCase& bc, double seconds, std::uint64_t seed, long long max_iters,
                     Tolerances tol) {
    require(seconds > 0.0 || max_iters > 0, ErrCode::invalid_argument,
            "fuzz needs a positive time budget or iteration count");
    const CaseInfo& info = case_info(bc.id);
    require(!info.nilpotent_only, ErrCode::not_applicable, "fuzz does not target nilpotent-only cases");

    const std::vector<Family> pool{Family::ginibre, Family::hermitian, Family::normal, Family::nilpotent_random,
                                   Family::rank1};

    FuzzResult res;
    res.bc = bc;
    res.lemma_seed = rng::counter_hash(seed, 0, 0x7EC7A11CULL);

    const auto t0 = std::chrono::steady_clock::now();
    auto out_of_budget = [&](long long iter) {
        if (max_iters > 0) return iter >= max_iters;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() >= seconds;
    };

    auto evaluate = [&](const CMatrix& t, const CMatrix* s) -> double {
        BoundEvaluation ev;
        if (info.vector_lemma)
            ev = evaluate_vector_lemma_seeded(bc, t, res.lemma_seed, tol);
        else if (info.two_operator)
            ev = evaluate_bound(bc, t, s, tol);
        else
            ev = evaluate_bound(bc, t, nullptr, tol);
        if (ev.status != EvalStatus::ok) return -1.0;
        return ev.ratio(0);
    };

    for (long long k = 0;; ++k) {
        if (out_of_budget(k)) break;
        EnsembleSpec spec;
        spec.family = pool[static_cast<std::size_t>(k) % pool.size()];
        spec.n = 2 + static_cast<int>((static_cast<std::size_t>(k) / pool.size()) % 5);
        spec.count = 1 << 30;
        spec.seed = seed;

        CMatrix cand = generate(spec, static_cast<int>(k % (1 << 30)));
        if (res.iterations > 0 && (k % 3 == 2) && res.best_t.dim() == cand.dim()) {
            // Perturb the incumbent with a shrinking step.
            const double scale = 0.25 / (1.0 + static_cast<double>(k) / 200.0);
            cand = res.best_t + cand * Complex{scale, 0.0};
        }
        std::optional<CMatrix> s;
        if (info.two_operator) s = generate(paired_spec(spec), static_cast<int>(k % (1 << 30)));

        const double ratio = evaluate(cand, s ? &*s : nullptr);
        ++res.iterations;
        if (ratio > res.best_ratio) {
            res.best_ratio = ratio;
            res.best_t = cand;
            res.best_s = s;
        }
    }

    require(res.iterations > 0 && res.best_t.dim() > 0, ErrCode::internal, "fuzz produced no evaluations");
    res.violation = res.best_ratio > 1.0 + tol.band(1.0);
    return res;
}

} // namespace orad
