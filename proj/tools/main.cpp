// Command-line front end for the orlicz_radius shared library. Everything
// goes through the C API; stdout carries machine-parseable key=value lines
// and human-oriented tables go to stderr under --verbose.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orlicz_radius.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void die(const std::string& message, int code = kExitUsage) { throw CliError{code, message}; }

void check(int rc) {
    if (rc != ORX_OK) die(std::string(orx_last_error()) + " (status " + std::to_string(rc) + ")");
}

template <typename F>
std::string take_string(F&& call) {
    char* s = nullptr;
    check(call(&s));
    std::string out(s);
    orx_string_free(s);
    return out;
}

std::string kv(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) die("cannot open '" + path + "' for writing");
    out << content;
    if (!out.good()) die("write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) die("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct MatrixHandle {
    orx_matrix* m = nullptr;
    ~MatrixHandle() { orx_matrix_free(m); }
};

// ---------------------------------------------------------------- radius --

struct RadiusArgs {
    std::string matrix_file;
    int grid = 0;
    double tol = 0.0;
    int boundary = 0;
    std::string boundary_out = "boundary.csv";
};

int cmd_radius(const RadiusArgs& args) {
    MatrixHandle t;
    check(orx_matrix_load(args.matrix_file.c_str(), &t.m));
    orx_radius_result res{};
    check(orx_numerical_radius(t.m, args.grid, args.tol, &res));
    std::cout << "w=" << kv(res.value) << "\n";
    std::cout << "theta_star=" << kv(res.theta_star) << "\n";
    std::cout << "certified_error=" << kv(res.certified_error) << "\n";
    std::cout << "grid_points=" << res.grid_points << "\n";
    std::cout << "refinements=" << res.refinements << "\n";
    if (args.boundary > 0) {
        std::vector<double> th(static_cast<std::size_t>(args.boundary));
        std::vector<double> re(th.size());
        std::vector<double> im(th.size());
        check(orx_range_boundary(t.m, args.boundary, th.data(), re.data(), im.data()));
        std::ostringstream os;
        os << "theta,re,im\n";
        for (std::size_t i = 0; i < th.size(); ++i)
            os << kv(th[i]) << "," << kv(re[i]) << "," << kv(im[i]) << "\n";
        write_file(args.boundary_out, os.str());
        std::cout << "boundary=" << args.boundary_out << "\n";
    }
    return kExitOk;
}

// ----------------------------------------------------------------- bound --

struct BoundArgs {
    std::string case_spec;
    std::string phi;
    std::string matrix_file;
    std::string matrix2_file;
    std::optional<std::uint64_t> seed;
    double tol_abs = 0.0;
    double tol_rel = 0.0;
    double cap = 0.0;
    bool verbose = false;
};

// Folds a standalone --phi into the bracketed case spec.
std::string with_phi(const std::string& case_spec, const std::string& phi) {
    if (phi.empty()) return case_spec;
    if (case_spec.find("phi=") != std::string::npos) die("phi given both via --phi and inside --case");
    if (case_spec.back() == ']')
        return case_spec.substr(0, case_spec.size() - 1) + ";phi=" + phi + "]";
    return case_spec + "[phi=" + phi + "]";
}

int print_evaluation(const std::string& eval_json, bool verbose) {
    const json ev = json::parse(eval_json);
    std::cout << "case=" << ev["case"].get<std::string>() << "\n";
    std::cout << "status=" << ev["status"].get<std::string>() << "\n";
    if (ev["status"] == "untestable") {
        std::cout << "reason=" << ev["reason"].get<std::string>() << "\n";
        return kExitOk;
    }
    for (const json& link : ev["chain"])
        std::cout << "chain." << link["name"].get<std::string>() << "=" << kv(link["value"].get<double>()) << "\n";
    for (std::size_t i = 0; i < ev["slack"].size(); ++i) {
        std::cout << "slack." << i << "=" << kv(ev["slack"][i].get<double>()) << "\n";
        std::cout << "ratio." << i << "=" << kv(ev["ratio"][i].get<double>()) << "\n";
        std::cout << "pass." << i << "=" << (ev["pass"][i].get<bool>() ? "true" : "false") << "\n";
    }
    const bool ok = ev["all_pass"].get<bool>();
    std::cout << "all_pass=" << (ok ? "true" : "false") << "\n";
    if (verbose) {
        std::cerr << "quantities:\n";
        for (const auto& [key, value] : ev["quantities"].items())
            std::cerr << "  " << key << " = " << kv(value.get<double>()) << "\n";
    }
    return ok ? kExitOk : kExitViolations;
}

int cmd_bound(const BoundArgs& args) {
    MatrixHandle t;
    check(orx_matrix_load(args.matrix_file.c_str(), &t.m));
    const std::string spec = with_phi(args.case_spec, args.phi);

    char* out = nullptr;
    if (args.seed) {
        check(orx_evaluate_vector_lemma(spec.c_str(), t.m, *args.seed, args.tol_abs, args.tol_rel, &out));
    } else {
        MatrixHandle s;
        if (!args.matrix2_file.empty()) check(orx_matrix_load(args.matrix2_file.c_str(), &s.m));
        check(orx_evaluate_bound(spec.c_str(), t.m, s.m, args.tol_abs, args.tol_rel, args.cap, &out));
    }
    std::string eval_json(out);
    orx_string_free(out);
    return print_evaluation(eval_json, args.verbose);
}

// ---------------------------------------------------------------- verify --

struct VerifyArgs {
    std::string suite_file;
    bool selftest = false;
    std::string out_file = "report.json";
    std::string format = "json";
    int jobs = 0;
    std::string dump_config;
    bool verbose = false;
};

int cmd_verify(const VerifyArgs& args) {
    std::string config_json;
    if (!args.suite_file.empty()) {
        config_json = read_file(args.suite_file);
    } else {
        char* cfg = nullptr;
        check(args.selftest ? orx_selftest_suite_config(&cfg) : orx_default_suite_config(&cfg));
        config_json = cfg;
        orx_string_free(cfg);
    }
    if (!args.dump_config.empty()) {
        write_file(args.dump_config, config_json);
        std::cout << "config=" << args.dump_config << "\n";
        return kExitOk;
    }

    char* rep = nullptr;
    check(orx_run_suite(config_json.c_str(), args.jobs, &rep));
    std::string report_json(rep);
    orx_string_free(rep);

    long long violations = 0;
    check(orx_report_violations(report_json.c_str(), &violations));

    if (args.format == "csv") {
        char* csv = nullptr;
        check(orx_report_to_csv(report_json.c_str(), &csv));
        write_file(args.out_file, csv);
        orx_string_free(csv);
    } else if (args.format == "json") {
        write_file(args.out_file, report_json);
    } else {
        die("unknown report format '" + args.format + "' (expected json or csv)");
    }

    const json rep_obj = json::parse(report_json);
    std::cout << "rows=" << rep_obj["results"].size() << "\n";
    std::cout << "violations=" << violations << "\n";
    std::cout << "report=" << args.out_file << "\n";
    if (args.verbose) {
        for (const json& row : rep_obj["results"]) {
            if (row["violations"].get<long long>() > 0)
                std::cerr << "violated: " << row["case"].get<std::string>() << " on "
                          << row["ensemble"]["family"].get<std::string>() << " n=" << row["ensemble"]["n"]
                          << "\n";
        }
    }
    return violations > 0 ? kExitViolations : kExitOk;
}

// --------------------------------------------------------------- compare --

struct CompareArgs {
    std::string ensemble;
    std::string bounds;
    std::string out_file;
};

int cmd_compare(const CompareArgs& args) {
    std::string spec = args.ensemble;
    // Accept either inline JSON or a path to a JSON file.
    if (!spec.empty() && spec.front() != '{') spec = read_file(spec);
    const std::string table =
        take_string([&](char** out) { return orx_compare(spec.c_str(), args.bounds.c_str(), out); });
    write_file(args.out_file, table);
    long long rows = 0;
    for (char c : table) rows += c == '\n' ? 1 : 0;
    std::cout << "rows=" << (rows > 0 ? rows - 1 : 0) << "\n";
    std::cout << "out=" << args.out_file << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------ fuzz --

struct FuzzArgs {
    std::string case_spec;
    double seconds = 0.0;
    long long iters = 0;
    std::uint64_t seed = 1;
    std::string witness_out = "fuzz_witness.json";
    bool verbose = false;
};

int cmd_fuzz(const FuzzArgs& args) {
    if (args.seconds <= 0.0 && args.iters <= 0) die("fuzz needs --seconds > 0 or --iters > 0");

    const std::string result = take_string(
        [&](char** out) { return orx_fuzz(args.case_spec.c_str(), args.seconds, args.iters, args.seed, out); });
    const json res = json::parse(result);

    write_file(args.witness_out, res["witness"].dump() + "\n");
    std::string witness2;
    if (res.contains("witness_s")) {
        witness2 = args.witness_out + ".s.json";
        write_file(witness2, res["witness_s"].dump() + "\n");
    }

    // Re-evaluate through the file round-trip, exactly as `bound` would.
    MatrixHandle t;
    check(orx_matrix_load(args.witness_out.c_str(), &t.m));
    char* ev_out = nullptr;
    std::string eval_json;
    const bool vector_lemma = res.contains("lemma_seed") && !res.contains("witness_s");
    // Vector lemmas reproduce through the recorded lemma seed; everything
    // else through the matrix file(s) alone.
    bool used_seed = false;
    {
        json ev;
        if (vector_lemma) {
            const auto lemma_seed = res["lemma_seed"].get<std::uint64_t>();
            const int rc = orx_evaluate_vector_lemma(args.case_spec.c_str(), t.m, lemma_seed, 0.0, 0.0, &ev_out);
            if (rc == ORX_OK) {
                eval_json = ev_out;
                orx_string_free(ev_out);
                ev = json::parse(eval_json);
                if (!ev["chain"].empty()) used_seed = true;
            }
        }
        if (!used_seed) {
            MatrixHandle s;
            if (!witness2.empty()) check(orx_matrix_load(witness2.c_str(), &s.m));
            eval_json = take_string([&](char** out) {
                return orx_evaluate_bound(args.case_spec.c_str(), t.m, s.m, 0.0, 0.0, 0.0, out);
            });
        }
    }
    const json ev = json::parse(eval_json);
    const double reproduced = ev["ratio"][0].get<double>();

    std::cout << "case=" << res["case"].get<std::string>() << "\n";
    std::cout << "iterations=" << res["iterations"].get<long long>() << "\n";
    std::cout << "best_ratio=" << kv(reproduced) << "\n";
    std::cout << "seed=" << args.seed << "\n";
    if (vector_lemma) std::cout << "lemma_seed=" << res["lemma_seed"].get<std::uint64_t>() << "\n";
    std::cout << "witness=" << args.witness_out << "\n";
    if (!witness2.empty()) std::cout << "witness2=" << witness2 << "\n";
    const bool violation = res["violation"].get<bool>();
    std::cout << "violation=" << (violation ? "true" : "false") << "\n";
    if (args.verbose) std::cerr << "search ratio " << kv(res["best_ratio"].get<double>()) << "\n";
    return violation ? kExitViolations : kExitOk;
}

// ------------------------------------------------------------- catalogue --

int cmd_catalogue(bool verbose) {
    const std::string text = take_string([](char** out) { return orx_catalogue_json(out); });
    const json cat = json::parse(text);
    for (const json& info : cat) {
        std::cout << "id=" << info["id"].get<std::string>();
        std::string params;
        for (const json& p : info["params"]) params += (params.empty() ? "" : ";") + p.get<std::string>();
        std::cout << " params=" << (params.empty() ? "-" : params);
        std::string chain;
        for (const json& c : info["chain"]) chain += (chain.empty() ? "" : "<=") + c.get<std::string>();
        std::cout << " chain=" << chain << "\n";
    }
    if (verbose) {
        for (const json& info : cat)
            std::cerr << info["id"].get<std::string>() << "\n    " << info["description"].get<std::string>()
                      << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical radius toolkit: exact w(T) computation and verification of an "
                 "Orlicz-function bound catalogue"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("--verbose", verbose, "human-readable tables on stderr");

    RadiusArgs radius_args;
    CLI::App* radius = app.add_subcommand("radius", "numerical radius of a matrix file");
    radius->add_option("matrix", radius_args.matrix_file, "matrix file (JSON or text)")->required();
    radius->add_option("--grid", radius_args.grid, "angle grid points (default 1024)");
    radius->add_option("--tol", radius_args.tol, "certified error tolerance (default 1e-9)");
    radius->add_option("--boundary", radius_args.boundary, "emit m numerical-range boundary points");
    radius->add_option("--boundary-out", radius_args.boundary_out, "boundary CSV path");

    BoundArgs bound_args;
    CLI::App* bound = app.add_subcommand("bound", "evaluate one catalogue case on a matrix");
    bound->add_option("--case", bound_args.case_spec, "case spec, e.g. th6[phi=expm1]")->required();
    bound->add_option("--phi", bound_args.phi,
                      "Orlicz function (power:p=2 | expm1 | powerlog:p=1 | expsq | table:file.csv)");
    bound->add_option("--matrix", bound_args.matrix_file, "operator T file")->required();
    bound->add_option("--matrix2", bound_args.matrix2_file, "operator S file (product cases)");
    std::uint64_t seed_value = 0;
    CLI::Option* seed_opt = bound->add_option("--seed", seed_value, "vector-lemma input seed");
    bound->add_option("--tol-abs", bound_args.tol_abs, "absolute tolerance (default 1e-7)");
    bound->add_option("--tol-rel", bound_args.tol_rel, "relative tolerance (default 1e-7)");
    bound->add_option("--cap", bound_args.cap, "rescale inputs to this operator norm");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite and write a report");
    verify->add_option("--suite", verify_args.suite_file, "suite config JSON (default: bundled suite)");
    verify->add_flag("--selftest", verify_args.selftest, "run the planted-falsehood self-test suite");
    verify->add_option("--out", verify_args.out_file, "report output path (default report.json)");
    verify->add_option("--format", verify_args.format, "report format: json|csv");
    verify->add_option("--jobs", verify_args.jobs, "worker threads (default: ORLICZ_RADIUS_JOBS or cores)")
        ->envname("ORLICZ_RADIUS_JOBS");
    verify->add_option("--dump-config", verify_args.dump_config, "write the suite config and exit");

    CompareArgs compare_args;
    CLI::App* compare = app.add_subcommand("compare", "tabulate bound estimates against true w");
    compare->add_option("--ensemble", compare_args.ensemble, "ensemble spec JSON (inline or file)")->required();
    compare->add_option("--bounds", compare_args.bounds, "comma-separated case specs")->required();
    compare->add_option("--out", compare_args.out_file, "output CSV path")->required();

    FuzzArgs fuzz_args;
    CLI::App* fuzz = app.add_subcommand("fuzz", "random search for maximum-tightness witnesses");
    fuzz->add_option("--case", fuzz_args.case_spec, "case spec")->required();
    fuzz->add_option("--seconds", fuzz_args.seconds, "time budget in seconds");
    fuzz->add_option("--iters", fuzz_args.iters, "iteration budget (overrides --seconds)");
    fuzz->add_option("--seed", fuzz_args.seed, "search seed (results reproduce from it)");
    fuzz->add_option("--witness-out", fuzz_args.witness_out, "witness matrix path");

    CLI::App* catalogue = app.add_subcommand("catalogue", "list the bound catalogue");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            app.exit(e);
            return kExitOk;
        }
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (radius->parsed()) return cmd_radius(radius_args);
        if (bound->parsed()) {
            if (*seed_opt) bound_args.seed = seed_value;
            bound_args.verbose = verbose;
            return cmd_bound(bound_args);
        }
        if (verify->parsed()) {
            verify_args.verbose = verbose;
            return cmd_verify(verify_args);
        }
        if (compare->parsed()) return cmd_compare(compare_args);
        if (fuzz->parsed()) {
            fuzz_args.verbose = verbose;
            return cmd_fuzz(fuzz_args);
        }
        if (catalogue->parsed()) return cmd_catalogue(verbose);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
