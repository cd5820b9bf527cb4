// Drives the installed CLI binary end to end: exit codes, key=value output,
// file artifacts, witness reproduction.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "core/ensembles.hpp"
#include "core/io.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CLI_BINARY_PATH) + " " + args + " 2>cli_stderr.txt";
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string value_of(const std::string& out, const std::string& key) {
    std::istringstream ss(out);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
    }
    return {};
}

void write_jordan2(const std::string& path) {
    std::ofstream f(path);
    f << "2\n0 0\n1 0\n0 0\n0 0\n";
}

} // namespace

TEST_CASE("cli radius: spot values and boundary export") {
    write_jordan2("cli_j2.txt");
    RunResult r = run_cli("radius cli_j2.txt");
    CHECK(r.exit_code == 0);
    CHECK(std::stod(value_of(r.out, "w")) == doctest::Approx(0.5).epsilon(1e-9));

    {
        std::ofstream f("cli_id.txt");
        f << "2\n1 0\n0 0\n0 0\n1 0\n";
    }
    r = run_cli("radius cli_id.txt");
    CHECK(r.exit_code == 0);
    CHECK(std::stod(value_of(r.out, "w")) == doctest::Approx(1.0).epsilon(1e-10));

    {
        std::ofstream f("cli_j3.txt");
        f << "3\n0 0\n1 0\n0 0\n0 0\n0 0\n1 0\n0 0\n0 0\n0 0\n";
    }
    r = run_cli("radius cli_j3.txt --boundary 36 --boundary-out cli_j3_boundary.csv");
    CHECK(r.exit_code == 0);
    CHECK(std::stod(value_of(r.out, "w")) == doctest::Approx(0.70710678118654752).epsilon(1e-8));
    std::ifstream boundary("cli_j3_boundary.csv");
    std::string header;
    std::getline(boundary, header);
    CHECK(header == "theta,re,im");
    int rows = 0;
    std::string line;
    while (std::getline(boundary, line)) ++rows;
    CHECK(rows == 36);

    CHECK(run_cli("radius does_not_exist.txt").exit_code == 2);
    std::remove("cli_j2.txt");
    std::remove("cli_id.txt");
    std::remove("cli_j3.txt");
    std::remove("cli_j3_boundary.csv");
}

TEST_CASE("cli bound: chains, violations, usage errors") {
    write_jordan2("cli_b.txt");
    RunResult r = run_cli("bound --case power_norm[phi=expm1] --matrix cli_b.txt");
    CHECK(r.exit_code == 0);
    CHECK(value_of(r.out, "all_pass") == "true");
    CHECK(std::stod(value_of(r.out, "chain.log_mean_exp")) == doctest::Approx(0.62011450695827752).epsilon(1e-12));

    // The planted corrupt case violates: exit 1.
    r = run_cli("bound --case selftest_corrupt --matrix cli_b.txt");
    CHECK(r.exit_code == 1);
    CHECK(value_of(r.out, "all_pass") == "false");

    // Vector lemma via seed.
    r = run_cli("bound --case buzano_vec --matrix cli_b.txt --seed 41");
    CHECK(r.exit_code == 0);
    CHECK(value_of(r.out, "all_pass") == "true");

    // Standalone --phi folds into the case spec.
    r = run_cli("bound --case power_norm --phi expm1 --matrix cli_b.txt");
    CHECK(r.exit_code == 0);
    CHECK(value_of(r.out, "case") == "power_norm[phi=expm1]");
    CHECK(run_cli("bound --case 'power_norm[phi=expm1]' --phi expsq --matrix cli_b.txt").exit_code == 2);

    CHECK(run_cli("bound --case no_such --matrix cli_b.txt").exit_code == 2);
    CHECK(run_cli("bound --case cor_N1 --matrix cli_b.txt").exit_code == 2); // missing --matrix2
    std::remove("cli_b.txt");
}

TEST_CASE("cli verify: tiny suite passes, selftest fails, usage errors exit 2") {
    const char* config = R"({
      "tolerances": {"tol_abs": 1e-7, "tol_rel": 1e-7},
      "cases": [{"id": "base_norm"}, {"id": "cor_N222", "norm_cap": 4.0}],
      "ensembles": [{"family": "ginibre", "n": 2, "count": 6, "seed": 21},
                    {"family": "nilpotent_jordan", "n": 3, "count": 1, "seed": 1}]
    })";
    {
        std::ofstream f("cli_suite.json");
        f << config;
    }
    RunResult r = run_cli("verify --suite cli_suite.json --out cli_report.json --jobs 2");
    CHECK(r.exit_code == 0);
    CHECK(value_of(r.out, "violations") == "0");
    CHECK(value_of(r.out, "rows") == "4");

    // Byte-identical reports across jobs, ignoring the execution block.
    RunResult r1 = run_cli("verify --suite cli_suite.json --out cli_report1.json --jobs 1");
    CHECK(r1.exit_code == 0);
    const std::string a = orad::report_json_without_execution(orad::read_file("cli_report.json"));
    const std::string b = orad::report_json_without_execution(orad::read_file("cli_report1.json"));
    CHECK(a == b);

    // CSV format.
    r = run_cli("verify --suite cli_suite.json --out cli_report.csv --format csv --jobs 2");
    CHECK(r.exit_code == 0);
    std::ifstream csv("cli_report.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "id,params,n,count,violations,min_ratio,mean_ratio,max_ratio,worst_slack,witness_seed");


    CHECK(run_cli("verify --selftest --out cli_selftest.json").exit_code == 1);
    CHECK(run_cli("verify --suite missing.json --out x.json").exit_code == 2);
    {
        std::ofstream f("cli_broken.json");
        f << "{broken";
    }
    CHECK(run_cli("verify --suite cli_broken.json --out x.json").exit_code == 2);

    for (const char* p : {"cli_suite.json", "cli_report.json", "cli_report1.json", "cli_report.csv",
                          "cli_selftest.json", "cli_broken.json"})
        std::remove(p);
}

TEST_CASE("cli verify: dump-config emits the bundled suite") {
    RunResult r = run_cli("verify --dump-config cli_default.json");
    CHECK(r.exit_code == 0);
    const std::string text = orad::read_file("cli_default.json");
    CHECK(text.find("\"cases\"") != std::string::npos);
    CHECK(text.find("th7_power") != std::string::npos);
    std::remove("cli_default.json");
}

TEST_CASE("cli compare: row count equals the ensemble count") {
    RunResult r = run_cli(
        "compare --ensemble '{\"family\":\"hermitian\",\"n\":2,\"count\":7,\"seed\":5}' "
        "--bounds base_norm,base_kittaneh,power_norm[phi=expm1] --out cli_compare.csv");
    CHECK(r.exit_code == 0);
    CHECK(value_of(r.out, "rows") == "7");
    std::ifstream csv("cli_compare.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header.rfind("seed,index,n,w,", 0) == 0);
    // Hermitian draws: base_norm and power_norm estimates collapse onto w.
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ','); // seed
        std::getline(ls, cell, ','); // index
        std::getline(ls, cell, ','); // n
        std::getline(ls, cell, ',');
        const double w = std::stod(cell);
        std::getline(ls, cell, ',');
        CHECK(std::stod(cell) == doctest::Approx(w).epsilon(1e-8)); // base_norm estimate = ||T|| = w
        std::getline(ls, cell, ',');
        const double kittaneh = std::stod(cell);
        CHECK(kittaneh >= w - 1e-8);
        std::getline(ls, cell, ',');
        CHECK(std::stod(cell) == doctest::Approx(w).epsilon(1e-8)); // power_norm estimate
    }
    CHECK(rows == 7);
    std::remove("cli_compare.csv");

    CHECK(run_cli("compare --ensemble '{\"family\":\"hermitian\",\"n\":2,\"count\":2,\"seed\":5}' "
                  "--bounds 'th2_gh[phi=power:p=1;v=0.5;s=0.5]' --out x.csv")
              .exit_code == 2);
}

TEST_CASE("cli fuzz: witness reproduces through bound, zero budget is a usage error") {
    RunResult r = run_cli("fuzz --case cor_N222 --iters 30 --seed 11 --witness-out cli_fuzz.json");
    CHECK(r.exit_code == 0);
    const std::string ratio = value_of(r.out, "best_ratio");
    CHECK(!ratio.empty());
    CHECK(value_of(r.out, "violation") == "false");

    RunResult rb = run_cli("bound --case cor_N222 --matrix cli_fuzz.json");
    CHECK(rb.exit_code == 0);
    CHECK(std::stod(value_of(rb.out, "ratio.0")) == doctest::Approx(std::stod(ratio)).epsilon(1e-12));

    // Two-operator case writes both witnesses.
    r = run_cli("fuzz --case cor_N1 --iters 20 --seed 3 --witness-out cli_fuzz2.json");
    CHECK(r.exit_code == 0);
    CHECK(value_of(r.out, "witness2") == "cli_fuzz2.json.s.json");
    rb = run_cli("bound --case cor_N1 --matrix cli_fuzz2.json --matrix2 cli_fuzz2.json.s.json");
    CHECK(rb.exit_code == 0);
    CHECK(std::stod(value_of(rb.out, "ratio.0")) ==
          doctest::Approx(std::stod(value_of(r.out, "best_ratio"))).epsilon(1e-12));

    // Vector-lemma case reproduces through the recorded lemma seed.
    r = run_cli("fuzz --case buzano_vec --iters 20 --seed 9 --witness-out cli_fuzz3.json");
    CHECK(r.exit_code == 0);
    const std::string lemma_seed = value_of(r.out, "lemma_seed");
    CHECK(!lemma_seed.empty());
    rb = run_cli("bound --case buzano_vec --matrix cli_fuzz3.json --seed " + lemma_seed);
    CHECK(rb.exit_code == 0);
    CHECK(std::stod(value_of(rb.out, "ratio.0")) ==
          doctest::Approx(std::stod(value_of(r.out, "best_ratio"))).epsilon(1e-12));

    CHECK(run_cli("fuzz --case base_norm --seconds 0 --seed 1").exit_code == 2);
    CHECK(run_cli("fuzz --case nope --iters 5 --seed 1").exit_code == 2);

    for (const char* p : {"cli_fuzz.json", "cli_fuzz2.json", "cli_fuzz2.json.s.json", "cli_fuzz3.json"})
        std::remove(p);
}

TEST_CASE("cli catalogue: one line per case") {
    RunResult r = run_cli("catalogue");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("id=base_norm params=- chain=half_norm<=w<=norm") != std::string::npos);
    CHECK(r.out.find("id=th3_alpha params=phi;alpha;variant") != std::string::npos);
    int lines = 0;
    for (char c : r.out) lines += c == '\n';
    CHECK(lines == 38); // one per catalogue entry
}

TEST_CASE("cli: no subcommand or unknown flags exit 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("radius").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
}
