#include "io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace orad {

using json = nlohmann::ordered_json;

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json parse_json(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    require(!j.is_discarded(), ErrCode::parse, std::string("malformed JSON in ") + what);
    return j;
}

// Typed field access can throw nlohmann exceptions on wrong shapes; surface
// those as parse errors.
template <typename Fn>
auto as_parse_error(const char* what, Fn&& fn) {
    try {
        return fn();
    } catch (const Error&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrCode::parse, std::string(what) + ": " + e.what());
    }
}

double get_num(const json& j, const char* key, const char* what) {
    require(j.contains(key) && j[key].is_number(), ErrCode::parse,
            std::string(what) + ": missing or non-numeric field '" + key + "'");
    return j[key].get<double>();
}

} // namespace

std::string matrix_to_json(const CMatrix& m) {
    json j;
    j["n"] = m.dim();
    json data = json::array();
    for (const Complex& z : m.data()) data.push_back(json::array({z.real(), z.imag()}));
    j["data"] = std::move(data);
    return j.dump();
}

CMatrix matrix_from_json(const std::string& text) {
    const json j = parse_json(text, "matrix file");
    require(j.is_object() && j.contains("n") && j.contains("data"), ErrCode::parse,
            "matrix JSON must contain fields 'n' and 'data'");
    require(j["n"].is_number_integer(), ErrCode::parse, "matrix JSON field 'n' must be an integer");
    const int n = j["n"].get<int>();
    require(n >= 1 && n <= kMaxDim, ErrCode::dimension, "matrix JSON dimension out of range");
    const json& data = j["data"];
    require(data.is_array() && data.size() == static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
            ErrCode::parse, "matrix JSON 'data' must hold n^2 [re,im] pairs");
    std::vector<Complex> entries;
    entries.reserve(data.size());
    for (const json& pair : data) {
        require(pair.is_array() && pair.size() == 2 && pair[0].is_number() && pair[1].is_number(), ErrCode::parse,
                "matrix JSON entries must be [re, im] number pairs");
        entries.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    CMatrix m(n, std::move(entries));
    require(m.is_finite(), ErrCode::invalid_argument, "matrix file contains non-finite entries");
    return m;
}

std::string matrix_to_text(const CMatrix& m) {
    std::ostringstream os;
    os << m.dim() << "\n";
    for (const Complex& z : m.data()) os << fmt17(z.real()) << " " << fmt17(z.imag()) << "\n";
    return os.str();
}

CMatrix matrix_from_text(const std::string& text) {
    std::istringstream in(text);
    int n = 0;
    require(static_cast<bool>(in >> n), ErrCode::parse, "matrix text must start with the dimension");
    require(n >= 1 && n <= kMaxDim, ErrCode::dimension, "matrix text dimension out of range");
    std::vector<Complex> entries;
    entries.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n * n; ++i) {
        double re = 0.0, im = 0.0;
        require(static_cast<bool>(in >> re >> im), ErrCode::parse,
                "matrix text truncated: expected " + std::to_string(n * n) + " 're im' lines");
        entries.emplace_back(re, im);
    }
    double extra = 0.0;
    require(!(in >> extra), ErrCode::parse, "matrix text has trailing entries");
    CMatrix m(n, std::move(entries));
    require(m.is_finite(), ErrCode::invalid_argument, "matrix file contains non-finite entries");
    return m;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrCode::io, "cannot open file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrCode::io, "cannot open file '" + path + "' for writing");
    out << content;
    require(out.good(), ErrCode::io, "write failed for '" + path + "'");
}

CMatrix load_matrix_file(const std::string& path) {
    const std::string text = read_file(path);
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' ? matrix_from_json(text) : matrix_from_text(text);
    }
    fail(ErrCode::parse, "matrix file '" + path + "' is empty");
}

void save_matrix_json(const CMatrix& m, const std::string& path) { write_file(path, matrix_to_json(m) + "\n"); }
void save_matrix_text(const CMatrix& m, const std::string& path) { write_file(path, matrix_to_text(m)); }

namespace {

json ensemble_to_json_obj(const EnsembleSpec& spec) {
    json j;
    j["family"] = family_to_string(spec.family);
    j["n"] = spec.n;
    j["count"] = spec.count;
    j["seed"] = spec.seed;
    if (spec.family == Family::scaled) {
        j["params"] = json{{"base", family_to_string(spec.base)},
                           {"scale", json::array({spec.scale.real(), spec.scale.imag()})}};
    }
    return j;
}

EnsembleSpec ensemble_from_json_obj(const json& j) {
    require(j.is_object(), ErrCode::parse, "ensemble spec must be a JSON object");
    require(j.contains("family") && j["family"].is_string(), ErrCode::parse,
            "ensemble spec needs a 'family' string");
    EnsembleSpec spec;
    spec.family = family_from_string(j["family"].get<std::string>());
    spec.n = static_cast<int>(get_num(j, "n", "ensemble spec"));
    spec.count = j.contains("count") ? static_cast<int>(get_num(j, "count", "ensemble spec")) : 1;
    spec.seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : 0;
    if (spec.family == Family::scaled) {
        require(j.contains("params") && j["params"].is_object(), ErrCode::parse,
                "scaled ensemble needs params {base, scale}");
        const json& p = j["params"];
        require(p.contains("base") && p["base"].is_string(), ErrCode::parse, "scaled ensemble needs a base family");
        spec.base = family_from_string(p["base"].get<std::string>());
        require(p.contains("scale") && p["scale"].is_array() && p["scale"].size() == 2, ErrCode::parse,
                "scaled ensemble needs scale [re, im]");
        spec.scale = Complex{p["scale"][0].get<double>(), p["scale"][1].get<double>()};
    }
    return spec;
}

json case_template_to_json(const CaseTemplate& tpl) {
    json j;
    j["id"] = tpl.id;
    if (!tpl.phis.empty()) j["phi"] = tpl.phis;
    if (!tpl.alphas.empty()) j["alpha"] = tpl.alphas;
    if (!tpl.vs.empty()) j["v"] = tpl.vs;
    if (!tpl.ss.empty()) j["s"] = tpl.ss;
    if (!tpl.rs.empty()) j["r"] = tpl.rs;
    if (!tpl.ns.empty()) j["n"] = tpl.ns;
    if (!tpl.variants.empty()) {
        json vars = json::array();
        for (char v : tpl.variants) vars.push_back(std::string(1, v));
        j["variant"] = std::move(vars);
    }
    if (tpl.norm_cap > 0.0) j["norm_cap"] = tpl.norm_cap;
    if (tpl.filter) {
        json f;
        if (!tpl.filter->families.empty()) {
            json fams = json::array();
            for (Family fam : tpl.filter->families) fams.push_back(family_to_string(fam));
            f["families"] = std::move(fams);
        }
        if (tpl.filter->dim_le_n) f["dim_le_n"] = true;
        j["ensembles"] = std::move(f);
    }
    return j;
}

CaseTemplate case_template_from_json(const json& j) {
    require(j.is_object() && j.contains("id") && j["id"].is_string(), ErrCode::parse,
            "case template needs an 'id' string");
    CaseTemplate tpl;
    tpl.id = j["id"].get<std::string>();
    auto load_doubles = [&j](const char* key, std::vector<double>& out) {
        if (!j.contains(key)) return;
        require(j[key].is_array(), ErrCode::parse, std::string("case template field '") + key + "' must be an array");
        for (const json& x : j[key]) out.push_back(x.get<double>());
    };
    if (j.contains("phi")) {
        require(j["phi"].is_array(), ErrCode::parse, "case template field 'phi' must be an array");
        for (const json& x : j["phi"]) tpl.phis.push_back(x.get<std::string>());
    }
    load_doubles("alpha", tpl.alphas);
    load_doubles("v", tpl.vs);
    load_doubles("s", tpl.ss);
    load_doubles("r", tpl.rs);
    if (j.contains("n"))
        for (const json& x : j["n"]) tpl.ns.push_back(x.get<int>());
    if (j.contains("variant"))
        for (const json& x : j["variant"]) {
            const std::string v = x.get<std::string>();
            require(v.size() == 1, ErrCode::parse, "variant entries must be single characters");
            tpl.variants.push_back(v[0]);
        }
    if (j.contains("norm_cap")) tpl.norm_cap = j["norm_cap"].get<double>();
    if (j.contains("ensembles")) {
        const json& f = j["ensembles"];
        EnsembleFilter filter;
        if (f.contains("families"))
            for (const json& x : f["families"]) filter.families.push_back(family_from_string(x.get<std::string>()));
        if (f.contains("dim_le_n")) filter.dim_le_n = f["dim_le_n"].get<bool>();
        tpl.filter = std::move(filter);
    }
    return tpl;
}

json witness_to_json(const Witness& w) {
    json j;
    j["family"] = w.family;
    j["n"] = w.n;
    j["seed"] = w.seed;
    j["index"] = w.index;
    j["lemma_seed"] = w.lemma_seed;
    return j;
}

Witness witness_from_json(const json& j) {
    Witness w;
    w.family = j.at("family").get<std::string>();
    w.n = j.at("n").get<int>();
    w.seed = j.at("seed").get<std::uint64_t>();
    w.index = j.at("index").get<int>();
    w.lemma_seed = j.at("lemma_seed").get<std::uint64_t>();
    return w;
}

json config_to_json_obj(const SuiteConfig& config) {
    json j;
    j["schema"] = 1;
    j["tolerances"] = json{{"tol_abs", config.tol.tol_abs}, {"tol_rel", config.tol.tol_rel}};
    j["radius"] = json{{"grid", config.radius.grid}, {"tol", config.radius.tol}};
    json cases = json::array();
    for (const CaseTemplate& tpl : config.cases) cases.push_back(case_template_to_json(tpl));
    j["cases"] = std::move(cases);
    json ens = json::array();
    for (const EnsembleSpec& spec : config.ensembles) ens.push_back(ensemble_to_json_obj(spec));
    j["ensembles"] = std::move(ens);
    return j;
}

SuiteConfig config_from_json_obj(const json& j) {
    require(j.is_object(), ErrCode::parse, "suite config must be a JSON object");
    SuiteConfig config;
    if (j.contains("tolerances")) {
        config.tol.tol_abs = get_num(j["tolerances"], "tol_abs", "tolerances");
        config.tol.tol_rel = get_num(j["tolerances"], "tol_rel", "tolerances");
    }
    if (j.contains("radius")) {
        config.radius.grid = static_cast<int>(get_num(j["radius"], "grid", "radius options"));
        config.radius.tol = get_num(j["radius"], "tol", "radius options");
    }
    require(j.contains("cases") && j["cases"].is_array(), ErrCode::parse, "suite config needs a 'cases' array");
    for (const json& c : j["cases"]) config.cases.push_back(case_template_from_json(c));
    require(j.contains("ensembles") && j["ensembles"].is_array(), ErrCode::parse,
            "suite config needs an 'ensembles' array");
    for (const json& e : j["ensembles"]) config.ensembles.push_back(ensemble_from_json_obj(e));
    return config;
}

} // namespace

std::string ensemble_to_json(const EnsembleSpec& spec) { return ensemble_to_json_obj(spec).dump(); }

EnsembleSpec ensemble_from_json(const std::string& text) {
    return as_parse_error("ensemble spec",
                          [&] { return ensemble_from_json_obj(parse_json(text, "ensemble spec")); });
}

std::string suite_config_to_json(const SuiteConfig& config) { return config_to_json_obj(config).dump(2); }

SuiteConfig suite_config_from_json(const std::string& text) {
    return as_parse_error("suite config", [&] { return config_from_json_obj(parse_json(text, "suite config")); });
}

SuiteConfig load_suite_config(const std::string& path) { return suite_config_from_json(read_file(path)); }

std::string report_to_json(const SuiteReport& report) {
    json j;
    j["schema"] = 1;
    j["toolkit_version"] = report.version;
    j["execution"] = json{{"wall_time_seconds", report.wall_time_seconds}, {"jobs", report.jobs}};
    j["config"] = config_to_json_obj(report.config);
    json rows = json::array();
    for (const CaseEnsembleStats& row : report.rows) {
        json r;
        r["case"] = row.case_key;
        r["id"] = row.case_id;
        r["ensemble"] = ensemble_to_json_obj(row.ensemble);
        r["evaluations"] = row.evaluations;
        r["violations"] = row.violations;
        r["untestable"] = row.untestable;
        r["grazes"] = row.grazes;
        json links = json::array();
        for (const LinkStats& l : row.links) {
            json lj;
            lj["lhs"] = l.lhs_name;
            lj["rhs"] = l.rhs_name;
            lj["violations"] = l.violations;
            lj["grazes"] = l.grazes;
            lj["min_ratio"] = l.min_ratio;
            lj["mean_ratio"] = l.mean_ratio;
            lj["max_ratio"] = l.max_ratio;
            lj["max_ratio_witness"] = witness_to_json(l.max_ratio_witness);
            lj["worst_slack"] = l.worst_slack;
            lj["worst_slack_witness"] = witness_to_json(l.worst_slack_witness);
            links.push_back(std::move(lj));
        }
        r["links"] = std::move(links);
        rows.push_back(std::move(r));
    }
    j["results"] = std::move(rows);
    return j.dump(2) + "\n";
}

static SuiteReport report_from_json_impl(const std::string& text) {
    const json j = parse_json(text, "suite report");
    require(j.is_object() && j.value("schema", 0) == 1, ErrCode::parse, "unsupported report schema");
    SuiteReport report;
    report.version = j.at("toolkit_version").get<std::string>();
    report.wall_time_seconds = j.at("execution").at("wall_time_seconds").get<double>();
    report.jobs = j.at("execution").at("jobs").get<int>();
    report.config = config_from_json_obj(j.at("config"));
    for (const json& r : j.at("results")) {
        CaseEnsembleStats row;
        row.case_key = r.at("case").get<std::string>();
        row.case_id = r.at("id").get<std::string>();
        row.ensemble = ensemble_from_json_obj(r.at("ensemble"));
        row.evaluations = r.at("evaluations").get<long long>();
        row.violations = r.at("violations").get<long long>();
        row.untestable = r.at("untestable").get<long long>();
        row.grazes = r.at("grazes").get<long long>();
        for (const json& lj : r.at("links")) {
            LinkStats l;
            l.lhs_name = lj.at("lhs").get<std::string>();
            l.rhs_name = lj.at("rhs").get<std::string>();
            l.violations = lj.at("violations").get<long long>();
            l.grazes = lj.at("grazes").get<long long>();
            l.min_ratio = lj.at("min_ratio").get<double>();
            l.mean_ratio = lj.at("mean_ratio").get<double>();
            l.max_ratio = lj.at("max_ratio").get<double>();
            l.max_ratio_witness = witness_from_json(lj.at("max_ratio_witness"));
            l.worst_slack = lj.at("worst_slack").get<double>();
            l.worst_slack_witness = witness_from_json(lj.at("worst_slack_witness"));
            row.links.push_back(std::move(l));
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

SuiteReport report_from_json(const std::string& text) {
    return as_parse_error("suite report", [&] { return report_from_json_impl(text); });
}

std::string report_to_csv(const SuiteReport& report) {
    std::ostringstream os;
    os << "id,params,n,count,violations,min_ratio,mean_ratio,max_ratio,worst_slack,witness_seed\n";
    for (const CaseEnsembleStats& row : report.rows) {
        std::string params;
        const std::size_t bracket = row.case_key.find('[');
        if (bracket != std::string::npos)
            params = row.case_key.substr(bracket + 1, row.case_key.size() - bracket - 2);
        for (const LinkStats& l : row.links) {
            os << row.case_id << ",\"" << params << "\"," << row.ensemble.n << "," << row.ensemble.count << ","
               << l.violations << "," << fmt17(l.min_ratio) << "," << fmt17(l.mean_ratio) << ","
               << fmt17(l.max_ratio) << "," << fmt17(l.worst_slack) << "," << l.worst_slack_witness.seed << ":"
               << l.worst_slack_witness.index << "\n";
        }
    }
    return os.str();
}

std::string report_json_without_execution(const std::string& report_json) {
    json j = parse_json(report_json, "suite report");
    j.erase("execution");
    return j.dump(2);
}

} // namespace orad
