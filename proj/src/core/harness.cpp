#include "harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "rng.hpp"

namespace orad {

namespace {

constexpr std::uint64_t kPairSeedXor = 0xA5A5F00DBEEF1234ULL;

} // namespace

std::vector<CaseInstance> expand_case_template(const CaseTemplate& tpl) {
    const CaseInfo& info = case_info(tpl.id);
    auto takes = [&info](const char* name) {
        return std::find(info.params.begin(), info.params.end(), name) != info.params.end();
    };

    auto values_or_single = [](const auto& vec, auto dummy, bool used) {
        using V = std::decay_t<decltype(dummy)>;
        std::vector<std::optional<V>> out;
        if (!used) {
            out.push_back(std::nullopt);
        } else {
            for (const auto& x : vec) out.push_back(x);
        }
        return out;
    };

    const auto phis = values_or_single(tpl.phis, std::string{}, takes("phi"));
    const auto alphas = values_or_single(tpl.alphas, double{}, takes("alpha"));
    const auto vs = values_or_single(tpl.vs, double{}, takes("v"));
    const auto ss = values_or_single(tpl.ss, double{}, takes("s"));
    const auto rs = values_or_single(tpl.rs, double{}, takes("r"));
    const auto ns = values_or_single(tpl.ns, int{}, takes("n"));
    const auto variants = values_or_single(tpl.variants, char{}, takes("variant"));

    require(!takes("phi") || !tpl.phis.empty(), ErrCode::invalid_argument,
            "case template '" + tpl.id + "' needs at least one phi");
    auto check_grid = [&](const char* name, bool used, std::size_t size) {
        require(!used || size > 0, ErrCode::invalid_argument,
                "case template '" + tpl.id + "' needs at least one value for parameter '" + std::string(name) + "'");
    };
    check_grid("alpha", takes("alpha"), tpl.alphas.size());
    check_grid("v", takes("v"), tpl.vs.size());
    check_grid("s", takes("s"), tpl.ss.size());
    check_grid("r", takes("r"), tpl.rs.size());
    check_grid("n", takes("n"), tpl.ns.size());
    check_grid("variant", takes("variant"), tpl.variants.size());

    std::vector<CaseInstance> out;
    for (const auto& phi : phis)
        for (const auto& a : alphas)
            for (const auto& v : vs)
                for (const auto& s : ss)
                    for (const auto& r : rs)
                        for (const auto& n : ns)
                            for (const auto& var : variants) {
                                CaseParams p;
                                p.phi = phi;
                                p.alpha = a;
                                p.v = v;
                                p.s = s;
                                p.r = r;
                                p.n = n;
                                p.variant = var;
                                CaseInstance inst;
                                inst.bc = make_case(tpl.id, p);
                                inst.norm_cap = tpl.norm_cap;
                                inst.filter = tpl.filter;
                                inst.key = inst.bc.key();
                                out.push_back(std::move(inst));
                            }
    return out;
}

std::uint64_t lemma_seed_for(const EnsembleSpec& spec, int index) {
    return rng::counter_hash(spec.seed, static_cast<std::uint64_t>(index), 0x7EC7A11CULL);
}

EnsembleSpec paired_spec(const EnsembleSpec& spec) {
    EnsembleSpec s = spec;
    s.seed ^= kPairSeedXor;
    return s;
}

double CaseEnsembleStats::worst_slack() const {
    double w = std::numeric_limits<double>::infinity();
    for (const LinkStats& l : links) w = std::min(w, l.worst_slack);
    return w;
}

int CaseEnsembleStats::worst_link() const {
    double w = std::numeric_limits<double>::infinity();
    int idx = -1;
    for (std::size_t i = 0; i < links.size(); ++i) {
        if (links[i].worst_slack < w) {
            w = links[i].worst_slack;
            idx = static_cast<int>(i);
        }
    }
    return idx;
}

long long SuiteReport::total_violations() const {
    long long v = 0;
    for (const auto& row : rows) v += row.violations;
    return v;
}

long long SuiteReport::total_untestable() const {
    long long v = 0;
    for (const auto& row : rows) v += row.untestable;
    return v;
}

namespace {

bool instance_applicable(const CaseInstance& inst, const EnsembleSpec& spec) {
    const CaseInfo& info = case_info(inst.bc.id);
    if (inst.filter) {
        const EnsembleFilter& f = *inst.filter;
        if (!f.families.empty() &&
            std::find(f.families.begin(), f.families.end(), spec.family) == f.families.end())
            return false;
        if (f.dim_le_n) {
            require(inst.bc.n.has_value(), ErrCode::invalid_argument,
                    "dim_le_n filter on a case without an n parameter");
            if (spec.n > *inst.bc.n) return false;
        }
    }
    if (info.nilpotent_only) {
        // Config invariant: a nilpotent-only case must be paired with
        // nilpotent draws of small enough dimension.
        require(spec.family == Family::nilpotent_jordan || spec.family == Family::nilpotent_random,
                ErrCode::invalid_argument,
                "case '" + inst.bc.id + "' applies only to nilpotent ensembles; restrict it with a filter");
        require(inst.bc.n.has_value() && spec.n <= *inst.bc.n, ErrCode::invalid_argument,
                "case '" + inst.bc.id + "' needs ensemble dimension <= n. Add dim_le_n to its filter");
    }
    return true;
}

struct SlimEval {
    int instance = -1;
    EvalStatus status = EvalStatus::ok;
    int len = 0;
    std::array<double, 3> values{};
};

struct TaskResult {
    std::vector<SlimEval> evals;
};

struct LinkAcc {
    long long violations = 0;
    long long grazes = 0;
    long long count = 0;
    double min_ratio = std::numeric_limits<double>::infinity();
    double sum_ratio = 0.0;
    double max_ratio = -std::numeric_limits<double>::infinity();
    Witness max_witness;
    double worst_slack = std::numeric_limits<double>::infinity();
    Witness worst_witness;
};

struct Acc {
    long long evaluations = 0;
    long long violations = 0;
    long long untestable = 0;
    long long grazes = 0;
    std::vector<LinkAcc> links;
};

double link_ratio(double lhs, double rhs, const Tolerances& tol) {
    if (std::abs(lhs) <= tol.tol_abs && std::abs(rhs) <= tol.tol_abs) return 1.0;
    if (rhs == 0.0) return std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

} // namespace

SuiteReport run_suite(const SuiteConfig& config, int jobs) {
    const auto t0 = std::chrono::steady_clock::now();

    if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    std::vector<CaseInstance> instances;
    for (const CaseTemplate& tpl : config.cases) {
        std::vector<CaseInstance> expanded = expand_case_template(tpl);
        instances.insert(instances.end(), std::make_move_iterator(expanded.begin()),
                         std::make_move_iterator(expanded.end()));
    }

    for (const EnsembleSpec& spec : config.ensembles) {
        require(spec.count >= 1, ErrCode::invalid_argument, "ensemble count must be >= 1");
        require(spec.n >= 1 && spec.n <= kMaxDim, ErrCode::dimension, "ensemble dimension out of range");
    }

    // Per-ensemble applicable instance lists (validates the pairing).
    const std::size_t ne = config.ensembles.size();
    std::vector<std::vector<int>> applicable(ne);
    std::vector<char> needs_pair(ne, 0);
    for (std::size_t e = 0; e < ne; ++e) {
        for (std::size_t c = 0; c < instances.size(); ++c) {
            const CaseInfo& info = case_info(instances[c].bc.id);
            if (instances[c].filter || info.nilpotent_only) {
                if (!instance_applicable(instances[c], config.ensembles[e])) continue;
            }
            applicable[e].push_back(static_cast<int>(c));
            if (info.two_operator) needs_pair[e] = 1;
        }
    }

    struct Task {
        int ensemble = 0;
        int index = 0;
    };
    std::vector<Task> tasks;
    for (std::size_t e = 0; e < ne; ++e)
        for (int i = 0; i < config.ensembles[e].count; ++i)
            tasks.push_back(Task{static_cast<int>(e), i});

    auto run_task = [&](const Task& task) {
        const EnsembleSpec& spec = config.ensembles[static_cast<std::size_t>(task.ensemble)];
        const CMatrix t = generate(spec, task.index);
        std::optional<CMatrix> s;
        if (needs_pair[static_cast<std::size_t>(task.ensemble)])
            s = generate(paired_spec(spec), task.index);
        QuantityCache cache(t, std::move(s), config.radius);
        const std::uint64_t lseed = lemma_seed_for(spec, task.index);

        TaskResult result;
        for (int ci : applicable[static_cast<std::size_t>(task.ensemble)]) {
            const CaseInstance& inst = instances[static_cast<std::size_t>(ci)];
            const CaseInfo& info = case_info(inst.bc.id);
            BoundEvaluation ev = info.vector_lemma
                                     ? evaluate_vector_lemma_seeded(inst.bc, t, lseed, config.tol, inst.norm_cap)
                                     : evaluate_bound(inst.bc, cache, config.tol, inst.norm_cap);
            SlimEval slim;
            slim.instance = ci;
            slim.status = ev.status;
            slim.len = static_cast<int>(ev.chain.size());
            for (int k = 0; k < slim.len; ++k) slim.values[static_cast<std::size_t>(k)] = ev.chain[static_cast<std::size_t>(k)].second;
            result.evals.push_back(slim);
        }
        return result;
    };

    // Aggregates keyed (instance, ensemble); merged in fixed task order so
    // the report is byte-stable for any worker count.
    std::vector<std::vector<Acc>> acc(instances.size(), std::vector<Acc>(ne));

    auto merge_task = [&](const Task& task, const TaskResult& result) {
        const EnsembleSpec& spec = config.ensembles[static_cast<std::size_t>(task.ensemble)];
        Witness wit{family_to_string(spec.family), spec.n, spec.seed, task.index,
                    lemma_seed_for(spec, task.index)};
        for (const SlimEval& ev : result.evals) {
            Acc& a = acc[static_cast<std::size_t>(ev.instance)][static_cast<std::size_t>(task.ensemble)];
            ++a.evaluations;
            if (ev.status == EvalStatus::untestable) {
                ++a.untestable;
                continue;
            }
            const int nlinks = ev.len - 1;
            if (static_cast<int>(a.links.size()) < nlinks) a.links.resize(static_cast<std::size_t>(nlinks));
            bool violated = false;
            for (int l = 0; l < nlinks; ++l) {
                LinkAcc& la = a.links[static_cast<std::size_t>(l)];
                const double lhs = ev.values[static_cast<std::size_t>(l)];
                const double rhs = ev.values[static_cast<std::size_t>(l) + 1];
                const double slack = rhs - lhs;
                const double band = config.tol.band(rhs);
                const bool fail = slack < -band;
                const bool graze = !fail && slack < 0.0;
                const double ratio = link_ratio(lhs, rhs, config.tol);
                ++la.count;
                la.sum_ratio += ratio;
                la.min_ratio = std::min(la.min_ratio, ratio);
                if (ratio > la.max_ratio) {
                    la.max_ratio = ratio;
                    la.max_witness = wit;
                }
                if (slack < la.worst_slack) {
                    la.worst_slack = slack;
                    la.worst_witness = wit;
                }
                if (fail) {
                    ++la.violations;
                    violated = true;
                }
                if (graze) {
                    ++la.grazes;
                    ++a.grazes;
                }
            }
            if (violated) ++a.violations;
        }
    };

    // Chunked parallel evaluation with in-order merging.
    const std::size_t chunk = 256;
    std::vector<TaskResult> results(std::min(chunk, tasks.size()));
    for (std::size_t base = 0; base < tasks.size(); base += chunk) {
        const std::size_t hi = std::min(base + chunk, tasks.size());
        const std::size_t m = hi - base;
        if (jobs == 1) {
            for (std::size_t k = 0; k < m; ++k) results[k] = run_task(tasks[base + k]);
        } else {
            std::atomic<std::size_t> next{0};
            std::mutex err_mutex;
            std::exception_ptr first_error;
            auto worker = [&]() {
                for (;;) {
                    const std::size_t k = next.fetch_add(1);
                    if (k >= m) return;
                    try {
                        results[k] = run_task(tasks[base + k]);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(err_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            };
            std::vector<std::thread> pool;
            const int nw = std::min<int>(jobs, static_cast<int>(m));
            pool.reserve(static_cast<std::size_t>(nw));
            for (int wi = 0; wi < nw; ++wi) pool.emplace_back(worker);
            for (std::thread& th : pool) th.join();
            if (first_error) std::rethrow_exception(first_error);
        }
        for (std::size_t k = 0; k < m; ++k) {
            merge_task(tasks[base + k], results[k]);
            results[k].evals.clear();
        }
    }

    SuiteReport report;
    report.version = ORLICZ_RADIUS_VERSION;
    report.jobs = jobs;
    report.config = config;
    for (std::size_t c = 0; c < instances.size(); ++c) {
        const std::vector<std::string>& chain_names = case_info(instances[c].bc.id).chain;
        for (std::size_t e = 0; e < ne; ++e) {
            const bool applies = std::find(applicable[e].begin(), applicable[e].end(), static_cast<int>(c)) !=
                                 applicable[e].end();
            if (!applies) continue;
            const Acc& a = acc[c][e];
            CaseEnsembleStats row;
            row.case_key = instances[c].key;
            row.case_id = instances[c].bc.id;
            row.ensemble = config.ensembles[e];
            row.evaluations = a.evaluations;
            row.violations = a.violations;
            row.untestable = a.untestable;
            row.grazes = a.grazes;
            for (std::size_t l = 0; l < a.links.size(); ++l) {
                const LinkAcc& la = a.links[l];
                LinkStats ls;
                if (l + 1 < chain_names.size()) {
                    ls.lhs_name = chain_names[l];
                    ls.rhs_name = chain_names[l + 1];
                } else {
                    ls.lhs_name = "link" + std::to_string(l);
                    ls.rhs_name = "link" + std::to_string(l + 1);
                }
                ls.violations = la.violations;
                ls.grazes = la.grazes;
                ls.min_ratio = la.min_ratio;
                ls.mean_ratio = la.count > 0 ? la.sum_ratio / static_cast<double>(la.count) : 0.0;
                ls.max_ratio = la.max_ratio;
                ls.max_ratio_witness = la.max_witness;
                ls.worst_slack = la.worst_slack;
                ls.worst_slack_witness = la.worst_witness;
                row.links.push_back(std::move(ls));
            }
            report.rows.push_back(std::move(row));
        }
    }

    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::vector<CaseEnsembleStats> tightness_stats(const SuiteReport& report, const std::string& case_id) {
    std::vector<CaseEnsembleStats> rows;
    for (const CaseEnsembleStats& row : report.rows)
        if (row.case_id == case_id || row.case_key == case_id) rows.push_back(row);
    require(!rows.empty(), ErrCode::unknown_case, "case '" + case_id + "' not present in the report");
    return rows;
}

} // namespace orad
