#include "orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace orad {

namespace {

constexpr double kExpm1Max = 700.0;
constexpr double kExpsqMax = 26.0;

double parse_param(const std::string& spec, const std::string& head) {
    // form: head:p=<value>
    const std::string rest = spec.substr(head.size());
    require(rest.rfind(":p=", 0) == 0, ErrCode::parse, "malformed phi spec '" + spec + "' (expected " + head + ":p=<value>)");
    std::size_t pos = 0;
    double p = 0.0;
    try {
        p = std::stod(rest.substr(3), &pos);
    } catch (const std::exception&) {
        fail(ErrCode::parse, "malformed phi parameter in '" + spec + "'");
    }
    require(pos == rest.size() - 3, ErrCode::parse, "trailing characters in phi spec '" + spec + "'");
    return p;
}

std::string format_param(double p) {
    std::ostringstream os;
    os.precision(17);
    os << p;
    return os.str();
}

} // namespace

OrliczFn OrliczFn::power(double p) {
    require(std::isfinite(p) && p >= 1.0, ErrCode::invalid_argument, "power Orlicz function requires p >= 1");
    OrliczFn f;
    f.kind_ = OrliczKind::power;
    f.param_ = p;
    f.domain_max_ = std::numeric_limits<double>::infinity();
    f.submult_.state = SubmultStatus::State::exact;
    return f;
}

OrliczFn OrliczFn::exp_minus_one() {
    OrliczFn f;
    f.kind_ = OrliczKind::exp_minus_one;
    f.domain_max_ = kExpm1Max;
    f.submult_.state = SubmultStatus::State::unchecked;
    return f;
}

OrliczFn OrliczFn::power_log(double p) {
    require(std::isfinite(p) && p > 0.0, ErrCode::invalid_argument, "power_log Orlicz function requires p > 0");
    OrliczFn f;
    f.kind_ = OrliczKind::power_log;
    f.param_ = p;
    f.domain_max_ = std::numeric_limits<double>::infinity();
    f.submult_.state = SubmultStatus::State::unchecked;
    return f;
}

OrliczFn OrliczFn::exp_square_minus_one() {
    OrliczFn f;
    f.kind_ = OrliczKind::exp_square_minus_one;
    f.domain_max_ = kExpsqMax;
    f.submult_.state = SubmultStatus::State::unchecked;
    return f;
}

OrliczFn OrliczFn::custom_table(std::vector<std::pair<double, double>> points) {
    require(points.size() >= 2, ErrCode::invalid_argument, "custom phi table needs at least 2 points");
    require(points.front().first == 0.0 && points.front().second == 0.0, ErrCode::invalid_argument,
            "custom phi table must start at (0,0)");
    for (std::size_t i = 0; i < points.size(); ++i) {
        require(std::isfinite(points[i].first) && std::isfinite(points[i].second), ErrCode::invalid_argument,
                "custom phi table has non-finite entries");
        if (i > 0) {
            require(points[i].first > points[i - 1].first, ErrCode::invalid_argument,
                    "custom phi table abscissae must be strictly increasing");
            require(points[i].second > points[i - 1].second, ErrCode::invalid_argument,
                    "custom phi table values must be strictly increasing");
        }
    }
    OrliczFn f;
    f.kind_ = OrliczKind::custom;
    f.domain_max_ = points.back().first;
    f.table_ = std::move(points);
    f.submult_.state = SubmultStatus::State::unchecked;
    return f;
}

OrliczFn OrliczFn::parse(const std::string& spec) {
    if (spec == "expm1") return exp_minus_one();
    if (spec == "expsq") return exp_square_minus_one();
    if (spec.rfind("power:", 0) == 0 || spec == "power") return power(parse_param(spec, "power"));
    if (spec.rfind("powerlog:", 0) == 0) return power_log(parse_param(spec, "powerlog"));
    if (spec.rfind("table:", 0) == 0) {
        const std::string path = spec.substr(6);
        std::ifstream in(path);
        require(in.good(), ErrCode::io, "cannot open phi table file '" + path + "'");
        std::vector<std::pair<double, double>> pts;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double t = 0.0, y = 0.0;
            require(static_cast<bool>(ls >> t >> y), ErrCode::parse, "malformed phi table line '" + line + "'");
            pts.emplace_back(t, y);
        }
        OrliczFn f = custom_table(std::move(pts));
        f.table_source_ = path;
        return f;
    }
    fail(ErrCode::parse, "unknown phi spec '" + spec + "'");
}

double OrliczFn::eval(double t) const {
    require(std::isfinite(t), ErrCode::invalid_argument, "phi argument must be finite");
    require(t >= 0.0, ErrCode::invalid_argument, "phi argument must be >= 0");
    switch (kind_) {
    case OrliczKind::power:
        return std::pow(t, param_);
    case OrliczKind::exp_minus_one:
        require(t <= kExpm1Max, ErrCode::overflow, "expm1 phi overflow: t > 700");
        return std::expm1(t);
    case OrliczKind::power_log:
        return std::pow(t, param_) * std::log1p(t);
    case OrliczKind::exp_square_minus_one:
        require(t <= kExpsqMax, ErrCode::overflow, "expsq phi overflow: t > 26");
        return std::expm1(t * t);
    case OrliczKind::custom: {
        require(t <= domain_max_, ErrCode::domain, "custom phi evaluated outside its table range");
        auto it = std::lower_bound(table_.begin(), table_.end(), t,
                                   [](const std::pair<double, double>& a, double x) { return a.first < x; });
        if (it == table_.begin()) return it->second;
        if (it == table_.end()) return table_.back().second;
        const auto& [t1, y1] = *it;
        const auto& [t0, y0] = *(it - 1);
        if (t == t1) return y1;
        return y0 + (y1 - y0) * (t - t0) / (t1 - t0);
    }
    }
    fail(ErrCode::internal, "unreachable phi kind");
}

double OrliczFn::inverse(double y, double tol) const {
    require(std::isfinite(y) && y >= 0.0, ErrCode::invalid_argument, "phi inverse argument must be finite and >= 0");
    if (y == 0.0) return 0.0;

    // Bracket [lo, hi] with phi(lo) <= y <= phi(hi).
    double hi = 1.0;
    const double hard_max = std::isinf(domain_max_) ? 1e300 : domain_max_;
    while (eval(std::min(hi, hard_max)) < y) {
        if (hi >= hard_max) fail(ErrCode::domain, "phi inverse: value exceeds phi at the overflow boundary");
        hi = std::min(hi * 2.0, hard_max);
    }
    hi = std::min(hi, hard_max);
    double lo = 0.0;

    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (eval(mid) < y)
            lo = mid;
        else
            hi = mid;
    }
    const double t = 0.5 * (lo + hi);
    require(std::abs(eval(t) - y) <= tol * std::max(1.0, y), ErrCode::internal,
            "phi inverse failed to meet requested tolerance");
    return t;
}

OrliczFn OrliczFn::with_submult_status(SubmultStatus s) const {
    OrliczFn f = *this;
    f.submult_ = s;
    return f;
}

std::string OrliczFn::spec_string() const {
    switch (kind_) {
    case OrliczKind::power:
        return "power:p=" + format_param(param_);
    case OrliczKind::exp_minus_one:
        return "expm1";
    case OrliczKind::power_log:
        return "powerlog:p=" + format_param(param_);
    case OrliczKind::exp_square_minus_one:
        return "expsq";
    case OrliczKind::custom:
        return table_source_.empty() ? "table:<inline>" : "table:" + table_source_;
    }
    return "?";
}

AxiomReport check_axioms(const OrliczFn& phi, std::span<const double> grid) {
    require(grid.size() >= 8, ErrCode::invalid_argument, "axiom grid needs at least 8 points");
    require(std::is_sorted(grid.begin(), grid.end()), ErrCode::invalid_argument, "axiom grid must be sorted");
    require(grid.front() == 0.0, ErrCode::invalid_argument, "axiom grid must start at 0");
    require(grid.back() >= 10.0, ErrCode::invalid_argument, "axiom grid must span at least [0,10]");

    AxiomReport rep;
    rep.zero_at_zero = phi.eval(0.0) == 0.0;

    rep.positive = true;
    for (double t : grid) {
        if (t > 0.0 && phi.eval(t) <= 0.0) {
            rep.positive = false;
            rep.positive_witness = AxiomViolation{t, t};
            break;
        }
    }

    rep.convex = true;
    for (std::size_t i = 0; i < grid.size() && rep.convex; ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const double a = grid[i], b = grid[j];
            const double mid = phi.eval(0.5 * (a + b));
            const double avg = 0.5 * (phi.eval(a) + phi.eval(b));
            if (mid > avg + 1e-12 * std::max(1.0, phi.eval(b))) {
                rep.convex = false;
                rep.convex_witness = AxiomViolation{a, b};
                break;
            }
        }
    }

    rep.increasing = true;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(phi.eval(grid[i]) > phi.eval(grid[i - 1]))) {
            rep.increasing = false;
            rep.increasing_witness = AxiomViolation{grid[i - 1], grid[i]};
            break;
        }
    }

    // Unbounded-growth clause, checked as monotone growth across the grid tail.
    rep.grows = phi.eval(grid.back()) > phi.eval(grid[grid.size() / 2]);
    return rep;
}

SubmultResult check_submultiplicative(const OrliczFn& phi, std::span<const double> grid) {
    require(!grid.empty(), ErrCode::invalid_argument, "submultiplicativity grid must be non-empty");
    for (double t : grid) require(t > 0.0, ErrCode::invalid_argument, "submultiplicativity grid must be positive");

    SubmultResult res;
    res.range_lo = *std::min_element(grid.begin(), grid.end());
    res.range_hi = *std::max_element(grid.begin(), grid.end());

    if (phi.kind() == OrliczKind::power) {
        res.outcome = SubmultResult::Outcome::exact;
        return res;
    }

    res.outcome = SubmultResult::Outcome::pass;
    for (double t1 : grid) {
        for (double t2 : grid) {
            double lhs = 0.0, rhs = 0.0;
            try {
                lhs = phi.eval(t1 * t2);
                rhs = phi.eval(t1) * phi.eval(t2);
            } catch (const Error& e) {
                if (e.code() == ErrCode::overflow || e.code() == ErrCode::domain) {
                    ++res.untestable_points;
                    continue;
                }
                throw;
            }
            if (lhs > rhs * (1.0 + 1e-12) + 1e-12) {
                res.outcome = SubmultResult::Outcome::fail;
                res.witness_t1 = t1;
                res.witness_t2 = t2;
                res.witness_lhs = lhs;
                res.witness_rhs = rhs;
                return res;
            }
        }
    }
    return res;
}

SubmultStatus SubmultResult::to_status() const {
    SubmultStatus s;
    switch (outcome) {
    case Outcome::exact:
        s.state = SubmultStatus::State::exact;
        break;
    case Outcome::pass:
        s.state = SubmultStatus::State::checked;
        s.range_lo = range_lo;
        s.range_hi = range_hi;
        break;
    case Outcome::fail:
        s.state = SubmultStatus::State::fails;
        s.witness_t1 = witness_t1;
        s.witness_t2 = witness_t2;
        break;
    }
    return s;
}

} // namespace orad
