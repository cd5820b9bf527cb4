#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace orad {

enum class OrliczKind { power, exp_minus_one, power_log, exp_square_minus_one, custom };

struct SubmultStatus {
    enum class State { exact, checked, unchecked, fails };
    State state = State::unchecked;
    double range_lo = 0.0; // valid argument range when state == checked
    double range_hi = 0.0;
    double witness_t1 = 0.0; // failing pair when state == fails
    double witness_t2 = 0.0;

    bool usable_for_submult_cases() const { return state == State::exact || state == State::checked; }
};

/// Scalar Orlicz function phi: [0,inf) -> [0,inf).
/// Exponential kinds refuse arguments past their overflow boundary
/// (e^t-1: t > 700, e^(t^2)-1: t > 26) instead of returning infinity.
class OrliczFn {
public:
    static OrliczFn power(double p);                // p >= 1
    static OrliczFn exp_minus_one();
    static OrliczFn power_log(double p);            // p > 0, t^p * log(1+t)
    static OrliczFn exp_square_minus_one();
    static OrliczFn custom_table(std::vector<std::pair<double, double>> points);
    /// "power:p=2" | "expm1" | "powerlog:p=1" | "expsq" | "table:<csv path>"
    static OrliczFn parse(const std::string& spec);

    double eval(double t) const;
    double operator()(double t) const { return eval(t); }

    /// Monotone inverse by bracketing + bisection; inverse(0) = 0.
    double inverse(double y, double tol = 1e-12) const;

    OrliczKind kind() const { return kind_; }
    double param() const { return param_; }
    double domain_max() const { return domain_max_; }
    const SubmultStatus& submult_status() const { return submult_; }
    OrliczFn with_submult_status(SubmultStatus s) const;

    /// Canonical spec string ("power:p=2", "expm1", ...).
    std::string spec_string() const;

private:
    OrliczFn() = default;

    OrliczKind kind_ = OrliczKind::power;
    double param_ = 1.0;
    double domain_max_ = 0.0; // largest admissible argument (inf for powers)
    SubmultStatus submult_;
    std::vector<std::pair<double, double>> table_;
    std::string table_source_;
};

struct AxiomViolation {
    double a = 0.0;
    double b = 0.0;
};

struct AxiomReport {
    bool zero_at_zero = false;
    bool positive = false;
    bool convex = false;
    bool increasing = false;
    bool grows = false;
    std::optional<AxiomViolation> positive_witness;
    std::optional<AxiomViolation> convex_witness;
    std::optional<AxiomViolation> increasing_witness;

    bool all_pass() const { return zero_at_zero && positive && convex && increasing && grows; }
};

/// Grid must be sorted, have >= 8 points, start at 0 and reach at least 10.
AxiomReport check_axioms(const OrliczFn& phi, std::span<const double> grid);

struct SubmultResult {
    enum class Outcome { exact, pass, fail };
    Outcome outcome = Outcome::pass;
    double range_lo = 0.0;
    double range_hi = 0.0;
    double witness_t1 = 0.0;
    double witness_t2 = 0.0;
    double witness_lhs = 0.0; // phi(t1*t2)
    double witness_rhs = 0.0; // phi(t1)*phi(t2)
    long long untestable_points = 0;

    SubmultStatus to_status() const;
};

/// Tests phi(t1*t2) <= phi(t1)*phi(t2) on the product lattice of the grid.
/// Power functions return `exact` without sampling. Overflow while probing
/// counts as an untestable point, never as a failure.
SubmultResult check_submultiplicative(const OrliczFn& phi, std::span<const double> grid);

} // namespace orad
