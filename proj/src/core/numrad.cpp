#include "numrad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "linalg.hpp"
#include "rng.hpp"

namespace orad {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAngleTol = 1e-12;

// H_theta = cos(theta) * A + sin(theta) * B with A = (T+T*)/2, B = i(T-T*)/2,
// both Hermitian. Shared workspace keeps the grid scan allocation-free.
struct SupportEvaluator {
    int n;
    CMatrix a;
    CMatrix b;
    mutable std::vector<Complex> buf;

    explicit SupportEvaluator(const CMatrix& t) : n(t.dim()), a(t.dim()), b(t.dim()) {
        const CMatrix adj = t.adjoint();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                a.at(i, j) = 0.5 * (t.at(i, j) + adj.at(i, j));
                b.at(i, j) = Complex{0.0, 0.5} * (t.at(i, j) - adj.at(i, j));
            }
        buf.resize(static_cast<std::size_t>(n) * n);
    }

    double operator()(double theta) const {
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const auto da = a.data();
        const auto db = b.data();
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = c * da[i] + s * db[i];
        return detail::jacobi_lambda_max(buf.data(), n);
    }
};

struct GoldenResult {
    double theta = 0.0;
    double value = -std::numeric_limits<double>::infinity();
    double final_width = 0.0;
};

GoldenResult golden_max(const SupportEvaluator& g, double lo, double hi) {
    constexpr double rho = 0.6180339887498949; // (sqrt(5)-1)/2
    double x1 = hi - rho * (hi - lo);
    double x2 = lo + rho * (hi - lo);
    double f1 = g(x1);
    double f2 = g(x2);
    GoldenResult best;
    auto note = [&best](double x, double f) {
        if (f > best.value || (f == best.value && x < best.theta)) {
            best.value = f;
            best.theta = x;
        }
    };
    note(x1, f1);
    note(x2, f2);
    int iter = 0;
    while (hi - lo > kAngleTol && iter++ < 200) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - rho * (hi - lo);
            f1 = g(x1);
            note(x1, f1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + rho * (hi - lo);
            f2 = g(x2);
            note(x2, f2);
        }
    }
    best.final_width = hi - lo;
    return best;
}

} // namespace

double rotation_support(const CMatrix& t, double theta) {
    require_finite(t, "rotation_support");
    return SupportEvaluator(t)(theta);
}

RadiusResult numerical_radius(const CMatrix& t, RadiusOptions opts) {
    require_finite(t, "numerical_radius");
    require(opts.grid >= 16, ErrCode::invalid_argument, "numerical_radius grid must be >= 16");

    const int n = t.dim();
    const double norm_t = operator_norm(t);
    const SupportEvaluator g(t);
    const int m = opts.grid;
    const double h = kTwoPi / m;

    std::vector<double> gv(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) gv[static_cast<std::size_t>(i)] = g(h * i);

    double gmax = gv[0];
    for (double x : gv) gmax = std::max(gmax, x);

    // Keep every grid point that could still host the global maximum after
    // refinement; the support function is a max of cosine branches, so a
    // branch peak can exceed its nearest grid sample by at most ||T|| h^2/8.
    const double keep_thr = norm_t * h * h / 8.0 + 1e-12 * std::max(1.0, norm_t);
    std::vector<char> candidate(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < m; ++i) candidate[static_cast<std::size_t>(i)] = gv[static_cast<std::size_t>(i)] >= gmax - keep_thr;

    // Group circularly adjacent candidates into runs; refine one bracket per
    // run (flat plateaus collapse to a single refinement).
    struct Run {
        int rep = 0;
        double rep_value = 0.0;
    };
    std::vector<Run> runs;
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < m; ++i) {
        if (!candidate[static_cast<std::size_t>(i)] || seen[static_cast<std::size_t>(i)]) continue;
        // Walk left to the run start (careful with full-circle runs).
        int start = i;
        int steps = 0;
        while (candidate[static_cast<std::size_t>((start + m - 1) % m)] && steps < m) {
            start = (start + m - 1) % m;
            ++steps;
        }
        Run run;
        int j = start;
        steps = 0;
        run.rep = start;
        run.rep_value = gv[static_cast<std::size_t>(start)];
        while (candidate[static_cast<std::size_t>(j)] && steps < m) {
            seen[static_cast<std::size_t>(j)] = 1;
            const double val = gv[static_cast<std::size_t>(j)];
            if (val > run.rep_value) {
                run.rep_value = val;
                run.rep = j;
            }
            j = (j + 1) % m;
            ++steps;
        }
        runs.push_back(run);
    }

    RadiusResult res;
    res.grid_points = m;
    res.value = -std::numeric_limits<double>::infinity();
    res.theta_star = 0.0;

    // The grid argmax is always a candidate, so at least one run exists and
    // res.value ends >= gmax.
    double win_width = h;
    for (const Run& run : runs) {
        const double center = h * run.rep;
        GoldenResult gr = golden_max(g, center - h, center + h);
        const double refined = std::max(gr.value, run.rep_value);
        const double refined_theta =
            std::fmod((gr.value >= run.rep_value ? gr.theta : center) + kTwoPi, kTwoPi);
        if (refined > res.value || (refined == res.value && refined_theta < res.theta_star)) {
            res.value = refined;
            res.theta_star = refined_theta;
            win_width = gr.final_width;
        }
        ++res.refinements;
    }
    res.value = std::max(res.value, gmax);

    const double eps = std::numeric_limits<double>::epsilon();
    const double fp_cushion = std::max(32.0 * n * eps, 2e-14) * std::max(1.0, norm_t);
    res.certified_error = norm_t * win_width * win_width / 8.0 + fp_cushion;
    // The success criterion scales with the operator: an absolute 1e-9 cannot
    // be met by doubles once ||T|| reaches ~1e5.
    require(res.certified_error <= opts.tol * std::max(1.0, norm_t), ErrCode::domain,
            "numerical_radius: requested tolerance is not attainable at this scale");
    if (res.theta_star >= kTwoPi) res.theta_star -= kTwoPi;
    return res;
}

double radius_oracle(const CMatrix& t, long long samples, std::uint64_t seed) {
    require_finite(t, "radius_oracle");
    require(samples >= 1, ErrCode::invalid_argument, "radius_oracle needs samples >= 1");

    const int n = t.dim();
    double best = 0.0;

    CVector x(static_cast<std::size_t>(n));
    for (long long k = 0; k < samples; ++k) {
        for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] =
                rng::complex_gaussian(seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(i));
        const double nx = vec_norm(x);
        if (nx == 0.0) continue;
        for (Complex& z : x) z /= nx;
        best = std::max(best, std::abs(inner(t * x, x)));
    }

    // Eigenvector sweep of H_theta on a coarse angle grid; the top
    // eigenvector at the maximizing angle attains w(T) exactly.
    const SupportEvaluator ev(t);
    for (int k = 0; k < 64; ++k) {
        const double theta = kTwoPi * k / 64.0;
        CMatrix hmat(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                hmat.at(i, j) = std::cos(theta) * ev.a.at(i, j) + std::sin(theta) * ev.b.at(i, j);
        const EigenDecomposition d = hermitian_eig(hmat);
        CVector v(static_cast<std::size_t>(n));
        for (int col = 0; col < n; ++col) {
            for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = d.vectors.at(i, col);
            best = std::max(best, std::abs(inner(t * v, v)));
        }
    }
    return best;
}

std::vector<BoundaryPoint> range_boundary(const CMatrix& t, int m) {
    require_finite(t, "range_boundary");
    require(m >= 3, ErrCode::invalid_argument, "range_boundary needs m >= 3");

    const int n = t.dim();
    const SupportEvaluator ev(t);
    std::vector<BoundaryPoint> pts;
    pts.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const double theta = kTwoPi * k / m;
        CMatrix hmat(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                hmat.at(i, j) = std::cos(theta) * ev.a.at(i, j) + std::sin(theta) * ev.b.at(i, j);
        const EigenDecomposition d = hermitian_eig(hmat);
        CVector v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = d.vectors.at(i, 0);
        pts.push_back(BoundaryPoint{theta, inner(t * v, v)});
    }
    return pts;
}

} // namespace orad
