#include "ensembles.hpp"

#include <cmath>
#include <sstream>

#include "rng.hpp"

namespace orad {

Family family_from_string(const std::string& name) {
    if (name == "ginibre") return Family::ginibre;
    if (name == "hermitian") return Family::hermitian;
    if (name == "normal") return Family::normal;
    if (name == "unitary") return Family::unitary;
    if (name == "nilpotent_jordan") return Family::nilpotent_jordan;
    if (name == "nilpotent_random") return Family::nilpotent_random;
    if (name == "rank1") return Family::rank1;
    if (name == "scaled") return Family::scaled;
    fail(ErrCode::parse, "unknown ensemble family '" + name + "'");
}

std::string family_to_string(Family f) {
    switch (f) {
    case Family::ginibre: return "ginibre";
    case Family::hermitian: return "hermitian";
    case Family::normal: return "normal";
    case Family::unitary: return "unitary";
    case Family::nilpotent_jordan: return "nilpotent_jordan";
    case Family::nilpotent_random: return "nilpotent_random";
    case Family::rank1: return "rank1";
    case Family::scaled: return "scaled";
    }
    return "?";
}

std::string EnsembleSpec::label() const {
    std::ostringstream os;
    os << family_to_string(family);
    if (family == Family::scaled) os << "(" << family_to_string(base) << ")";
    os << " n=" << n << " seed=" << seed;
    return os.str();
}

namespace {

CMatrix ginibre_draw(int n, std::uint64_t seed, int index) {
    CMatrix g(n);
    std::uint64_t pos = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.at(i, j) = rng::complex_gaussian(seed, static_cast<std::uint64_t>(index), pos++);
    return g;
}

// Distinct sub-streams per family keep draws independent when a harness pairs
// families off one seed.
constexpr std::uint64_t kStreamGinibre = 0x01;
constexpr std::uint64_t kStreamHermitian = 0x02;
constexpr std::uint64_t kStreamNormalDiag = 0x03;
constexpr std::uint64_t kStreamUnitary = 0x04;
constexpr std::uint64_t kStreamNilpotent = 0x05;
constexpr std::uint64_t kStreamRank1 = 0x06;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return rng::splitmix64(seed ^ (stream * 0x9E3779B97F4A7C15ULL));
}

CMatrix unitary_draw(int n, std::uint64_t seed, int index) {
    // Modified Gram-Schmidt with one re-orthogonalization pass.
    CMatrix g = ginibre_draw(n, stream_seed(seed, kStreamUnitary), index);
    std::vector<CVector> cols(static_cast<std::size_t>(n), CVector(static_cast<std::size_t>(n)));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = g.at(i, j);
    for (int j = 0; j < n; ++j) {
        auto& c = cols[static_cast<std::size_t>(j)];
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                const Complex proj = inner(c, cols[static_cast<std::size_t>(k)]);
                for (int i = 0; i < n; ++i)
                    c[static_cast<std::size_t>(i)] -= proj * cols[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            }
        }
        const double nc = vec_norm(c);
        require(nc > 1e-8, ErrCode::internal, "unitary draw hit a degenerate Gram-Schmidt column");
        for (Complex& z : c) z /= nc;
    }
    CMatrix u(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) u.at(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return u;
}

} // namespace

CMatrix generate(const EnsembleSpec& spec, int index) {
    require(spec.n >= 1 && spec.n <= kMaxDim, ErrCode::dimension,
            "ensemble dimension out of range: " + std::to_string(spec.n));
    require(index >= 0 && index < spec.count, ErrCode::invalid_argument,
            "draw index " + std::to_string(index) + " outside count " + std::to_string(spec.count));
    const int n = spec.n;
    const std::uint64_t seed = spec.seed;

    switch (spec.family) {
    case Family::ginibre:
        return ginibre_draw(n, stream_seed(seed, kStreamGinibre), index);
    case Family::hermitian: {
        CMatrix g = ginibre_draw(n, stream_seed(seed, kStreamHermitian), index);
        CMatrix h(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) h.at(i, j) = 0.5 * (g.at(i, j) + std::conj(g.at(j, i)));
        return h;
    }
    case Family::normal: {
        // U diag(z) U* for Haar-ish U and complex Gaussian diagonal.
        CMatrix u = unitary_draw(n, seed, index);
        const std::uint64_t dseed = stream_seed(seed, kStreamNormalDiag);
        CMatrix d(n);
        for (int i = 0; i < n; ++i)
            d.at(i, i) = 2.0 * rng::complex_gaussian(dseed, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(i));
        return u * d * u.adjoint();
    }
    case Family::unitary:
        return unitary_draw(n, seed, index);
    case Family::nilpotent_jordan: {
        CMatrix j(n);
        for (int i = 0; i + 1 < n; ++i) j.at(i, i + 1) = 1.0;
        return j;
    }
    case Family::nilpotent_random: {
        const std::uint64_t nseed = stream_seed(seed, kStreamNilpotent);
        CMatrix t(n);
        std::uint64_t pos = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                t.at(i, j) = rng::complex_gaussian(nseed, static_cast<std::uint64_t>(index), pos++);
        return t;
    }
    case Family::rank1: {
        const std::uint64_t rseed = stream_seed(seed, kStreamRank1);
        CVector x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(i)] = rng::complex_gaussian(rseed, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(i));
            y[static_cast<std::size_t>(i)] =
                rng::complex_gaussian(rseed, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(n + i));
        }
        CMatrix r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.at(i, j) = x[static_cast<std::size_t>(i)] * std::conj(y[static_cast<std::size_t>(j)]);
        return r;
    }
    case Family::scaled: {
        EnsembleSpec base = spec;
        base.family = spec.base;
        require(spec.base != Family::scaled, ErrCode::invalid_argument, "scaled ensemble cannot nest scaled");
        return generate(base, index) * spec.scale;
    }
    }
    fail(ErrCode::internal, "unreachable ensemble family");
}

} // namespace orad
