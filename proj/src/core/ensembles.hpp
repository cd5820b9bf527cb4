#pragma once

#include <cstdint>
#include <string>

#include "cmatrix.hpp"

namespace orad {

enum class Family {
    ginibre,
    hermitian,
    normal,
    unitary,
    nilpotent_jordan,
    nilpotent_random,
    rank1,
    scaled,
};

Family family_from_string(const std::string& name);
std::string family_to_string(Family f);

/// Seeded matrix distribution. Generation is a pure function of
/// (spec, draw index); parallel draws need no shared stream.
struct EnsembleSpec {
    Family family = Family::ginibre;
    int n = 2;
    int count = 1;
    std::uint64_t seed = 0;
    // scaled(base, c): draw from `base` and multiply by the complex constant c.
    Family base = Family::ginibre;
    Complex scale{1.0, 0.0};

    std::string label() const;
};

CMatrix generate(const EnsembleSpec& spec, int index);

} // namespace orad
