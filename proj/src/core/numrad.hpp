#pragma once

#include <cstdint>
#include <vector>

#include "cmatrix.hpp"

namespace orad {

struct RadiusOptions {
    int grid = 1024;
    double tol = 1e-9;
};

struct RadiusResult {
    double value = 0.0;           // w(T) estimate
    double theta_star = 0.0;      // maximizing angle in [0, 2pi)
    double certified_error = 0.0; // upper bound on |value - w(T)|
    int grid_points = 0;
    int refinements = 0;
};

/// lambda_max of H_theta = (e^{i theta} T + e^{-i theta} T*) / 2.
double rotation_support(const CMatrix& t, double theta);

/// w(T) by maximizing the support function theta -> lambda_max(H_theta)
/// over a uniform grid, then golden-section refinement of every surviving
/// local-maximum bracket. The certified error combines the cosine-branch
/// curvature bound ||T|| * delta^2 / 8 with a floating-point cushion.
RadiusResult numerical_radius(const CMatrix& t, RadiusOptions opts = {});

/// Independent lower-bound oracle: max |<Tx,x>| over `samples` seeded random
/// unit vectors plus the eigenvectors of H_theta on a 64-point angle grid.
double radius_oracle(const CMatrix& t, long long samples, std::uint64_t seed);

struct BoundaryPoint {
    double theta = 0.0;
    Complex value{0.0, 0.0};
};

/// Support points <T v, v> of the numerical range boundary, v the top
/// eigenvector of H_theta on an m-point angle grid. m >= 3.
std::vector<BoundaryPoint> range_boundary(const CMatrix& t, int m);

} // namespace orad
