#pragma once
#include <Eigen/Dense>
#include <vector>

#include "sdirac/types.hpp"

namespace sdirac {

struct AngularMode {
    HalfInteger k;
    int n = 1;  // n > 0: n-th positive eigenvalue ascending; n < 0: |n|-th negative descending
    double lambda = 0.0;
};

/// 2N x 2N collocation matrix of Y -> (L_- Y_-, -L_+ Y_+) in x = cos(theta),
/// in coordinates z = sqrt(w) Y so that the quadrature inner product is Euclidean.
/// Unknown ordering: (Y_+ at nodes, Y_- at nodes).
Eigen::MatrixXd angular_operator(HalfInteger k, int N);

struct AngularSpectrum {
    std::vector<double> lambda;       // sorted ascending
    std::vector<double> convergence;  // |lambda(2N) - lambda(N)| per entry
    int N = 0;                        // grid size of the returned values
};

/// the `count` eigenvalues of smallest modulus, converged under doubling of N
AngularSpectrum angular_eigenvalues(HalfInteger k, int count);

/// eigenvalue lambda_{kn}
double angular_lambda(HalfInteger k, int n);

struct AngularEigenfunction {
    AngularMode mode;
    std::vector<double> x, w;        // Gauss-Legendre nodes and weights
    std::vector<double> yplus, yminus;
};

/// samples of (Y+, Y-) on the N-point Gauss-Legendre grid, normalized in L^2(d cos theta)
AngularEigenfunction angular_eigenfunction(HalfInteger k, int n, int N = 128);

}  // namespace sdirac
