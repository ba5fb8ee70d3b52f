#pragma once
#include <vector>

namespace sdirac {

struct GaussRule {
    std::vector<double> x;  // ascending nodes in (-1, 1)
    std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [-1, 1]; cached, thread-safe
const GaussRule& gauss_legendre(int n);

/// barycentric weights of the Gauss-Legendre nodes, b_j ~ (-1)^j sqrt((1-x_j^2) w_j)
std::vector<double> barycentric_weights(const GaussRule& g);

/// differentiation matrix of the interpolating polynomial, row-major n*n
std::vector<double> differentiation_matrix(const GaussRule& g);

}  // namespace sdirac
