#include "sdirac/quadrature.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "sdirac/types.hpp"

namespace sdirac {

namespace {

GaussRule build_rule(int n) {
    const auto pos = boost::math::legendre_p_zeros<double>(n);
    std::vector<double> nodes;
    for (double z : pos) {
        nodes.push_back(z);
        if (z != 0.0) nodes.push_back(-z);
    }
    std::sort(nodes.begin(), nodes.end());
    GaussRule g;
    g.x = nodes;
    g.w.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = nodes[i];
        const double dp = boost::math::legendre_p_prime(n, x);
        g.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule>(build_rule(n));
    return *slot;
}

std::vector<double> barycentric_weights(const GaussRule& g) {
    const std::size_t n = g.x.size();
    std::vector<double> b(n);
    for (std::size_t j = 0; j < n; ++j) {
        b[j] = std::sqrt((1.0 - g.x[j] * g.x[j]) * g.w[j]);
        if (j % 2) b[j] = -b[j];
    }
    return b;
}

std::vector<double> differentiation_matrix(const GaussRule& g) {
    const std::size_t n = g.x.size();
    const auto b = barycentric_weights(g);
    std::vector<double> D(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = (b[j] / b[i]) / (g.x[i] - g.x[j]);
            D[i * n + j] = v;
            diag -= v;
        }
        D[i * n + i] = diag;
    }
    return D;
}

}  // namespace sdirac
