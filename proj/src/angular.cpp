#include "sdirac/angular.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "sdirac/quadrature.hpp"

namespace sdirac {

namespace {

constexpr int kDefaultN = 128;
constexpr int kMaxN = 2048;
constexpr double kConvTol = 1e-8;

// Y± = g± P± with g+ = (1-x)^{(κ-1/2)/2} (1+x)^{(κ+1/2)/2} and g- mirrored
// turns the system for k > 0 into a degree-preserving operator on polynomials P±.
Eigen::MatrixXd positive_k_operator(double kappa, int N) {
    const GaussRule& g = gauss_legendre(N);
    const auto D = differentiation_matrix(g);
    const double a = kappa - 0.5, b = kappa + 0.5;
    std::vector<double> lgp(N), lgm(N), sw(N);
    for (int i = 0; i < N; ++i) {
        const double l1 = std::log1p(-g.x[i]), l2 = std::log1p(g.x[i]);
        lgp[i] = 0.5 * (a * l1 + b * l2);
        lgm[i] = 0.5 * (b * l1 + a * l2);
        sw[i] = std::sqrt(g.w[i]);
    }
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const double d = D[i * N + j];
            const double up = (i == j ? b : 0.0) - (1.0 - g.x[i]) * d;
            const double dn = (i == j ? b : 0.0) + (1.0 + g.x[i]) * d;
            if (up != 0.0) A(i, N + j) = up * sw[i] / sw[j] * std::exp(lgp[i] - lgm[j]);
            if (dn != 0.0) A(N + i, j) = dn * sw[i] / sw[j] * std::exp(lgm[i] - lgp[j]);
        }
    }
    return A;
}

std::vector<double> sorted_spectrum(HalfInteger k, int N) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::vector<double>> memo;
    const auto key = std::make_pair(k.twice(), N);
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(angular_operator(k, N), false);
    if (es.info() != Eigen::Success) throw ConvergenceError("angular eigensolve failed", 0.0);
    std::vector<double> ev;
    ev.reserve(2 * N);
    for (int i = 0; i < 2 * N; ++i) ev.push_back(es.eigenvalues()[i].real());
    std::sort(ev.begin(), ev.end(), [](double p, double q) { return std::abs(p) < std::abs(q); });
    std::lock_guard<std::mutex> lock(mtx);
    memo[key] = ev;
    return ev;
}

// smallest-modulus eigenvalues, positive member first among a ± pair
std::vector<double> pick(const std::vector<double>& byabs, int count) {
    std::vector<double> pos, neg;
    for (double v : byabs) (v > 0 ? pos : neg).push_back(v);
    std::vector<double> out;
    for (std::size_t i = 0; static_cast<int>(out.size()) < count; ++i) {
        if (i >= pos.size() || i >= neg.size()) break;
        out.push_back(pos[i]);
        if (static_cast<int>(out.size()) < count) out.push_back(neg[i]);
    }
    return out;
}

}  // namespace

Eigen::MatrixXd angular_operator(HalfInteger k, int N) {
    if (N < 16) throw DomainError("angular grid needs N >= 16");
    Eigen::MatrixXd A = positive_k_operator(k.abs(), N);
    if (k.value() > 0) return A;
    // k -> -k exchanges L+ and L-: K(-k) = -P K(k) P with P swapping the two blocks
    Eigen::MatrixXd B(2 * N, 2 * N);
    B.topLeftCorner(N, N) = -A.bottomRightCorner(N, N);
    B.topRightCorner(N, N) = -A.bottomLeftCorner(N, N);
    B.bottomLeftCorner(N, N) = -A.topRightCorner(N, N);
    B.bottomRightCorner(N, N) = -A.topLeftCorner(N, N);
    return B;
}

AngularSpectrum angular_eigenvalues(HalfInteger k, int count) {
    if (count < 1) throw DomainError("count must be positive");
    int N = kDefaultN;
    while (N < 2 * count + 16) N *= 2;
    double worst = 0.0;
    for (; N <= kMaxN; N *= 2) {
        auto lo = pick(sorted_spectrum(k, N), count);
        auto hi = pick(sorted_spectrum(k, 2 * N), count);
        AngularSpectrum s;
        s.N = N;
        worst = 0.0;
        for (int i = 0; i < count; ++i) {
            const double c = std::abs(hi[i] - lo[i]);
            s.convergence.push_back(c);
            worst = std::max(worst, c);
        }
        if (worst < kConvTol) {
            s.lambda = lo;
            std::vector<std::size_t> idx(count);
            for (int i = 0; i < count; ++i) idx[i] = i;
            std::sort(idx.begin(), idx.end(), [&](auto p, auto q) { return lo[p] < lo[q]; });
            std::vector<double> c2(count);
            for (int i = 0; i < count; ++i) {
                s.lambda[i] = lo[idx[i]];
                c2[i] = s.convergence[idx[i]];
            }
            s.convergence = c2;
            return s;
        }
    }
    throw ConvergenceError("angular eigenvalues did not converge up to N = " + std::to_string(kMaxN), worst);
}

double angular_lambda(HalfInteger k, int n) {
    if (n == 0) throw DomainError("angular index n must be nonzero");
    const auto s = angular_eigenvalues(k, 2 * std::abs(n));
    std::vector<double> side;
    for (double v : s.lambda)
        if ((v > 0) == (n > 0)) side.push_back(v);
    std::sort(side.begin(), side.end(), [](double p, double q) { return std::abs(p) < std::abs(q); });
    return side.at(std::abs(n) - 1);
}

AngularEigenfunction angular_eigenfunction(HalfInteger k, int n, int N) {
    const double lam = angular_lambda(k, n);
    const Eigen::MatrixXd A = angular_operator(k, N);
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, true);
    int best = 0;
    for (int i = 1; i < 2 * N; ++i)
        if (std::abs(es.eigenvalues()[i] - lam) < std::abs(es.eigenvalues()[best] - lam)) best = i;
    if (std::abs(es.eigenvalues()[best] - lam) > 1e-6)
        throw DomainError("mode (k=" + k.str() + ", n=" + std::to_string(n) + ") not resolved at N=" + std::to_string(N));
    Eigen::VectorXd z = es.eigenvectors().col(best).real();
    z /= z.norm();
    Eigen::Index imax;
    z.cwiseAbs().maxCoeff(&imax);
    if (z[imax] < 0) z = -z;

    const GaussRule& g = gauss_legendre(N);
    AngularEigenfunction ef;
    ef.mode = {k, n, lam};
    ef.x = g.x;
    ef.w = g.w;
    ef.yplus.resize(N);
    ef.yminus.resize(N);
    for (int i = 0; i < N; ++i) {
        const double s = std::sqrt(g.w[i]);
        ef.yplus[i] = z[i] / s;
        ef.yminus[i] = z[N + i] / s;
    }
    return ef;
}

}  // namespace sdirac
