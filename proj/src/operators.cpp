#include "sdirac/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sdirac {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;

double wrap(double a) {
    a = std::remainder(a, 2.0 * kPi);
    return a <= -kPi ? a + 2.0 * kPi : a;
}

Mat2 gram(const SpinorPair& f1, const SpinorPair& f2) {
    Mat2 G;
    G << inner(f1, f1), inner(f1, f2), inner(f2, f1), inner(f2, f2);
    return G;
}

}  // namespace

HyperbolicParams params_from_f(const SpinorPair& f1, const SpinorPair& f2) {
    if (!f1.finite() || !f2.finite()) throw DomainError("non-finite transmission data");
    const double s11 = std::max(1.0, f1.norm2()), s22 = std::max(1.0, f2.norm2());
    const double d1 = std::abs(f1.pseudo_norm() - 1.0) / s11;
    const double d2 = std::abs(f2.pseudo_norm() + 1.0) / s22;
    const double d12 = std::abs(pseudo_inner(f1, f2)) / std::sqrt(s11 * s22);
    if (std::max({d1, d2, d12}) > 1e-4)
        throw DomainError("transmission pair is not pseudo-orthonormal (defect " + std::to_string(std::max({d1, d2, d12})) + ")");
    HyperbolicParams h;
    h.theta = std::asinh(std::abs(f1.xminus));
    h.beta = std::arg(f1.xplus);
    h.gamma = std::abs(f1.xminus) > 0 ? std::arg(f1.xminus) : 0.0;
    h.delta = wrap(std::arg(f2.xminus) - h.gamma);
    return h;
}

std::pair<SpinorPair, SpinorPair> f_from_params(const HyperbolicParams& h) {
    const double c = std::cosh(h.theta), s = std::sinh(h.theta);
    const cplx eb = std::exp(I * h.beta), eg = std::exp(I * h.gamma), ed = std::exp(I * h.delta);
    return {SpinorPair{eb * c, eg * s}, SpinorPair{ed * eb * s, ed * eg * c}};
}

ScatteringMatrix scattering_matrix_closed(const SpinorPair& f1, const SpinorPair& f2) {
    if (f1.xplus == 0.0) throw DomainError("f1+ vanishes");
    ScatteringMatrix T;
    const cplx t12 = -0.5 * f2.xplus / f1.xplus;
    T.t << 0.5, t12, std::conj(t12), 0.5;
    return T;
}

ScatteringMatrix scattering_matrix_quadrature(const SpinorPair& f1, const SpinorPair& f2, int nodes) {
    if (nodes < 4) throw DomainError("quadrature needs at least 4 nodes");
    Mat2 acc = Mat2::Zero();
    for (int j = 0; j < nodes; ++j) {
        const double a = 2.0 * kPi * j / nodes;
        const cplx em = std::exp(-I * a), ep = std::conj(em);
        const cplx t1 = f2.xplus * em - f2.xminus * ep;
        const cplx t2 = -f1.xplus * em + f1.xminus * ep;
        const double den = std::norm(t1) + std::norm(t2);
        if (!(den > 0)) throw DomainError("vanishing denominator in the alpha quadrature");
        acc(0, 0) += std::norm(t1) / den;
        acc(0, 1) += t1 * std::conj(t2) / den;
        acc(1, 1) += std::norm(t2) / den;
    }
    acc /= static_cast<double>(nodes);
    acc(1, 0) = std::conj(acc(0, 1));
    return {acc};
}

AdaptiveQuadrature scattering_matrix_quadrature_adaptive(const SpinorPair& f1, const SpinorPair& f2, double tol, int nodes) {
    constexpr int kCap = 1 << 21;
    AdaptiveQuadrature r;
    r.T = scattering_matrix_quadrature(f1, f2, nodes);
    r.nodes = nodes;
    while (true) {
        if (2 * r.nodes > kCap) throw ConvergenceError("alpha quadrature did not converge", r.change);
        const ScatteringMatrix next = scattering_matrix_quadrature(f1, f2, 2 * r.nodes);
        r.change = (next.t - r.T.t).cwiseAbs().maxCoeff();
        r.T = next;
        r.nodes *= 2;
        if (r.change < tol) return r;
    }
}

double lemma_tab_residual(const ScatteringMatrix& T, const SpinorPair& f1, const SpinorPair& f2) {
    const Mat2 R = T.t * gram(f1, f2) * T.t;
    const double n[2] = {f1.norm2(), f2.norm2()};
    double worst = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int d = 0; d < 2; ++d) {
            const double target = a == d ? 1.0 / (2.0 * (1.0 + n[a])) : 0.0;
            worst = std::max(worst, std::abs(R(a, d) - target));
        }
    return worst;
}

SpectrumPoint spectrum_from_f(const ModeParams& p, const SpinorPair& f1) {
    SpectrumPoint s;
    s.omega = p.omega;
    s.m = p.m;
    s.lambda = p.lambda;
    s.k = p.k;
    s.regime = Regime::propagating;
    const double sh2 = std::norm(f1.xminus);  // sinh^2 theta = (|f1|^2 - 1)/2
    s.fnorm = std::sqrt(1.0 + 2.0 * sh2);
    const double t = std::sqrt(sh2 / (1.0 + sh2));                // tanh theta
    const double small = (1.0 / (1.0 + sh2)) / (1.0 + t);         // 1 - tanh theta
    const double eps = p.epsilon();
    s.mu_plus = eps > 0 ? 1.0 + t : -small;
    s.mu_minus = eps > 0 ? small : -1.0 - t;
    s.nu_plus = 1.0 / std::sqrt(1.0 + sh2);
    s.nu_minus = -s.nu_plus;
    return s;
}

SpectrumPoint spectrum_point(const ModeParams& p, const ExtractOptions& opt) {
    if (p.regime() == Regime::evanescent) {
        SpectrumPoint s;
        s.omega = p.omega;
        s.m = p.m;
        s.lambda = p.lambda;
        s.k = p.k;
        s.regime = Regime::evanescent;
        return s;
    }
    const auto tr = extract_pair(p, opt);
    const double n1 = tr[0].finf->norm(), n2 = tr[1].finf->norm();
    if (std::abs(n1 - n2) > 1e-6 * n1) throw ConvergenceError("branch norms disagree", std::abs(n1 - n2));
    SpectrumPoint s = spectrum_from_f(p, *tr[0].finf);
    s.err_estimate = tr[0].err_estimate;
    s.converged = tr[0].converged;
    return s;
}

SpectrumPoint spectrum_point(const ModeParams& p, double tol) {
    ExtractOptions opt;
    opt.tol = tol;
    return spectrum_point(p, opt);
}

}  // namespace sdirac
