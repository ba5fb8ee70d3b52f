#pragma once
#include <optional>

#include "sdirac/asymptotics.hpp"

namespace sdirac {

/// f1 = (e^{i beta} cosh theta, e^{i gamma} sinh theta), f2 = e^{i delta} (e^{i beta} sinh theta, e^{i gamma} cosh theta)
struct HyperbolicParams {
    double theta = 0, beta = 0, gamma = 0, delta = 0;
};

struct ScatteringMatrix {
    Mat2 t;
};

struct SpectrumPoint {
    double omega = 0, m = 0, lambda = 0;
    HalfInteger k;
    Regime regime = Regime::evanescent;
    std::optional<double> fnorm;  // |f_inf,1|, propagating only
    double mu_plus = 0, mu_minus = 0, nu_plus = 0, nu_minus = 0;
    double err_estimate = 0;
    bool converged = true;
};

HyperbolicParams params_from_f(const SpinorPair& f1, const SpinorPair& f2);
std::pair<SpinorPair, SpinorPair> f_from_params(const HyperbolicParams& h);

/// t11 = t22 = 1/2, t12 = -f2+/(2 f1+), t21 = conj(t12)
ScatteringMatrix scattering_matrix_closed(const SpinorPair& f1, const SpinorPair& f2);

/// trapezoidal rule in alpha with a fixed number of nodes
ScatteringMatrix scattering_matrix_quadrature(const SpinorPair& f1, const SpinorPair& f2, int nodes = 512);

struct AdaptiveQuadrature {
    ScatteringMatrix T;
    int nodes = 0;
    double change = 0;  // max entry change at the last doubling
};

/// doubles the node count from `nodes` until entries change by less than tol (cap 2^21 nodes).
/// The integrand peaks with width ~ 1/|f|^2, so this is practical for |f| up to a few hundred.
AdaptiveQuadrature scattering_matrix_quadrature_adaptive(const SpinorPair& f1, const SpinorPair& f2, double tol = 1e-13,
                                                         int nodes = 512);

/// max_{a,d} |sum_{b,c} t_ab <f_b, f_c> t_cd - delta_ad / (2 (1 + |f_a|^2))|
double lemma_tab_residual(const ScatteringMatrix& T, const SpinorPair& f1, const SpinorPair& f2);

/// mu and nu from the infinity data of branch 1; |f1|^2 - 1 is taken as 2|f1-|^2 to avoid cancellation
SpectrumPoint spectrum_from_f(const ModeParams& p, const SpinorPair& f1);

/// full pipeline: extraction for |omega| > m, zeros for |omega| < m
SpectrumPoint spectrum_point(const ModeParams& p, const ExtractOptions& opt = {});
SpectrumPoint spectrum_point(const ModeParams& p, double tol);

}  // namespace sdirac
