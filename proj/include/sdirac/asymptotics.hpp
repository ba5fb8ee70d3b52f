#pragma once
#include <Eigen/Dense>
#include <array>
#include <optional>

#include "sdirac/radial.hpp"

namespace sdirac {

struct Transmission {
    ModeParams params;
    int a = 1;
    SpinorPair f0;                  // horizon data
    std::optional<SpinorPair> finf; // infinity data, propagating regime only
    Regime regime = Regime::propagating;
    double err_estimate = 0.0;      // relative spread of successive extrapolations
    double u_base = 0.0;            // base radius of the accepted extrapolation
    bool converged = true;
};

struct ExtractOptions {
    double tol = 1e-8;      // target for err_estimate
    double ode_tol = 1e-12; // local tolerance of the radial integrator
    double u_base = 0.0;    // 0: max(200M, 50/sqrt(w^2 - m^2))
    int max_doublings = 10;
};

/// Phi(u) = eps (sqrt(w^2-m^2) u + M m^2/sqrt(w^2-m^2) ln u)
double phase(const ModeParams& p, double u);

/// A = [[cosh T, sinh T], [sinh T, cosh T]], T = ln|(w-m)/(w+m)|/4
Eigen::Matrix2d infinity_matrix(const ModeParams& p);

/// Phi(u) corrected by the convergent integral of the second-order adiabatic phase
double corrected_phase(const ModeParams& p, double u);

/// the matrix mapping X(u) to its slowly varying envelope: diag(e^{iPhi}, e^{-iPhi}) exp(-P(u)) A^{-1}
Mat2 envelope_map(const ModeParams& p, double u);

/// both branches from a single propagation of the fundamental matrix
std::array<Transmission, 2> extract_pair(const ModeParams& p, const ExtractOptions& opt = {});

Transmission extract_transmission(const ModeParams& p, int a, double tol);
Transmission extract_transmission(const ModeParams& p, int a, const ExtractOptions& opt = {});

/// evanescent regime: horizon data of the solution decaying at infinity (finf absent)
Transmission decaying_transmission(const ModeParams& p, double tol = 1e-10);

struct Reflection {
    ModeParams params;
    double magnitude = 0.0;     // |f_inf,-| of branch 1 (= |f_inf,+| of branch 2)
    double excess = 0.0;        // ||f_inf|| - 1, free of cancellation
    double err_estimate = 0.0;  // absolute, on magnitude
    double conserved_defect = 0.0;
    double u_far = 0.0;
    int panels = 0;
};

/// reflection amplitude for frequencies above the potential barrier (no turning point),
/// resolved down to the rounding level of long double. Throws RegimeError if |omega| does not exceed
/// the local barrier sqrt(Delta) sqrt(lambda^2 + m^2 r^2) / r^2 everywhere.
Reflection above_barrier_reflection(const ModeParams& p, double u_far = 0.0);

}  // namespace sdirac
