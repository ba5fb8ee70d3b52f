#pragma once
#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "sdirac/geometry.hpp"
#include "sdirac/types.hpp"

namespace sdirac {

enum class Regime { propagating, evanescent };

struct ModeParams {
    Background bg;
    double m = 0.0;
    double omega = 0.0;
    double lambda = 0.0;
    HalfInteger k;

    /// throws DomainError for m < 0, non-finite input or |omega| = m
    void validate() const;
    Regime regime() const;
    double epsilon() const { return sign_of(omega); }
};

using Mat2 = Eigen::Matrix2cd;

/// coefficient matrix B(u) of dX/du = B(u) X
Mat2 radial_generator(double u, const ModeParams& p);

SpinorPair radial_rhs(double u, const SpinorPair& X, const ModeParams& p);

struct RadialSample {
    double u;
    SpinorPair X;
};

struct RadialSolution {
    ModeParams params;
    double u_start = 0.0, u_end = 0.0;
    std::vector<RadialSample> samples;
    double conserved_defect = 0.0;
    double log_scale = 0.0;  // total log of the factors removed by renormalization (decaying branch)
    int steps = 0;
    int rejected = 0;
};

/// start point near the horizon where the neglected potential is below tol*1e-2 (floor -200M)
double horizon_start(const ModeParams& p, double tol);

/// adaptive fourth-order Magnus stepper for the 2x2 fundamental matrix.
/// Each step is an exact exponential of an su(1,1) element, so |X+|^2 - |X-|^2 is kept to rounding.
class MagnusStepper {
public:
    MagnusStepper(const ModeParams& p, double tol, double u0, const Mat2& F0);

    /// advances to u_target (either direction); on_step is called after every accepted step
    void advance_to(double u_target, const std::function<void(double, const Mat2&)>& on_step = {});

    double u() const { return u_; }
    const Mat2& state() const { return F_; }
    /// keep the state norm below `threshold`, accumulating the removed factor in log_scale()
    void set_renormalization(double threshold) { renorm_ = threshold; }
    double log_scale() const { return log_scale_; }
    /// sum of accepted local error estimates, relative to the state norm
    double accumulated_error() const { return err_acc_; }
    int steps() const { return steps_; }
    int rejected() const { return rejected_; }

private:
    Mat2 step_matrix(double u, double h) const;

    ModeParams p_;
    double tol_;
    double u_;
    double h_;
    Mat2 F_;
    double err_acc_ = 0.0;
    double renorm_ = 0.0;
    double log_scale_ = 0.0;
    int steps_ = 0, rejected_ = 0;
};

/// horizon-normalized solution of branch a (1 or 2), propagating regime
RadialSolution integrate_from_horizon(const ModeParams& p, int a, double u_min, double u_max, double tol);

/// exponentially decaying solution at infinity, integrated back to u_min (evanescent regime)
RadialSolution integrate_to_horizon_decaying(const ModeParams& p, double u_start, double u_min, double tol);

/// default start point of the decaying branch
double decaying_start(const ModeParams& p);

/// horizon data f0 of the decaying branch, normalized to |f0| = 1 with f0+ real and >= 0
SpinorPair decaying_horizon_data(const ModeParams& p, double tol, double u_start = 0.0);

}  // namespace sdirac
