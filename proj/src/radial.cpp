#include "sdirac/radial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sdirac {

namespace {

constexpr cplx I{0.0, 1.0};

// exp of a traceless 2x2 matrix: Omega^2 = q*1
Mat2 expm_traceless(const Mat2& W) {
    const cplx q = W(0, 0) * W(0, 0) + W(0, 1) * W(1, 0);
    const cplx s = std::sqrt(q);
    cplx ch, shs;
    if (std::abs(s) < 1e-4) {
        ch = 1.0 + q / 2.0 + q * q / 24.0;
        shs = 1.0 + q / 6.0 + q * q / 120.0;
    } else {
        ch = std::cosh(s);
        shs = std::sinh(s) / s;
    }
    return ch * Mat2::Identity() + shs * W;
}

double fro(const Mat2& A) { return A.norm(); }

}  // namespace

void ModeParams::validate() const {
    if (!std::isfinite(m) || !std::isfinite(omega) || !std::isfinite(lambda)) throw DomainError("mode parameters must be finite");
    if (m < 0) throw DomainError("fermion mass must be non-negative");
    if (std::abs(omega) == m) throw DomainError("|omega| = m is excluded");
}

Regime ModeParams::regime() const {
    validate();
    return std::abs(omega) > m ? Regime::propagating : Regime::evanescent;
}

Mat2 radial_generator(double u, const ModeParams& p) {
    const double d = horizon_offset_from_u(u, p.bg);
    const double r = p.bg.r1() + d;
    const double V = std::sqrt(r * d) / (r * r);
    Mat2 B;
    B(0, 0) = -I * p.omega;
    B(1, 1) = I * p.omega;
    B(0, 1) = V * cplx(p.lambda, -p.m * r);
    B(1, 0) = V * cplx(p.lambda, p.m * r);
    return B;
}

SpinorPair radial_rhs(double u, const SpinorPair& X, const ModeParams& p) {
    const Mat2 B = radial_generator(u, p);
    return {B(0, 0) * X.xplus + B(0, 1) * X.xminus, B(1, 0) * X.xplus + B(1, 1) * X.xminus};
}

double horizon_start(const ModeParams& p, double tol) {
    const double M = p.bg.M;
    const double coupling = std::abs(p.lambda) + p.m * p.bg.r1();
    const double target = tol * 1e-2;
    const double floor = -200.0 * M;
    double u = 0.0;
    while (u > floor && radial_potential(u, p.bg) * coupling >= target) u -= 4.0 * M;
    return std::max(u, floor);
}

MagnusStepper::MagnusStepper(const ModeParams& p, double tol, double u0, const Mat2& F0)
    : p_(p), tol_(tol), u_(u0), F_(F0) {
    h_ = 0.5 / (std::abs(p.omega) + p.m + std::abs(p.lambda) / p.bg.M + 1.0 / p.bg.M);
}

Mat2 MagnusStepper::step_matrix(double u, double h) const {
    static const double c = std::sqrt(3.0) / 6.0;
    const Mat2 B1 = radial_generator(u + (0.5 - c) * h, p_);
    const Mat2 B2 = radial_generator(u + (0.5 + c) * h, p_);
    const Mat2 W = 0.5 * h * (B1 + B2) + (std::sqrt(3.0) / 12.0) * h * h * (B2 * B1 - B1 * B2);
    return expm_traceless(W);
}

void MagnusStepper::advance_to(double u_target, const std::function<void(double, const Mat2&)>& on_step) {
    const double dir = u_target >= u_ ? 1.0 : -1.0;
    double h = std::abs(h_);
    const double hmin = 1e-12 * std::max(1.0, std::abs(u_target));
    while (dir * (u_target - u_) > 0) {
        const double rest = std::abs(u_target - u_);
        const bool last = h >= rest;
        // step exactly to a representable u so no phase is lost to rounding of the coordinate
        const double u_next = last ? u_target : u_ + dir * h;
        const double hs = u_next - u_;
        const Mat2 full = step_matrix(u_, hs);
        const Mat2 half = step_matrix(u_ + 0.5 * hs, 0.5 * hs) * step_matrix(u_, 0.5 * hs);
        const double err = fro(half - full) / (15.0 * std::max(1.0, fro(half)));
        if (err <= tol_ || std::abs(hs) <= hmin) {
            F_ = half * F_;
            u_ = u_next;
            err_acc_ += err;
            ++steps_;
            if (renorm_ > 0) {
                const double n = fro(F_);
                if (n > renorm_) {
                    F_ /= n;
                    log_scale_ += std::log(n);
                }
            }
            if (on_step) on_step(u_, F_);
            const double fac = err > 0 ? 0.9 * std::pow(tol_ / err, 0.2) : 4.0;
            // a short final step says nothing about the next one
            if (!last || fac < 1.0) h = std::abs(hs) * std::clamp(fac, 0.2, 4.0);
        } else {
            ++rejected_;
            h = std::abs(hs) * std::clamp(0.9 * std::pow(tol_ / err, 0.2), 0.2, 0.9);
        }
        if (!std::isfinite(h) || h < hmin) throw ConvergenceError("radial integration: step size underflow", err);
    }
    h_ = h;
}

namespace {

SpinorPair column(const Mat2& F, int c) { return {F(0, c), F(1, c)}; }

}  // namespace

RadialSolution integrate_from_horizon(const ModeParams& p, int a, double u_min, double u_max, double tol) {
    if (p.regime() != Regime::propagating) throw RegimeError("integrate_from_horizon requires |omega| > m");
    if (a != 1 && a != 2) throw DomainError("branch index must be 1 or 2");
    if (!(u_max > u_min)) throw DomainError("u_max must exceed u_min");
    Mat2 F0 = Mat2::Zero();
    if (a == 1)
        F0(0, 0) = std::exp(-I * p.omega * u_min);
    else
        F0(1, 0) = std::exp(I * p.omega * u_min);

    RadialSolution sol;
    sol.params = p;
    sol.u_start = u_min;
    sol.u_end = u_max;
    const double pn0 = column(F0, 0).pseudo_norm();
    sol.samples.push_back({u_min, column(F0, 0)});
    MagnusStepper st(p, tol, u_min, F0);
    st.advance_to(u_max, [&](double u, const Mat2& F) {
        const SpinorPair X = column(F, 0);
        sol.samples.push_back({u, X});
        sol.conserved_defect = std::max(sol.conserved_defect, std::abs(X.pseudo_norm() - pn0));
    });
    sol.steps = st.steps();
    sol.rejected = st.rejected();
    return sol;
}

double decaying_start(const ModeParams& p) {
    const double kappa = std::sqrt((p.m - p.omega) * (p.m + p.omega));
    return std::max(200.0 * p.bg.M, 40.0 / kappa);
}

RadialSolution integrate_to_horizon_decaying(const ModeParams& p, double u_start, double u_min, double tol) {
    if (p.regime() != Regime::evanescent) throw RegimeError("decaying branch requires |omega| < m");
    if (!(u_start > u_min)) throw DomainError("u_start must exceed u_min");
    const double kappa = std::sqrt((p.m - p.omega) * (p.m + p.omega));
    // decaying eigenvector of the limit matrix [[-i w, -i m], [i m, i w]]
    Mat2 F0 = Mat2::Zero();
    F0(0, 0) = I * p.m;
    F0(1, 0) = cplx(kappa, -p.omega);
    F0 /= F0.col(0).norm();

    RadialSolution sol;
    sol.params = p;
    sol.u_start = u_start;
    sol.u_end = u_min;
    sol.samples.push_back({u_start, column(F0, 0)});
    MagnusStepper st(p, tol, u_start, F0);
    st.set_renormalization(1e10);
    st.advance_to(u_min, [&](double u, const Mat2& F) {
        const SpinorPair X = column(F, 0);
        // the pseudo-norm starts at zero; measure it relative to the current size
        sol.conserved_defect = std::max(sol.conserved_defect, std::abs(X.pseudo_norm()) / X.norm2());
        sol.samples.push_back({u, X});
    });
    sol.log_scale = st.log_scale();
    sol.steps = st.steps();
    sol.rejected = st.rejected();
    return sol;
}

SpinorPair decaying_horizon_data(const ModeParams& p, double tol, double u_start) {
    if (p.regime() != Regime::evanescent) throw RegimeError("decaying branch requires |omega| < m");
    const double u0 = u_start > 0 ? u_start : decaying_start(p);
    const double u_min = horizon_start(p, tol);
    const double kappa = std::sqrt((p.m - p.omega) * (p.m + p.omega));
    Mat2 F0 = Mat2::Zero();
    F0(0, 0) = I * p.m;
    F0(1, 0) = cplx(kappa, -p.omega);
    F0 /= F0.col(0).norm();
    MagnusStepper st(p, tol, u0, F0);
    st.set_renormalization(1e10);
    st.advance_to(u_min);
    const Mat2& F = st.state();
    SpinorPair f{std::exp(I * p.omega * u_min) * F(0, 0), std::exp(-I * p.omega * u_min) * F(1, 0)};
    const double nrm = f.norm();
    const cplx ph = std::abs(f.xplus) > 0 ? std::conj(f.xplus) / std::abs(f.xplus) : 1.0;
    return (ph / nrm) * f;
}

}  // namespace sdirac
