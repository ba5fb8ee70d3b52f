#include "sdirac/asymptotics.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "sdirac/quadrature.hpp"

namespace sdirac {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;

void require_propagating(const ModeParams& p) {
    if (p.regime() != Regime::propagating) throw RegimeError("asymptotics at infinity require |omega| > m");
}

double ktilde(const ModeParams& p) { return std::sqrt((std::abs(p.omega) - p.m) * (std::abs(p.omega) + p.m)); }

struct LocalFrame {
    double phi1;  // diagonal rate after the constant transformation A
    cplx o;       // upper off-diagonal coupling
};

LocalFrame local_frame(const ModeParams& p, double u) {
    const double d = horizon_offset_from_u(u, p.bg);
    const double r = p.bg.r1() + d;
    const double rho = std::sqrt(d / r);
    const double one_minus_rho = (p.bg.r1() / r) / (1.0 + rho);
    const double V = std::sqrt(r * d) / (r * r);
    const double kt = ktilde(p);
    const double w = std::abs(p.omega);
    LocalFrame f;
    f.phi1 = p.epsilon() * (kt * kt + p.m * p.m * one_minus_rho) / kt;
    f.o = cplx(p.lambda * V, w * p.m / kt * one_minus_rho);
    return f;
}

// d/du of the corrected phase minus d/du of Phi
double phase_defect(const ModeParams& p, double s) {
    const double d = horizon_offset_from_u(s, p.bg);
    const double r = p.bg.r1() + d;
    const double rho = std::sqrt(d / r);
    const double one_minus_rho = (p.bg.r1() / r) / (1.0 + rho);
    const double kt = ktilde(p);
    const LocalFrame f = local_frame(p, s);
    return p.epsilon() * p.m * p.m / kt * (one_minus_rho - p.bg.M / s) - std::norm(f.o) / (2.0 * f.phi1);
}

struct U11Coords {
    double chi = 0, arga = 0;
    cplx beta;
};

double nearest_branch(double v, double ref, double period) { return v - period * std::round((v - ref) / period); }

// U = e^{i chi} [[alpha, beta], [conj beta, conj alpha]], |alpha|^2 - |beta|^2 = 1
U11Coords to_coords(const Mat2& U, const U11Coords* prev) {
    U11Coords c;
    // U00 / conj(U11) = e^{2i chi}; avoids the cancellation in det U when |beta| is large
    c.chi = 0.5 * std::arg(U(0, 0) * U(1, 1));
    if (prev) c.chi = nearest_branch(c.chi, prev->chi, kPi);
    const cplx ph = std::exp(-I * c.chi);
    c.arga = std::arg(ph * U(0, 0));
    if (prev) c.arga = nearest_branch(c.arga, prev->arga, 2.0 * kPi);
    c.beta = ph * U(0, 1);
    return c;
}

Mat2 from_coords(const U11Coords& c) {
    const cplx alpha = std::sqrt(1.0 + std::norm(c.beta)) * std::exp(I * c.arga);
    Mat2 V;
    V << alpha, c.beta, std::conj(c.beta), std::conj(alpha);
    return std::exp(I * c.chi) * V;
}

U11Coords combine(double a, const U11Coords& x, double b, const U11Coords& y, double c, const U11Coords& z) {
    return {a * x.chi + b * y.chi + c * z.chi, a * x.arga + b * y.arga + c * z.arga, a * x.beta + b * y.beta + c * z.beta};
}

SpinorPair col(const Mat2& F, int c) { return {F(0, c), F(1, c)}; }

}  // namespace

double phase(const ModeParams& p, double u) {
    require_propagating(p);
    if (!(u > 0)) throw DomainError("phase requires u > 0");
    const double kt = ktilde(p);
    return p.epsilon() * (kt * u + p.bg.M * p.m * p.m / kt * std::log(u));
}

Eigen::Matrix2d infinity_matrix(const ModeParams& p) {
    require_propagating(p);
    const double T = 0.25 * std::log(std::abs((p.omega - p.m) / (p.omega + p.m)));
    Eigen::Matrix2d A;
    A << std::cosh(T), std::sinh(T), std::sinh(T), std::cosh(T);
    return A;
}

double corrected_phase(const ModeParams& p, double u) {
    const double base = phase(p, u);
    boost::math::quadrature::exp_sinh<double> integrator;
    const double tail = integrator.integrate([&](double s) { return phase_defect(p, s); }, u,
                                             std::numeric_limits<double>::infinity(), 1e-11);
    return base - tail;
}

Mat2 envelope_map(const ModeParams& p, double u) {
    require_propagating(p);
    const Eigen::Matrix2d A = infinity_matrix(p);
    Mat2 Ainv;
    Ainv << A(0, 0), -A(0, 1), -A(1, 0), A(1, 1);
    const LocalFrame f = local_frame(p, u);
    const cplx pc = f.o / (2.0 * I * f.phi1);
    const double ap = std::abs(pc);
    const double shs = ap < 1e-4 ? 1.0 + ap * ap / 6.0 : std::sinh(ap) / ap;
    Mat2 expmP;
    expmP << std::cosh(ap), -pc * shs, -std::conj(pc) * shs, std::cosh(ap);
    const double Ph = corrected_phase(p, u);
    Mat2 D = Mat2::Zero();
    D(0, 0) = std::exp(I * Ph);
    D(1, 1) = std::exp(-I * Ph);
    return D * expmP * Ainv;
}

std::array<Transmission, 2> extract_pair(const ModeParams& p, const ExtractOptions& opt) {
    require_propagating(p);
    const double kt = ktilde(p);
    double ub = opt.u_base > 0 ? opt.u_base : std::max(200.0 * p.bg.M, 50.0 / kt);
    const double u_min = horizon_start(p, opt.ode_tol);
    Mat2 F0 = Mat2::Zero();
    F0(0, 0) = std::exp(-I * p.omega * u_min);
    F0(1, 1) = std::exp(I * p.omega * u_min);
    MagnusStepper st(p, opt.ode_tol, u_min, F0);
    auto envelope = [&](double u) -> Mat2 {
        st.advance_to(u);
        return envelope_map(p, u) * st.state();
    };

    // samples at ub/2, ub, 2ub, 4ub; the extrapolation from the lower three serves as a second error probe
    Mat2 E[4] = {envelope(0.5 * ub), envelope(ub), envelope(2 * ub), envelope(4 * ub)};
    auto extrapolate = [](const Mat2& a, const Mat2& b, const Mat2& c, Mat2* two_point) {
        const U11Coords c1 = to_coords(a, nullptr);
        const U11Coords c2 = to_coords(b, &c1);
        const U11Coords c4 = to_coords(c, &c2);
        if (two_point) *two_point = from_coords(combine(2.0, c4, -1.0, c2, 0.0, c1));
        return from_coords(combine(8.0 / 3.0, c4, -2.0, c2, 1.0 / 3.0, c1));
    };
    Mat2 prev = extrapolate(E[0], E[1], E[2], nullptr);
    Mat2 best;
    double best_err = std::numeric_limits<double>::infinity(), best_ub = ub;
    for (int attempt = 0;; ++attempt) {
        Mat2 R2;
        const Mat2 R3 = extrapolate(E[1], E[2], E[3], &R2);
        const double err = std::max((R3 - R2).norm(), (R3 - prev).norm()) / R3.norm();
        if (err < best_err) {
            best_err = err;
            best = R3;
            best_ub = ub;
        }
        if (best_err < opt.tol || attempt >= opt.max_doublings) break;
        ub *= 2;
        prev = R3;
        E[1] = E[2];
        E[2] = E[3];
        E[3] = envelope(4 * ub);
    }

    std::array<Transmission, 2> out;
    for (int a = 1; a <= 2; ++a) {
        Transmission& t = out[a - 1];
        t.params = p;
        t.a = a;
        t.f0 = a == 1 ? SpinorPair{1.0, 0.0} : SpinorPair{0.0, 1.0};
        t.finf = col(best, a - 1);
        t.regime = Regime::propagating;
        t.err_estimate = best_err;
        t.u_base = best_ub;
        t.converged = best_err < opt.tol;
    }
    return out;
}

Transmission extract_transmission(const ModeParams& p, int a, const ExtractOptions& opt) {
    if (a != 1 && a != 2) throw DomainError("branch index must be 1 or 2");
    return extract_pair(p, opt)[a - 1];
}

Transmission extract_transmission(const ModeParams& p, int a, double tol) {
    ExtractOptions opt;
    opt.tol = tol;
    return extract_transmission(p, a, opt);
}

Transmission decaying_transmission(const ModeParams& p, double tol) {
    if (p.regime() != Regime::evanescent) throw RegimeError("decaying branch requires |omega| < m");
    Transmission t;
    t.params = p;
    t.a = 1;
    t.regime = Regime::evanescent;
    const double u0 = decaying_start(p);
    t.f0 = decaying_horizon_data(p, tol, u0);
    t.err_estimate = (t.f0 - decaying_horizon_data(p, tol, 2.0 * u0)).norm();
    t.u_base = u0;
    t.converged = true;
    return t;
}

}  // namespace sdirac

namespace sdirac {

namespace {

using ld = long double;
using lcplx = std::complex<long double>;

// adiabatic frame of the radial system: X = D(xi) exp(eta sigma_y) diag(e^{-i Theta}, e^{i Theta}) Y
struct AdiabaticFrame {
    double theta_rate;  // Theta'
    cplx coupling;      // Y-' = coupling e^{-2i Theta} Y+
};

AdiabaticFrame adiabatic_frame(const ModeParams& p, double u) {
    const double M = p.bg.M, m = p.m, lam = p.lambda, w = p.omega;
    const double d = horizon_offset_from_u(u, p.bg);
    const double r = p.bg.r1() + d;
    const double f = d / r;
    const double L = lam * lam / (r * r) + m * m;
    const double b2 = f * L;
    const double phi2 = w * w - b2;
    if (!(phi2 > 0)) throw RegimeError("turning point: frequency does not exceed the potential barrier");
    const double phi = std::sqrt(phi2);
    const double b = std::sqrt(b2);
    const double db2_dr = 2 * M / (r * r) * L - f * 2 * lam * lam / (r * r * r);
    const double bp = b > 0 ? f * db2_dr / (2 * b) : 0.0;
    const double etap = w * bp / (2 * phi2);
    const double q = lam * lam + m * m * r * r;
    const double xip = q > 0 ? f * lam * m / q : 0.0;
    AdiabaticFrame a;
    a.theta_rate = sign_of(w) * phi - 0.5 * xip * std::abs(w) / phi;
    a.coupling = cplx(0.5 * xip * sign_of(w) * b / phi, -etap);
    return a;
}

struct PanelRule {
    std::vector<ld> x, w;
    std::vector<std::vector<ld>> S;  // S[i][j]: integral from -1 to x_i of the interpolant through node j
};

const PanelRule& panel_rule() {
    static const PanelRule rule = [] {
        constexpr int n = 20;
        const GaussRule& g = gauss_legendre(n);
        PanelRule pr;
        pr.x.assign(g.x.begin(), g.x.end());
        pr.w.assign(g.w.begin(), g.w.end());
        // Legendre values P_0..P_n at every node
        std::vector<std::vector<ld>> P(n, std::vector<ld>(n + 1));
        for (int i = 0; i < n; ++i) {
            const ld x = pr.x[i];
            P[i][0] = 1;
            P[i][1] = x;
            for (int j = 1; j < n; ++j) P[i][j + 1] = ((2 * j + 1) * x * P[i][j] - j * P[i][j - 1]) / (j + 1);
        }
        pr.S.assign(n, std::vector<ld>(n, 0));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                ld s = 0;
                for (int l = 0; l < n; ++l) {
                    const ld ip = l == 0 ? pr.x[i] + 1 : (P[i][l + 1] - P[i][l - 1]) / (2 * l + 1);
                    s += ip * (2 * l + 1) / 2 * P[j][l];
                }
                pr.S[i][j] = s * pr.w[j];
            }
        }
        return pr;
    }();
    return rule;
}

}  // namespace

Reflection above_barrier_reflection(const ModeParams& p, double u_far) {
    p.validate();
    require_propagating(p);
    const double M = p.bg.M;
    if (u_far <= 0) u_far = 2000.0 * M * std::max(1.0, 1.0 / ktilde(p));
    const double u_min = horizon_start(p, 1e-18);
    const double h_max = std::min(M, 1.0 / std::abs(p.omega));
    const PanelRule& pr = panel_rule();
    const int n = static_cast<int>(pr.x.size());

    // branch 1 starts as (e^{-i w u}, 0); only |Y-| matters, so the frame phases at u_min are dropped
    lcplx yp = 1, ym = 0;
    ld theta = 0;
    Reflection out;
    out.params = p;

    std::vector<lcplx> kp(n), km(n), Yp(n), Ym(n);
    std::vector<ld> th(n), rate(n);
    std::vector<cplx> g(n);

    auto tail = [&](double U, ld thU, lcplx ypU, lcplx ymU) {
        const AdiabaticFrame fU = adiabatic_frame(p, U);
        auto qf = [&](double u) {
            const AdiabaticFrame f = adiabatic_frame(p, u);
            return f.coupling / (2.0 * I * f.theta_rate);
        };
        const double du = 1e-3 * U;
        const cplx dq = (qf(U + du) - qf(U - du)) / (2 * du);
        const cplx t = qf(U) + dq / (2.0 * I * fU.theta_rate);
        const lcplx e = std::exp(lcplx(0, -2) * thU);
        return ymU + ypU * e * lcplx(t.real(), t.imag());
    };

    double u = u_min;
    ld defect = 0;
    lcplx est_half = 0;
    bool have_half = false;
    while (u < u_far) {
        const double h = std::min(h_max, u_far - u);
        const ld half = ld(h) / 2, mid = ld(u) + half;
        for (int i = 0; i < n; ++i) {
            const AdiabaticFrame f = adiabatic_frame(p, static_cast<double>(mid + half * pr.x[i]));
            rate[i] = f.theta_rate;
            g[i] = f.coupling;
        }
        for (int i = 0; i < n; ++i) {
            ld s = 0;
            for (int j = 0; j < n; ++j) s += pr.S[i][j] * rate[j];
            th[i] = theta + half * s;
            const lcplx e = std::exp(lcplx(0, -2) * th[i]);
            km[i] = lcplx(g[i].real(), g[i].imag()) * e;
            kp[i] = std::conj(km[i]);
        }
        std::fill(Yp.begin(), Yp.end(), yp);
        std::fill(Ym.begin(), Ym.end(), ym);
        for (int it = 0; it < 60; ++it) {
            ld change = 0;
            for (int i = 0; i < n; ++i) {
                lcplx sp = 0, sm = 0;
                for (int j = 0; j < n; ++j) {
                    sp += pr.S[i][j] * kp[j] * Ym[j];
                    sm += pr.S[i][j] * km[j] * Yp[j];
                }
                const lcplx np = yp + half * sp, nm = ym + half * sm;
                change = std::max(change, std::abs(np - Yp[i]) + std::abs(nm - Ym[i]));
                Yp[i] = np;
                Ym[i] = nm;
            }
            if (change < 1e-19L) break;
        }
        lcplx sp = 0, sm = 0;
        ld st = 0;
        for (int j = 0; j < n; ++j) {
            sp += pr.w[j] * kp[j] * Ym[j];
            sm += pr.w[j] * km[j] * Yp[j];
            st += pr.w[j] * rate[j];
        }
        yp += half * sp;
        ym += half * sm;
        theta += half * st;
        u += h;
        ++out.panels;
        defect = std::max(defect, std::abs(std::norm(yp) - std::norm(ym) - 1));
        if (!have_half && u >= 0.5 * u_far) {
            est_half = tail(u, theta, yp, ym);
            have_half = true;
        }
    }
    const lcplx est = tail(u, theta, yp, ym);
    out.magnitude = static_cast<double>(std::abs(est));
    out.err_estimate = static_cast<double>(std::abs(est - est_half)) + 1e-17;
    const ld r2 = std::norm(est);
    // ||f||^2 = 1 + 2|f-|^2
    out.excess = static_cast<double>(2 * r2 / (std::sqrt(1 + 2 * r2) + 1));
    out.conserved_defect = static_cast<double>(defect);
    out.u_far = u_far;
    return out;
}

}  // namespace sdirac
