#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "sdirac/angular.hpp"
#include "sdirac/operators.hpp"

using namespace sdirac;

namespace {

ModeParams mode(double omega, double m, double lambda) {
    return {Background(1.0), m, omega, lambda, HalfInteger::from_twice(1)};
}

const SpinorPair e1{1.0, 0.0}, e2{0.0, 1.0};

double max_entry(const Mat2& A) { return A.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("hyperbolic parametrization round trip") {
    const auto h0 = params_from_f(e1, e2);
    CHECK(h0.theta == 0.0);
    CHECK(h0.beta == 0.0);
    CHECK(h0.gamma == 0.0);
    CHECK(h0.delta == 0.0);
    const HyperbolicParams h{0.7, 0.3, -1.1, 2.0};
    const auto [f1, f2] = f_from_params(h);
    CHECK(std::abs(f1.xplus - std::polar(std::cosh(0.7), 0.3)) < 1e-15);
    CHECK(std::abs(f2.xminus - std::polar(std::cosh(0.7), -1.1 + 2.0)) < 1e-15);
    const auto g = params_from_f(f1, f2);
    const auto [g1, g2] = f_from_params(g);
    CHECK((g1 - f1).norm() < 1e-12);
    CHECK((g2 - f2).norm() < 1e-12);
    CHECK(g.theta == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("extracted data obey the product relations") {
    const auto p = mode(0.75, 0.5, 3.0);
    const auto pr = extract_pair(p);
    const SpinorPair f1 = *pr[0].finf, f2 = *pr[1].finf;
    const auto h = params_from_f(f1, f2);
    const double n2 = f1.norm2();
    CHECK(std::abs(std::cosh(2 * h.theta) - n2) < 1e-6 * n2);
    CHECK(std::abs(inner(f1, f2) - std::polar(std::sinh(2 * h.theta), h.delta)) < 1e-6 * n2);
    const auto [g1, g2] = f_from_params(h);
    CHECK((g1 - f1).norm() < 1e-6 * f1.norm());
    CHECK((g2 - f2).norm() < 1e-6 * f1.norm());
}

TEST_CASE("closed-form scattering matrix") {
    const auto T0 = scattering_matrix_closed(e1, e2);
    CHECK((T0.t - 0.5 * Mat2::Identity()).norm() == 0.0);
    for (double lambda : {1.0, 6.0}) {
        const auto pr = extract_pair(mode(0.6, 0.5, lambda));
        const SpinorPair f1 = *pr[0].finf, f2 = *pr[1].finf;
        const auto T = scattering_matrix_closed(f1, f2);
        CHECK(T.t(0, 0) == cplx(0.5, 0.0));
        CHECK(T.t(1, 1) == cplx(0.5, 0.0));
        CHECK(T.t(1, 0) == std::conj(T.t(0, 1)));
        Eigen::SelfAdjointEigenSolver<Mat2> es(T.t);
        const double th = params_from_f(f1, f2).theta;
        CHECK(es.eigenvalues()[0] == doctest::Approx((1 - std::tanh(th)) / 2).epsilon(1e-10));
        CHECK(es.eigenvalues()[1] == doctest::Approx((1 + std::tanh(th)) / 2).epsilon(1e-10));
        CHECK(es.eigenvalues()[0] > 0.0);
        CHECK(es.eigenvalues()[1] < 1.0);
    }
}

TEST_CASE("quadrature scattering matrix matches the closed form") {
    const auto Q0 = scattering_matrix_quadrature(e1, e2);
    CHECK(max_entry(Q0.t - 0.5 * Mat2::Identity()) < 1e-15);
    // the peak of the alpha integrand narrows like 1/|f|^2; moderate norms only
    const double cases[][2] = {{0.6, 1.0}, {0.6, 3.0}, {0.75, 1.0}, {0.75, 3.0}, {1.0, 6.0}, {-2.0, 3.0}, {-0.6, 3.0}};
    for (const auto& c : cases) {
        {
            const auto pr = extract_pair(mode(c[0], 0.5, c[1]));
            const SpinorPair f1 = *pr[0].finf, f2 = *pr[1].finf;
            const auto C = scattering_matrix_closed(f1, f2);
            const auto Q = scattering_matrix_quadrature_adaptive(f1, f2);
            CHECK(max_entry(Q.T.t - C.t) < 1e-8);
            const auto Q1 = scattering_matrix_quadrature(f1, f2, Q.nodes);
            const auto Q2 = scattering_matrix_quadrature(f1, f2, 2 * Q.nodes);
            CHECK(max_entry(Q2.t - Q1.t) < 1e-10);
        }
    }
}

TEST_CASE("tabrel residual") {
    CHECK(lemma_tab_residual(scattering_matrix_closed(e1, e2), e1, e2) < 1e-16);
    const auto pr = extract_pair(mode(0.75, 0.5, 1.0));
    const SpinorPair f1 = *pr[0].finf, f2 = *pr[1].finf;
    const auto T = scattering_matrix_closed(f1, f2);
    CHECK(lemma_tab_residual(T, f1, f2) < 1e-6);
    CHECK(lemma_tab_residual(scattering_matrix_quadrature_adaptive(f1, f2).T, f1, f2) < 1e-6);
    // scaling f1 breaks |f+|^2 - |f-|^2 = 1
    const SpinorPair g1 = (1 + 1e-3) * f1;
    CHECK(lemma_tab_residual(T, g1, f2) > 1e-4);
    CHECK(lemma_tab_residual(scattering_matrix_closed(g1, f2), g1, f2) > 1e-4);
}

TEST_CASE("spectrum identities on propagating points") {
    for (double w : {0.55, 0.75, 1.5, 5.0, -0.55, -0.75, -5.0}) {
        for (double lambda : {1.0, 3.0, 6.0}) {
            const auto s = spectrum_point(mode(w, 0.5, lambda));
            const double eps = w > 0 ? 1.0 : -1.0;
            CHECK(s.converged);
            CHECK(std::abs(s.mu_plus + s.mu_minus - 2 * eps) < 1e-12);
            CHECK(std::abs(s.mu_plus * s.mu_minus + s.nu_plus * s.nu_minus) < 1e-10);
            CHECK(std::abs(s.mu_plus) < 2.0);
            CHECK(std::abs(s.mu_minus) < 2.0);
            CHECK(std::abs(s.nu_plus) <= 1.0);
            CHECK(s.nu_plus == -s.nu_minus);
            if (w > 0) {
                CHECK(s.mu_plus >= 1.0);
                CHECK(s.mu_minus > 0.0);
                CHECK(s.mu_minus <= 1.0);
            } else {
                CHECK(s.mu_plus < 0.0);
                CHECK(s.mu_plus >= -1.0);
                CHECK(s.mu_minus <= -1.0);
            }
            REQUIRE(s.fnorm);
            CHECK(*s.fnorm >= 1.0);
        }
    }
}

TEST_CASE("free wave and evanescent points") {
    for (double w : {1.0, -3.0}) {
        const auto s = spectrum_point(mode(w, 0.0, 0.0));
        const double eps = w > 0 ? 1.0 : -1.0;
        CHECK(s.mu_plus == eps);
        CHECK(s.mu_minus == eps);
        CHECK(s.nu_plus == 1.0);
        CHECK(s.nu_minus == -1.0);
    }
    for (double w : {0.0, 0.2, -0.49}) {
        const auto s = spectrum_point(mode(w, 0.5, 3.0));
        CHECK(s.regime == Regime::evanescent);
        CHECK(!s.fnorm);
        CHECK(s.mu_plus == 0.0);
        CHECK(s.mu_minus == 0.0);
        CHECK(s.nu_plus == 0.0);
        CHECK(s.nu_minus == 0.0);
    }
    CHECK_THROWS_AS(spectrum_point(mode(0.5, 0.5, 1.0)), DomainError);
}

TEST_CASE("spectrum depends on k only through lambda") {
    ModeParams a = mode(0.75, 0.5, 2.0), b = a;
    b.k = HalfInteger::from_twice(-3);
    const auto sa = spectrum_point(a), sb = spectrum_point(b);
    CHECK(sa.mu_plus == sb.mu_plus);
    CHECK(sa.nu_plus == sb.nu_plus);
    // numerically computed lambda values for k = 1/2 and k = 3/2 coincide at 2
    const double l1 = angular_lambda(HalfInteger::from_twice(1), 2);
    const double l3 = angular_lambda(HalfInteger::from_twice(3), 1);
    ModeParams c = mode(0.75, 0.5, l1), d = mode(0.75, 0.5, l3);
    d.k = HalfInteger::from_twice(3);
    CHECK(std::abs(spectrum_point(c).mu_plus - spectrum_point(d).mu_plus) < 1e-12);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(params_from_f(SpinorPair{0.5, 0.0}, e2), DomainError);
    CHECK_THROWS_AS(params_from_f(e1, SpinorPair{1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(scattering_matrix_quadrature(e1, e2, 2), DomainError);
    CHECK_THROWS_AS(params_from_f(SpinorPair{std::nan(""), 0.0}, e2), DomainError);
}
