#include <doctest.h>

#include <cmath>

#include "sdirac/asymptotics.hpp"

using namespace sdirac;

namespace {

ModeParams mode(double omega, double m, double lambda, double M = 1.0) {
    return {Background(M), m, omega, lambda, HalfInteger::from_twice(1)};
}

cplx pinner(const SpinorPair& a, const SpinorPair& b) {
    return std::conj(a.xplus) * b.xplus - std::conj(a.xminus) * b.xminus;
}

}  // namespace

TEST_CASE("phase examples") {
    CHECK(phase(mode(2, 0, 1), 10) == doctest::Approx(20.0).epsilon(1e-15));
    CHECK(phase(mode(-2, 0, 1), 10) == doctest::Approx(-20.0).epsilon(1e-15));
    const double e = std::exp(1.0);
    CHECK(phase(mode(2, 1, 1), e) == doctest::Approx(std::sqrt(3.0) * e + 1 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(phase(mode(2, 1, 1), 0.0), DomainError);
}

TEST_CASE("infinity matrix") {
    CHECK((infinity_matrix(mode(2, 0, 1)) - Eigen::Matrix2d::Identity()).norm() == 0.0);
    const Eigen::Matrix2d A = infinity_matrix(mode(1.25 * 0.4, 0.4, 1));
    const double th = -std::log(9.0) / 4;
    CHECK(A(0, 0) == doctest::Approx(std::cosh(th)).epsilon(1e-14));
    CHECK(A(0, 1) == doctest::Approx(std::sinh(th)).epsilon(1e-14));
    for (double w : {0.51, 0.75, -0.75, 3.0, -20.0}) CHECK(std::abs(infinity_matrix(mode(w, 0.5, 1)).determinant() - 1.0) < 1e-12);
    CHECK_THROWS_AS(infinity_matrix(mode(0.3, 0.5, 1)), RegimeError);
}

TEST_CASE("free wave transmits unchanged") {
    for (double w : {0.8, -2.5}) {
        const auto t1 = extract_transmission(mode(w, 0, 0), 1);
        REQUIRE(t1.finf);
        CHECK((*t1.finf - SpinorPair{1.0, 0.0}).norm() < 1e-10);
        const auto t2 = extract_transmission(mode(w, 0, 0), 2);
        CHECK((*t2.finf - SpinorPair{0.0, 1.0}).norm() < 1e-10);
    }
}

TEST_CASE("generic propagating identities") {
    for (double w : {0.75, -0.75, 1.0, 2.5}) {
        for (double lambda : {1.0, 3.0}) {
            const auto p = mode(w, 0.5, lambda);
            const auto pr = extract_pair(p);
            REQUIRE(pr[0].finf);
            REQUIRE(pr[1].finf);
            CHECK(pr[0].converged);
            const SpinorPair f1 = *pr[0].finf, f2 = *pr[1].finf;
            const double n = f1.norm();
            CHECK(std::abs(f1.pseudo_norm() - 1.0) < 1e-6 * n * n);
            CHECK(std::abs(f2.pseudo_norm() + 1.0) < 1e-6 * n * n);
            CHECK(std::abs(f1.norm() - f2.norm()) < 1e-6 * n);
            CHECK(n >= 1 - 1e-8);
            CHECK(std::abs(pinner(f1, f2)) < 1e-6 * n * n);
            CHECK(pr[0].err_estimate < 1e-8);
            // horizon data are the canonical basis vectors
            CHECK((pr[0].f0 - SpinorPair{1.0, 0.0}).norm() == 0.0);
            CHECK((pr[1].f0 - SpinorPair{0.0, 1.0}).norm() == 0.0);
        }
    }
}

TEST_CASE("pair and single-branch extraction agree") {
    const auto p = mode(0.75, 0.5, 1.0);
    const auto pr = extract_pair(p);
    const auto t2 = extract_transmission(p, 2, 1e-8);
    CHECK((*pr[1].finf - *t2.finf).norm() < 1e-12);
    CHECK_THROWS_AS(extract_transmission(p, 0), DomainError);
}

TEST_CASE("extrapolation is insensitive to the base radius") {
    for (double w : {0.75, 2.0}) {
        const auto p = mode(w, 0.5, 3.0);
        ExtractOptions o;
        const auto a = extract_transmission(p, 1, o);
        o.u_base = 2 * a.u_base;
        const auto b = extract_transmission(p, 1, o);
        const double d = (*a.finf - *b.finf).norm() / a.finf->norm();
        CHECK(d < 3 * std::max({a.err_estimate, b.err_estimate, 1e-12}));
    }
}

TEST_CASE("raw envelope at large radius approaches the extrapolated value") {
    const auto p = mode(0.75, 0.5, 1.0);
    const double tol = 1e-12;
    const auto t = extract_transmission(p, 1);
    for (double u : {2e3, 8e3}) {
        const auto sol = integrate_from_horizon(p, 1, horizon_start(p, tol), u, tol);
        const SpinorPair X = sol.samples.back().X;
        const Eigen::Vector2cd e = envelope_map(p, u) * Eigen::Vector2cd(X.xplus, X.xminus);
        const double d = (SpinorPair{e[0], e[1]} - *t.finf).norm() / t.finf->norm();
        CHECK(d < 10.0 / u);
        // the pseudo-norm survives the envelope map to rounding
        CHECK(std::abs(std::norm(e[0]) - std::norm(e[1]) - 1.0) < 1e-9);
    }
}

TEST_CASE("above-barrier reflection agrees with extraction where both resolve it") {
    for (double lambda : {1.0, 3.0}) {
        for (double w : {0.75, 1.0, 1.5, -1.25}) {
            const auto p = mode(w, 0.5, lambda);
            const auto r = above_barrier_reflection(p);
            const auto t = extract_transmission(p, 1);
            CHECK(std::abs(r.magnitude - std::abs(t.finf->xminus)) < 1e-8 * t.finf->norm());
            CHECK(r.conserved_defect < 1e-15);
            CHECK(std::abs(r.excess - (t.finf->norm() - 1)) < 2e-8 * t.finf->norm());
        }
    }
    CHECK(above_barrier_reflection(mode(1.7, 0, 0)).magnitude == 0.0);
    // lambda = 10 at w = 0.75 tunnels through the barrier
    CHECK_THROWS_AS(above_barrier_reflection(mode(0.75, 0.5, 10.0)), RegimeError);
    CHECK_THROWS_AS(above_barrier_reflection(mode(0.3, 0.5, 1.0)), RegimeError);
}

TEST_CASE("frequency splitting and growth in lambda") {
    for (double lambda : {1.0, 3.0}) {
        const auto lo = above_barrier_reflection(mode(2.5, 0.5, lambda));
        const auto hi = above_barrier_reflection(mode(10.0, 0.5, lambda));
        // resolved at the lower frequency, and the upper bound at the higher one stays below it
        CHECK(lo.magnitude > 3 * lo.err_estimate);
        CHECK(hi.magnitude + hi.err_estimate < lo.magnitude - lo.err_estimate);
        CHECK(hi.excess < lo.excess);
    }
    double prev = 0;
    for (double lambda : {1.0, 3.0, 6.0, 10.0}) {
        const double n = extract_transmission(mode(0.75, 0.5, lambda), 1).finf->norm();
        CHECK(n > prev * (1 + 1e-6));
        prev = n;
    }
}

TEST_CASE("evanescent regime") {
    const auto p = mode(0.3, 0.5, 1.0);
    CHECK_THROWS_AS(extract_transmission(p, 1), RegimeError);
    const auto t = decaying_transmission(p);
    CHECK(!t.finf);
    CHECK(t.regime == Regime::evanescent);
    CHECK(std::abs(std::abs(t.f0.xplus) - std::abs(t.f0.xminus)) < 1e-6);
    CHECK(t.err_estimate < 1e-6);
    CHECK_THROWS_AS(decaying_transmission(mode(0.75, 0.5, 1.0)), RegimeError);
}
