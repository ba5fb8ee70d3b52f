#include "sdirac/geometry.hpp"

#include <cmath>
#include <string>

#include "sdirac/types.hpp"

namespace sdirac {

Background::Background(double mass) : M(mass) {
    if (!(M > 0) || !std::isfinite(M)) throw DomainError("black-hole mass must be positive, got " + std::to_string(M));
}

double delta(double r, const Background& bg) {
    if (!(r > bg.r1())) throw DomainError("radius must exceed 2M");
    return r * (r - bg.r1());
}

double regge_wheeler_u(double r, const Background& bg) {
    if (!(r > bg.r1())) throw DomainError("radius must exceed 2M");
    const double twoM = bg.r1();
    const double q = (r - 2.0 * twoM) / twoM;  // s - 1
    const double ls = std::abs(q) < 0.5 ? std::log1p(q) : std::log((r - twoM) / twoM);
    return r + twoM * ls;
}

namespace {

// solves s + ln s = y for t = ln s
double solve_log_offset(double y) {
    double t = y < 1.0 ? y : std::log(y);
    for (int it = 0; it < 100; ++it) {
        const double e = std::exp(t);
        const double dt = (e + t - y) / (e + 1.0);
        t -= dt;
        if (std::abs(dt) <= 1e-15 * std::max(1.0, std::abs(t))) return t;
    }
    throw ConvergenceError("radius_from_u: Newton iteration did not converge", 0.0);
}

}  // namespace

double horizon_offset_from_u(double u, const Background& bg) {
    const double twoM = bg.r1();
    return twoM * std::exp(solve_log_offset(u / twoM - 1.0));
}

double radius_from_u(double u, const Background& bg) {
    if (!std::isfinite(u)) throw DomainError("u must be finite");
    return bg.r1() + horizon_offset_from_u(u, bg);
}

double radial_potential(double u, const Background& bg) {
    const double d = horizon_offset_from_u(u, bg);
    const double r = bg.r1() + d;
    return std::sqrt(r * d) / (r * r);
}

}  // namespace sdirac
