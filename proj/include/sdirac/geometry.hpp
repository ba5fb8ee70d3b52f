#pragma once

namespace sdirac {

struct Background {
    double M = 1.0;

    explicit Background(double mass = 1.0);
    double r1() const { return 2.0 * M; }
};

/// r^2 - 2Mr
double delta(double r, const Background& bg);

/// Regge-Wheeler coordinate, u(r) = r + 2M ln((r-2M)/(2M)); u(4M) = 4M
double regge_wheeler_u(double r, const Background& bg);

/// inverse of regge_wheeler_u, defined for all real u
double radius_from_u(double u, const Background& bg);

/// r - 2M computed without cancellation near the horizon
double horizon_offset_from_u(double u, const Background& bg);

/// sqrt(Delta)/r^2 as a function of u
double radial_potential(double u, const Background& bg);

}  // namespace sdirac
