#pragma once
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace sdirac {

using cplx = std::complex<double>;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// parameters on the wrong side of |omega| = m for the requested operation
struct RegimeError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved(achieved) {}
    double achieved;
};

/// half-odd-integer stored as twice its value (always odd)
class HalfInteger {
public:
    HalfInteger() = default;
    static HalfInteger from_twice(int twice);
    /// accepts "1/2", "-3/2", "0.5", "-1.5"
    static HalfInteger parse(const std::string& s);
    static HalfInteger from_double(double v);

    int twice() const { return twice_; }
    double value() const { return 0.5 * twice_; }
    double abs() const { return 0.5 * std::abs(twice_); }
    std::string str() const;
    bool operator==(const HalfInteger&) const = default;
    auto operator<=>(const HalfInteger&) const = default;

private:
    explicit HalfInteger(int t) : twice_(t) {}
    int twice_ = 1;
};

/// radial state (X+, X-)
struct SpinorPair {
    cplx xplus{0.0}, xminus{0.0};

    double pseudo_norm() const { return std::norm(xplus) - std::norm(xminus); }
    double norm2() const { return std::norm(xplus) + std::norm(xminus); }
    double norm() const { return std::sqrt(norm2()); }
    bool finite() const {
        return std::isfinite(xplus.real()) && std::isfinite(xplus.imag()) &&
               std::isfinite(xminus.real()) && std::isfinite(xminus.imag());
    }
};

inline SpinorPair operator+(SpinorPair a, const SpinorPair& b) { return {a.xplus + b.xplus, a.xminus + b.xminus}; }
inline SpinorPair operator-(SpinorPair a, const SpinorPair& b) { return {a.xplus - b.xplus, a.xminus - b.xminus}; }
inline SpinorPair operator*(cplx c, const SpinorPair& a) { return {c * a.xplus, c * a.xminus}; }

/// <a, b> on C^2, antilinear in a
inline cplx inner(const SpinorPair& a, const SpinorPair& b) {
    return std::conj(a.xplus) * b.xplus + std::conj(a.xminus) * b.xminus;
}
/// <a, diag(1,-1) b>
inline cplx pseudo_inner(const SpinorPair& a, const SpinorPair& b) {
    return std::conj(a.xplus) * b.xplus - std::conj(a.xminus) * b.xminus;
}

inline double sign_of(double w) { return w > 0 ? 1.0 : (w < 0 ? -1.0 : 0.0); }

}  // namespace sdirac
