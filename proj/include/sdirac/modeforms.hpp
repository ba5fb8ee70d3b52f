#pragma once
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "sdirac/operators.hpp"

namespace sdirac {

/// the angular mode and background a profile lives on
struct Fiber {
    Background bg;
    double m = 0.0;
    double lambda = 0.0;
    HalfInteger k;

    ModeParams at(double omega) const { return {bg, m, omega, lambda, k}; }
};

/// amp * exp(-1/(1-x^2)), x = (omega - center)/width, supported on [center - width, center + width]
struct Bump {
    double center = 0.0, width = 1.0;
    cplx amp{1.0};
};

struct ModeProfile {
    Fiber fiber;
    std::vector<Bump> comp[2];  // components a = 1, 2

    /// throws DomainError if a support touches +-m or component 2 reaches into (-m, m)
    void validate() const;
    cplx value(int a, double omega) const;
    std::vector<double> breakpoints() const;
};

/// everything the forms need at one frequency
struct FiberData {
    Regime regime = Regime::evanescent;
    SpinorPair f1, f2;  // infinity data (propagating)
    Mat2 T, Tinv;       // scattering matrix and inverse (identity weight when evanescent)
    SpinorPair f0;      // horizon data of the decaying branch (evanescent)
    double fnorm2 = 1.0;
    double err = 0.0;
};

/// thread-safe memo of FiberData keyed by (omega, lambda, m, M) rounded to 1e-12
class FiberCache {
public:
    explicit FiberCache(ExtractOptions opt = {}) : opt_(opt) {}
    FiberData get(const ModeParams& p);
    std::size_t size() const;
    const ExtractOptions& options() const { return opt_; }

private:
    using Key = std::tuple<long long, long long, long long, long long>;
    ExtractOptions opt_;
    mutable std::mutex mtx_;
    std::map<Key, FiberData> data_;
};

struct QuadSpec {
    int nodes = 64;              // Gauss-Legendre nodes per panel between breakpoints
    FiberCache* cache = nullptr; // nullptr: process-wide default cache
    int threads = 1;             // workers filling the cache before summation
};

/// 2 pi^2 int conj(psi)^T T^{-1} phi
cplx scalar_product(const ModeProfile& psi, const ModeProfile& phi, const QuadSpec& q = {});

/// 4 pi^2 int_{|w|>m} eps(w) sum conj(psi_a) phi_a' <f_a, f_a'>
cplx signature_form(const ModeProfile& psi, const ModeProfile& phi, const QuadSpec& q = {});

/// the same form evaluated as scalar_product(psi, S phi) with (S phi)_a = eps/(|f1|^2+1) sum_b (T^{-1})_ab phi_b
cplx signature_via_scalar_product(const ModeProfile& psi, const ModeProfile& phi, const QuadSpec& q = {});

/// -4 pi^2 int_{|w|>m} (conj(psi_1) phi_1 - conj(psi_2) phi_2)
cplx flux_form(const ModeProfile& psi, const ModeProfile& phi, const QuadSpec& q = {});

/// sum conj(psi_a) phi_a' <f0_{m,a}, diag(1,-1) f0_{m',a'}> at one frequency
cplx horizon_bilinear_integrand(const ModeProfile& psi_m, const ModeProfile& phi_mprime, double omega,
                                FiberCache* cache = nullptr);

/// integral over omega of the horizon integrand
cplx horizon_bilinear_integral(const ModeProfile& psi_m, const ModeProfile& phi_mprime, const QuadSpec& q = {});

FiberCache& default_fiber_cache();

}  // namespace sdirac
