#include "sdirac/modeforms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

#include "sdirac/parallel.hpp"

#include "sdirac/quadrature.hpp"

namespace sdirac {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kPi2 = kPi * kPi;

long long key_of(double v) { return std::llround(v * 1e12); }

bool inside(const Bump& b, double w) { return std::abs(w - b.center) < b.width; }

bool active(const ModeProfile& p, double w) {
    for (const auto& c : p.comp)
        for (const auto& b : c)
            if (inside(b, w)) return true;
    return false;
}

void require_same_fiber(const ModeProfile& a, const ModeProfile& b) {
    if (a.fiber.m != b.fiber.m || a.fiber.lambda != b.fiber.lambda || a.fiber.bg.M != b.fiber.bg.M)
        throw DomainError("profiles live on different fibers");
}

struct Node {
    double omega, weight;
};

std::vector<Node> nodes_for(const ModeProfile& psi, const ModeProfile& phi, int n) {
    psi.validate();
    phi.validate();
    auto bp = psi.breakpoints();
    const auto more = phi.breakpoints();
    bp.insert(bp.end(), more.begin(), more.end());
    bp.push_back(psi.fiber.m);
    bp.push_back(-psi.fiber.m);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    const GaussRule& g = gauss_legendre(n);
    std::vector<Node> out;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double a = bp[i], b = bp[i + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        if (half <= 0 || !active(psi, mid) || !active(phi, mid)) continue;
        for (int j = 0; j < n; ++j) out.push_back({mid + half * g.x[j], half * g.w[j]});
    }
    return out;
}

using Integrand = std::function<cplx(double, const FiberData&, const cplx*, const cplx*)>;

cplx integrate(const ModeProfile& psi, const ModeProfile& phi, const QuadSpec& q, const Integrand& f) {
    require_same_fiber(psi, phi);
    FiberCache& cache = q.cache ? *q.cache : default_fiber_cache();
    const auto nodes = nodes_for(psi, phi, q.nodes);
    if (q.threads > 1)
        parallel_for(nodes.size(), q.threads, [&](std::size_t i) { cache.get(psi.fiber.at(nodes[i].omega)); });
    cplx acc = 0.0;
    for (const Node& nd : nodes) {
        const cplx a[2] = {psi.value(1, nd.omega), psi.value(2, nd.omega)};
        const cplx b[2] = {phi.value(1, nd.omega), phi.value(2, nd.omega)};
        if (a[0] == 0.0 && a[1] == 0.0) continue;
        if (b[0] == 0.0 && b[1] == 0.0) continue;
        acc += nd.weight * f(nd.omega, cache.get(psi.fiber.at(nd.omega)), a, b);
    }
    return acc;
}

cplx quadratic(const Mat2& W, const cplx* a, const cplx* b) {
    cplx s = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) s += std::conj(a[i]) * W(i, j) * b[j];
    return s;
}

SpinorPair horizon_vector(const FiberData& d, int a) {
    if (d.regime == Regime::evanescent) return a == 1 ? d.f0 : SpinorPair{};
    return a == 1 ? SpinorPair{1.0, 0.0} : SpinorPair{0.0, 1.0};
}

}  // namespace

void ModeProfile::validate() const {
    const double m = fiber.m;
    for (int a = 0; a < 2; ++a)
        for (const auto& b : comp[a]) {
            if (!(b.width > 0) || !std::isfinite(b.center) || !std::isfinite(b.width))
                throw DomainError("bump needs a finite center and positive width");
            const double lo = b.center - b.width, hi = b.center + b.width;
            for (double s : {m, -m})
                if (lo <= s && s <= hi) throw DomainError("profile support touches omega = +-m");
            if (a == 1 && lo < m && hi > -m) throw DomainError("component 2 must vanish on (-m, m)");
        }
}

cplx ModeProfile::value(int a, double omega) const {
    cplx s = 0.0;
    for (const auto& b : comp[a - 1]) {
        const double x = (omega - b.center) / b.width;
        if (std::abs(x) < 1.0) s += b.amp * std::exp(-1.0 / (1.0 - x * x));
    }
    return s;
}

std::vector<double> ModeProfile::breakpoints() const {
    std::vector<double> bp;
    for (const auto& c : comp)
        for (const auto& b : c) {
            bp.push_back(b.center - b.width);
            bp.push_back(b.center + b.width);
        }
    return bp;
}

FiberData FiberCache::get(const ModeParams& p) {
    const Key key{key_of(p.omega), key_of(p.lambda), key_of(p.m), key_of(p.bg.M)};
    {
        std::lock_guard<std::mutex> lock(mtx_);
        auto it = data_.find(key);
        if (it != data_.end()) return it->second;
    }
    FiberData d;
    d.regime = p.regime();
    if (d.regime == Regime::propagating) {
        const auto tr = extract_pair(p, opt_);
        d.f1 = *tr[0].finf;
        d.f2 = *tr[1].finf;
        d.T = scattering_matrix_closed(d.f1, d.f2).t;
        d.Tinv = d.T.inverse();
        d.fnorm2 = d.f1.norm2();
        d.err = tr[0].err_estimate;
    } else {
        const Transmission t = decaying_transmission(p, opt_.ode_tol);
        d.f0 = t.f0;
        d.T = Mat2::Identity();
        d.Tinv = Mat2::Identity();
        d.err = t.err_estimate;
    }
    std::lock_guard<std::mutex> lock(mtx_);
    data_.emplace(key, d);
    return d;
}

std::size_t FiberCache::size() const {
    std::lock_guard<std::mutex> lock(mtx_);
    return data_.size();
}

FiberCache& default_fiber_cache() {
    static FiberCache cache;
    return cache;
}

cplx scalar_product(const ModeProfile& psi, const ModeProfile& phi, const QuadSpec& q) {
    return 2.0 * kPi2 * integrate(psi, phi, q, [](double, const FiberData& d, const cplx* a, const cplx* b) {
               return quadratic(d.Tinv, a, b);
           });
}

cplx signature_form(const ModeProfile& psi, const ModeProfile& phi, const QuadSpec& q) {
    return 4.0 * kPi2 * integrate(psi, phi, q, [](double w, const FiberData& d, const cplx* a, const cplx* b) -> cplx {
               if (d.regime != Regime::propagating) return 0.0;
               Mat2 G;
               G << inner(d.f1, d.f1), inner(d.f1, d.f2), inner(d.f2, d.f1), inner(d.f2, d.f2);
               return sign_of(w) * quadratic(G, a, b);
           });
}

cplx signature_via_scalar_product(const ModeProfile& psi, const ModeProfile& phi, const QuadSpec& q) {
    return 2.0 * kPi2 * integrate(psi, phi, q, [](double w, const FiberData& d, const cplx* a, const cplx* b) -> cplx {
               if (d.regime != Regime::propagating) return 0.0;
               const Eigen::Vector2cd phib(b[0], b[1]);
               const Eigen::Vector2cd s = sign_of(w) / (d.fnorm2 + 1.0) * (d.Tinv * phib);
               const cplx sb[2] = {s[0], s[1]};
               return quadratic(d.Tinv, a, sb);
           });
}

cplx flux_form(const ModeProfile& psi, const ModeProfile& phi, const QuadSpec& q) {
    return -4.0 * kPi2 * integrate(psi, phi, q, [](double, const FiberData& d, const cplx* a, const cplx* b) -> cplx {
               if (d.regime != Regime::propagating) return 0.0;
               return std::conj(a[0]) * b[0] - std::conj(a[1]) * b[1];
           });
}

cplx horizon_bilinear_integrand(const ModeProfile& psi_m, const ModeProfile& phi_mprime, double omega, FiberCache* cache) {
    for (double s : {psi_m.fiber.m, phi_mprime.fiber.m})
        if (std::abs(omega) == s) throw DomainError("omega at an excluded point +-m");
    FiberCache& c = cache ? *cache : default_fiber_cache();
    const cplx a[2] = {psi_m.value(1, omega), psi_m.value(2, omega)};
    const cplx b[2] = {phi_mprime.value(1, omega), phi_mprime.value(2, omega)};
    if ((a[0] == 0.0 && a[1] == 0.0) || (b[0] == 0.0 && b[1] == 0.0)) return 0.0;
    const FiberData dm = c.get(psi_m.fiber.at(omega));
    const FiberData dn = c.get(phi_mprime.fiber.at(omega));
    cplx s = 0.0;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) s += std::conj(a[i - 1]) * b[j - 1] * pseudo_inner(horizon_vector(dm, i), horizon_vector(dn, j));
    return s;
}

cplx horizon_bilinear_integral(const ModeProfile& psi_m, const ModeProfile& phi_mprime, const QuadSpec& q) {
    psi_m.validate();
    phi_mprime.validate();
    ModeProfile probe = phi_mprime;
    probe.fiber = psi_m.fiber;  // only for panel construction
    cplx acc = 0.0;
    for (const Node& nd : nodes_for(psi_m, probe, q.nodes)) {
        if (std::abs(nd.omega) == phi_mprime.fiber.m) continue;
        acc += nd.weight * horizon_bilinear_integrand(psi_m, phi_mprime, nd.omega, q.cache);
    }
    return acc;
}

}  // namespace sdirac
