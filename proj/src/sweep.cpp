#include "sdirac/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "sdirac/angular.hpp"
#include "sdirac/modeforms.hpp"
#include "sdirac/parallel.hpp"

namespace sdirac {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

HalfInteger parse_k(const json& v) {
    try {
        if (v.is_string()) return HalfInteger::parse(v.get<std::string>());
        if (v.is_number()) return HalfInteger::from_double(v.get<double>());
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("k entries must be numbers or strings like \"1/2\"");
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

}  // namespace

SweepConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    SweepConfig c;
    const json empty = json::object();
    const json& bg = j.value("background", empty);
    const json& mode = j.value("mode", empty);
    const json& grid = j.value("omega_grid", empty);
    const json& tol = j.value("tolerances", empty);
    const json& out = j.value("output", empty);
    for (const json* sect : {&bg, &mode, &grid, &tol, &out})
        if (!sect->is_object()) throw ConfigError("config sections must be objects");
    c.M = get_or(bg, "M", c.M);
    c.m = get_or(mode, "m", c.m);
    if (mode.contains("k")) {
        if (!mode["k"].is_array()) throw ConfigError("mode.k must be a list");
        c.k.clear();
        for (const auto& v : mode["k"]) c.k.push_back(parse_k(v));
    }
    if (mode.contains("n")) c.n = get_or(mode, "n", c.n);
    c.grid.min = get_or(grid, "min", c.grid.min);
    c.grid.max = get_or(grid, "max", c.grid.max);
    c.grid.count = get_or(grid, "count", c.grid.count);
    c.grid.spacing = get_or(grid, "spacing", c.grid.spacing);
    if (grid.contains("exclusion_delta")) c.grid.exclusion_delta = get_or(grid, "exclusion_delta", 0.0);
    c.ode_tol = get_or(tol, "ode", c.ode_tol);
    c.extract_tol = get_or(tol, "extract", c.extract_tol);
    c.out_path = get_or(out, "path", c.out_path);
    c.format = get_or(out, "format", c.format);
    check_config(c);
    return c;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void check_config(const SweepConfig& c) {
    if (!(c.M > 0)) throw ConfigError("background.M must be positive");
    if (!(c.m >= 0) || !std::isfinite(c.m)) throw ConfigError("mode.m must be non-negative");
    if (c.k.empty() || c.n.empty()) throw ConfigError("mode.k and mode.n must be non-empty");
    for (int n : c.n)
        if (n == 0) throw ConfigError("mode.n entries must be nonzero");
    if (c.grid.count < 1) throw ConfigError("omega_grid.count must be positive");
    if (!(c.grid.max >= c.grid.min)) throw ConfigError("omega_grid.max must not be below omega_grid.min");
    if (c.grid.spacing != "linear" && c.grid.spacing != "log-sym")
        throw ConfigError("omega_grid.spacing must be 'linear' or 'log-sym'");
    if (c.grid.spacing == "log-sym" && !(c.m > 0)) throw ConfigError("log-sym spacing needs m > 0");
    if (c.grid.exclusion_delta && !(*c.grid.exclusion_delta >= 0)) throw ConfigError("exclusion_delta must be >= 0");
    if (!(c.ode_tol > 0) || !(c.extract_tol > 0)) throw ConfigError("tolerances must be positive");
    if (c.format != "csv" && c.format != "json") throw ConfigError("output.format must be 'csv' or 'json'");
    if (c.threads < 1) throw ConfigError("threads must be positive");
}

std::vector<double> omega_grid(const SweepConfig& c) {
    const auto& g = c.grid;
    const double delta = g.exclusion_delta.value_or(1e-3 * c.m);
    auto fwd = [&](double w) { return sign_of(w) * std::log1p(std::abs(w) / c.m); };
    auto inv = [&](double s) { return sign_of(s) * c.m * std::expm1(std::abs(s)); };
    std::vector<double> out;
    for (int i = 0; i < g.count; ++i) {
        const double t = g.count == 1 ? 0.0 : static_cast<double>(i) / (g.count - 1);
        double w;
        if (g.spacing == "linear")
            w = g.min + t * (g.max - g.min);
        else
            w = inv(fwd(g.min) + t * (fwd(g.max) - fwd(g.min)));
        if (std::abs(std::abs(w) - c.m) <= delta) continue;
        out.push_back(w);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<SweepRow> run_sweep(const SweepConfig& c) {
    check_config(c);
    std::vector<HalfInteger> ks = c.k;
    std::vector<int> ns = c.n;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    const auto omegas = omega_grid(c);

    std::vector<SweepRow> rows;
    for (const auto& k : ks)
        for (int n : ns) {
            double lam = std::nan("");
            std::string err;
            try {
                lam = angular_lambda(k, n);
            } catch (const std::exception& e) {
                err = e.what();
            }
            for (double w : omegas) {
                SweepRow r;
                r.k = k;
                r.n = n;
                r.omega = w;
                r.lambda = lam;
                r.message = err;
                rows.push_back(r);
            }
        }

    ExtractOptions opt;
    opt.tol = c.extract_tol;
    opt.ode_tol = c.ode_tol;
    const Background bg(c.M);
    parallel_for(rows.size(), c.threads, [&](std::size_t i) {
        SweepRow& r = rows[i];
        if (!r.message.empty()) {
            r.status = "failed";
            return;
        }
        try {
            r.point = spectrum_point(ModeParams{bg, c.m, r.omega, r.lambda, r.k}, opt);
            r.status = r.point.converged ? "ok" : "unconverged";
        } catch (const std::exception& e) {
            r.status = "failed";
            r.message = e.what();
        }
    });
    return rows;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "k,n,omega,lambda,fnorm,mu_plus,mu_minus,nu_plus,nu_minus,err_estimate,status\n";
    for (const auto& r : rows) {
        os << r.k.str() << ',' << r.n << ',' << num(r.omega) << ',' << (std::isfinite(r.lambda) ? num(r.lambda) : "") << ',';
        if (r.status == "failed") {
            os << ",,,,,," << r.status << '\n';
            continue;
        }
        const auto& p = r.point;
        os << (p.fnorm ? num(*p.fnorm) : "") << ',' << num(p.mu_plus) << ',' << num(p.mu_minus) << ',' << num(p.nu_plus) << ','
           << num(p.nu_minus) << ',' << num(p.err_estimate) << ',' << r.status << '\n';
    }
}

void write_json(std::ostream& os, const std::vector<SweepRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json o;
        o["k"] = r.k.str();
        o["n"] = r.n;
        o["omega"] = r.omega;
        o["lambda"] = std::isfinite(r.lambda) ? json(r.lambda) : json(nullptr);
        o["status"] = r.status;
        if (r.status == "failed") {
            o["message"] = r.message;
        } else {
            const auto& p = r.point;
            o["fnorm"] = p.fnorm ? json(*p.fnorm) : json(nullptr);
            o["mu_plus"] = p.mu_plus;
            o["mu_minus"] = p.mu_minus;
            o["nu_plus"] = p.nu_plus;
            o["nu_minus"] = p.nu_minus;
            o["err_estimate"] = p.err_estimate;
        }
        arr.push_back(o);
    }
    os << arr.dump(2) << '\n';
}

int cmd_sweep(const SweepConfig& c, std::ostream& log) {
    const auto rows = run_sweep(c);
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!c.out_path.empty()) {
        file.open(c.out_path, std::ios::binary);
        if (!file) {
            log << "cannot write " << c.out_path << '\n';
            return kExitUsage;
        }
        os = &file;
    }
    if (c.format == "json")
        write_json(*os, rows);
    else
        write_csv(*os, rows);
    int bad = 0;
    for (const auto& r : rows)
        if (r.status != "ok") {
            ++bad;
            log << "k=" << r.k.str() << " n=" << r.n << " omega=" << num(r.omega) << ": " << r.status
                << (r.message.empty() ? "" : " (" + r.message + ")") << '\n';
        }
    return bad ? kExitNumerical : kExitOk;
}

int cmd_angular(HalfInteger k, int count, std::ostream& out) {
    const AngularSpectrum s = angular_eigenvalues(k, count);
    out << "# k=" << k.str() << " N=" << s.N << "\n";
    out << "n,lambda,convergence\n";
    int neg = 0;
    for (double v : s.lambda)
        if (v < 0) ++neg;
    int pos = 0;
    for (std::size_t i = 0; i < s.lambda.size(); ++i) {
        const double v = s.lambda[i];
        const int n = v < 0 ? -(neg - static_cast<int>(i)) : ++pos;
        out << n << ',' << num(v) << ',' << num(s.convergence[i]) << '\n';
    }
    return kExitOk;
}

}  // namespace sdirac
