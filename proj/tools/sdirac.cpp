// sdirac: sweeps of signature/flux spectra, invariant suite, angular eigenvalue tables
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "sdirac/sweep.hpp"

using namespace sdirac;

namespace {

struct Overrides {
    std::string config, out, format;
    int threads = 0;
    std::uint64_t seed = 0;
    double ode_tol = 0, extract_tol = 0;
};

SweepConfig resolve(const Overrides& o) {
    SweepConfig c = o.config.empty() ? SweepConfig{} : load_config(o.config);
    if (!o.out.empty()) c.out_path = o.out;
    if (!o.format.empty()) c.format = o.format;
    if (o.threads > 0) c.threads = o.threads;
    if (o.seed) c.seed = o.seed;
    if (o.ode_tol > 0) c.ode_tol = o.ode_tol;
    if (o.extract_tol > 0) c.extract_tol = o.extract_tol;
    check_config(c);
    return c;
}

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output file (default: stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "seed for randomized profiles");
    sub->add_option("--ode-tol", o.ode_tol, "local tolerance of the radial integrator")->check(CLI::PositiveNumber);
    sub->add_option("--extract-tol", o.extract_tol, "target error of the extraction at infinity")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirac transmission coefficients and signature/flux spectra on Schwarzschild"};
    app.require_subcommand(1);

    Overrides sweep_o, inv_o;
    auto* sweep = app.add_subcommand("sweep", "tabulate mu and nu over an omega grid");
    add_common(sweep, sweep_o);
    auto* inv = app.add_subcommand("invariants", "run the invariant suite; exit 0 iff all checks pass");
    add_common(inv, inv_o);

    std::string kstr;
    int count = 4;
    auto* ang = app.add_subcommand("angular", "angular eigenvalues for one k");
    ang->add_option("--k", kstr, "half-integer k, e.g. 1/2 or -1.5")->required();
    ang->add_option("--count", count, "number of eigenvalues")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sweep) return cmd_sweep(resolve(sweep_o), std::cerr);
        if (*inv) {
            const SweepConfig c = resolve(inv_o);
            if (c.out_path.empty()) return cmd_invariants(c, std::cout);
            std::ofstream f(c.out_path);
            if (!f) {
                std::cerr << "cannot write " << c.out_path << '\n';
                return kExitUsage;
            }
            const int rc = cmd_invariants(c, f);
            return rc;
        }
        if (*ang) {
            HalfInteger k;
            try {
                k = HalfInteger::parse(kstr);
            } catch (const DomainError& e) {
                std::cerr << "invalid --k: " << e.what() << " (k must be a half-odd integer)\n";
                return kExitUsage;
            }
            return cmd_angular(k, count, std::cout);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
