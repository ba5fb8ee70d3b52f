#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdirac/operators.hpp"

namespace sdirac {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OmegaGrid {
    double min = 0.6, max = 5.0;
    int count = 10;
    std::string spacing = "linear";  // linear | log-sym
    std::optional<double> exclusion_delta;  // default 1e-3 m
};

struct SweepConfig {
    double M = 1.0;
    double m = 0.5;
    std::vector<HalfInteger> k = {HalfInteger::from_twice(1)};
    std::vector<int> n = {1};
    OmegaGrid grid;
    double ode_tol = 1e-12;
    double extract_tol = 1e-8;
    std::string out_path;  // empty: standard output
    std::string format = "csv";
    int threads = 1;
    std::uint64_t seed = 20240611;
};

/// JSON text -> config; throws ConfigError
SweepConfig parse_config(const std::string& json_text);
SweepConfig load_config(const std::string& path);
void check_config(const SweepConfig& c);

/// grid points with the neighbourhoods of +-m removed, ascending
std::vector<double> omega_grid(const SweepConfig& c);

struct SweepRow {
    HalfInteger k;
    int n = 1;
    double omega = 0, lambda = 0;
    SpectrumPoint point;
    std::string status;  // ok | unconverged | failed
    std::string message;
};

std::vector<SweepRow> run_sweep(const SweepConfig& c);
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_json(std::ostream& os, const std::vector<SweepRow>& rows);

/// exit codes
constexpr int kExitOk = 0, kExitInvariant = 1, kExitUsage = 2, kExitNumerical = 3;

int cmd_sweep(const SweepConfig& c, std::ostream& log);

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0, threshold = 0;
    std::string detail;
};

std::vector<CheckResult> run_invariants(const SweepConfig& c);
int cmd_invariants(const SweepConfig& c, std::ostream& out);

int cmd_angular(HalfInteger k, int count, std::ostream& out);

}  // namespace sdirac
