#pragma once

#include "floquet/drive.hpp"
#include "floquet/propagator.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace floquet::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kUnsupported = 2, kValidationFailure = 3 };

struct Tolerances {
    double tol_case = kDefaultCaseTol;
    double tol_unit = 1e-8;
    double tol_res = 1e-6;
    double integrator = 1e-11;
};

struct SweepOptions {
    std::string kind = "amplitude"; ///< "amplitude" or "epsilon"
    double from = 0.0;
    double to = 0.0;
    int points = 1;
    /// Direction of the (phi1, phi2) ray for amplitude sweeps.
    double angle = 0.0;
};

struct ValidateOptions {
    double tol_riccati = 1e-7;
    double tol_oracle = 1e-6;
    double tol_consistency = 1e-7;
    double tol_initial = 1e-9;
    double tol_im_omega = 1e-9;
    double tol_symbolic = 1e-10;
    double tol_schrodinger = 1e-6;
    double oracle_periods = 50.0;
    int oracle_points_per_period = 64;
};

struct BoundsOptions {
    int n_max = 30;
    int catalan_max = 60;
    std::vector<std::pair<double, double>> constants{{1.0, 1.0}, {2.0, 3.0}};
    std::vector<double> chi{0.3, 0.5, 1.0};
    int m_range = 50;
    int cutoff = 1000;
};

struct RunConfig {
    DriveSpec drive{1.0, {}};
    double epsilon = 0.0;
    int order = 8;
    int m_max = 0;
    int p_max = 40;
    int mode_cap = kDefaultModeCap;
    Tolerances tol;
    int grid = 512;             ///< samples per period for residual checks
    int trace_points_per_period = 64;
    double trace_periods = 10.0;
    AlphaBranch branch = AlphaBranch::Principal;
    SweepOptions sweep;
    ValidateOptions validate;
    BoundsOptions bounds;

    SolveOptions solve_options() const;
};

/// Parses and validates a configuration document; throws floquet::Error on bad input.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

struct Output {
    std::string dir = ".";
    bool quiet = false;
    std::ostream* log = nullptr;
};

int cmd_classify(const RunConfig& cfg, const Output& out);
int cmd_solve(const RunConfig& cfg, const Output& out);
int cmd_validate(const RunConfig& cfg, const Output& out);
int cmd_sweep(const RunConfig& cfg, const Output& out);
int cmd_bounds(const RunConfig& cfg, const Output& out);

/// Full command line entry point: verb plus --config, --out, --quiet.
int run(int argc, char** argv);

/// %.17g
std::string format_double(double x);

} // namespace floquet::cli
