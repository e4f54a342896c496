#pragma once

#include "beamstab/diagnostics.hpp"
#include "beamstab/problem.hpp"
#include "beamstab/stepper.hpp"
#include "beamstab/verification.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace beamstab {

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_numerical = 2, exit_usage = 3 };

/// Shared settings of every subcommand. Exactly one of preset and
/// problem_file names the problem; at most one of dt and ratio is set and
/// ratio defaults to 40 (h_t = h_x / ratio).
struct RunConfig {
    std::optional<std::string> preset;
    std::optional<std::filesystem::path> problem_file;
    std::size_t nodes = 41;
    std::optional<double> dt;
    std::optional<double> ratio;
    std::filesystem::path out = "out";
    std::size_t decimation = 1;
    CurvatureMode mode = CurvatureMode::paper;
    std::optional<double> lambda;
    bool dump_matrices = false;
};

inline constexpr double default_ratio = 40.0;

/// Throws DomainError on inconsistent settings.
void check_config(const RunConfig& config);
/// The resolution part of check_config (nodes, dt, ratio, decimation).
void check_resolution(const RunConfig& config);
BeamProblem load_config_problem(const RunConfig& config);
TimeGrid time_grid(const RunConfig& config, const BeamProblem& problem);

/// Subcommands. Each returns an ExitCode, prints a short summary to `out`
/// and diagnostics to `err`, and writes its files under config.out.
///
///   validate     report only
///   simulate     problem.json, trace.csv, energy.csv, bounds.json
///   verify       errors.csv (needs an exact solution)
///   convergence  convergence.csv
///   sweep        sweep.csv, one simulation per value
///   bounds       bounds.json
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_convergence(const RunConfig& config, Study study, std::size_t levels, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, const std::string& parameter, const std::vector<double>& values,
              std::ostream& out, std::ostream& err);
int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Sweepable parameters: k_r, k_a, k_d, k_v and mu_scale (multiplies mu).
BeamProblem with_parameter(const BeamProblem& problem, const std::string& parameter, double value);

struct SweepRow {
    double value;
    std::optional<std::string> regime;
    double beta0 = 0.0;
    double beta1 = 0.0;
    std::optional<double> lambda_max;
    std::optional<double> sigma;
    std::optional<double> M_d;
    double E0 = 0.0;
    double E_final_ratio = 0.0;
    double j_mu = 0.0;
    double j_a = 0.0;
    double j_v = 0.0;
};

/// One simulation per value, run concurrently (BEAMSTAB_THREADS caps the
/// worker count). Negative values and invalid problems throw.
std::vector<SweepRow> sweep(const RunConfig& config, const BeamProblem& problem, const std::string& parameter,
                            const std::vector<double>& values);

void write_sweep_csv(std::ostream& out, const std::string& parameter, const std::vector<SweepRow>& rows);
void write_convergence_csv(std::ostream& out, Study study, const std::vector<ConvergenceRow>& rows);
void write_error_csv(std::ostream& out, const ErrorTable& table);

}  // namespace beamstab
