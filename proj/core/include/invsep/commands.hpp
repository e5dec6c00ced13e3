#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "invsep/scenario.hpp"

namespace invsep {

enum class Command { simulate, eigs, separation, invariance, ekf_compare, mech_lemma };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command command);

struct RunOptions {
  /// Overrides the command's primary tolerance.
  std::optional<double> tol;
};

/// Default tolerances.
inline constexpr double kSeparationTol = 1e-6;
inline constexpr double kReconstructionTol = 1e-4;
inline constexpr double kInvarianceTol = 1e-6;
inline constexpr double kEkfVariationMin = 0.1;
inline constexpr double kLemmaViolationMin = 1e-2;
inline constexpr double kEnergyDriftTol = 1e-8;

/// Probe times used when the config does not list any: 0, pi/2, pi, 3pi/2.
std::vector<double> default_probe_times();

/// Executes one command, writing its output files into out_dir (created if
/// needed). Returns 0 when every verdict passes, 1 when a verdict fails
/// (files are still written) and 2 on any error, with a diagnostic on diag.
///
///   simulate    -> timeseries.csv
///   eigs        -> eigs.json
///   separation, invariance, ekf-compare, mech-lemma -> report.json
int run(Command command, const ScenarioConfig& config, const std::filesystem::path& out_dir,
        const RunOptions& options, std::ostream& diag);

/// Header row of timeseries.csv.
std::string_view timeseries_header();

/// Writes a simulation as CSV with 17 significant digits.
void write_timeseries(std::ostream& out, const SimulationResult& result);

}  // namespace invsep
