#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "invsep/closed_loop.hpp"

namespace invsep {

struct EkfOptions {
  double q = 1e-3;   // Q = q I
  double r = 1e-2;   // R = r I
  double p0 = 1e-3;  // P(0) = p0 I
};

/// Rigid-body settings for the mech-lemma command.
struct MechOptions {
  Eigen::Vector3d inertia{1.0, 2.0, 3.0};  // principal moments
  Eigen::Vector3d damping{0.5, 0.5, 0.5};
  double mass = 1.0;
  Eigen::Vector3d offset{0.1, 0.0, 0.0};
  Eigen::Vector3d gravity{0.0, 0.0, -9.81};
  Eigen::Vector3d xi_r{0.3, 0.5, 0.7};
  std::vector<double> times{0.0, 1.0, 2.0, 3.0};
  Eigen::Vector3d energy_velocity{0.3, 0.5, 0.7};
  double energy_t_end = 10.0;
  double dt = 1e-3;
};

/// Fully validated, defaulted configuration document.
struct ScenarioConfig {
  Scenario scenario;
  /// Times at which linearizations are compared, when given explicitly.
  std::optional<std::vector<double>> probe_times;
  EkfOptions ekf;
  MechOptions mech;
  /// Canonical echo of every resolved field; the digest is computed over it.
  nlohmann::json resolved;
};

/// Parses and validates a JSON scenario document. Omitted fields take the
/// standard-scenario values. Throws ConfigError naming the offending field.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Applies command-line overrides and re-validates.
void override_timing(ScenarioConfig& config, std::optional<double> dt,
                     std::optional<double> t_end);

/// 16 hex digits of FNV-1a over the canonical resolved document.
std::string scenario_digest(const ScenarioConfig& config);

}  // namespace invsep
