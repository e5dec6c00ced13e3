#include "invsep/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>

#include "invsep/errors.hpp"
#include "invsep/mech.hpp"

namespace invsep {
namespace {

using nlohmann::json;

constexpr std::string_view kHeader =
    "t,x,y,theta,xhat,yhat,thetahat,xr,yr,thetar,eta_x,eta_y,eta_theta,eps_x,eps_y,eps_theta,u,v";

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

json spectrum_json(const Spectrum& values) {
  json arr = json::array();
  for (const auto& lambda : values) arr.push_back({{"re", lambda.real()}, {"im", lambda.imag()}});
  return arr;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

json verdict(Command command, bool pass, json metrics, json tolerances,
             const ScenarioConfig& config) {
  return {{"command", command_name(command)},
          {"pass", pass},
          {"metrics", std::move(metrics)},
          {"tolerances", std::move(tolerances)},
          {"scenario_digest", scenario_digest(config)}};
}

std::vector<double> probe_times(const ScenarioConfig& config) {
  return config.probe_times.value_or(default_probe_times());
}

// EKF comparison samples: a quarter period apart over the second lap of a
// circle, after the covariance has left its initial value.
std::vector<double> ekf_probe_times(const ScenarioConfig& config) {
  if (config.probe_times) return *config.probe_times;
  if (const auto* circle = std::get_if<PermanentTrajectory>(&config.scenario.reference)) {
    const double period = circle->period();
    if (std::isfinite(period)) {
      return {period, 1.25 * period, 1.5 * period, 1.75 * period};
    }
  }
  return default_probe_times();
}

bool run_simulate(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  const SimulationResult result = simulate(config.scenario);
  std::ofstream out(out_dir / "timeseries.csv", std::ios::binary);
  if (!out) throw Error("cannot write timeseries.csv");
  write_timeseries(out, result);
  return true;
}

bool run_eigs(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  const Scenario& sc = config.scenario;
  const RobotInput r = reference_input(sc.reference, 0.0);
  const Matrix ctrl = ctrl_loop_matrix(r.u, r.v, sc.controller);
  const Matrix obs = obs_error_matrix(r.u, r.v, sc.observer);
  const Matrix sep = separation_matrix(r.u, r.v, sc.controller, sc.observer);
  const double abscissa = spectral_abscissa(sep);
  const bool pass = abscissa < 0.0;
  json doc = verdict(Command::eigs, pass,
                     {{"controller_abscissa", spectral_abscissa(ctrl)},
                      {"observer_abscissa", spectral_abscissa(obs)},
                      {"closed_loop_abscissa", abscissa}},
                     {{"closed_loop_abscissa_max", 0.0}}, config);
  doc["controller"] = spectrum_json(eigenvalues(ctrl));
  doc["observer"] = spectrum_json(eigenvalues(obs));
  doc["closed_loop"] = spectrum_json(eigenvalues(sep));
  doc["reference_input"] = {{"u", r.u}, {"v", r.v}};
  write_json(out_dir / "eigs.json", doc);
  return pass;
}

bool run_separation(const ScenarioConfig& config, const RunOptions& options,
                    const std::filesystem::path& out_dir) {
  const Scenario& sc = config.scenario;
  const double tol = options.tol.value_or(kSeparationTol);
  const RobotInput r = reference_input(sc.reference, 0.0);
  const Matrix sep = separation_matrix(r.u, r.v, sc.controller, sc.observer);
  const Spectrum expected =
      spectrum_union(eigenvalues(ctrl_loop_matrix(r.u, r.v, sc.controller)),
                     eigenvalues(obs_error_matrix(r.u, r.v, sc.observer)));
  const double mismatch = spectrum_mismatch(eigenvalues(sep), expected);

  const std::vector<double> times = probe_times(config);
  const auto fd = linearize_along(
      closed_loop_error_dynamics(sc.reference, sc.landmarks, sc.controller, sc.observer), times);
  double reconstruction = 0.0;
  for (const auto& m : fd) reconstruction = std::max(reconstruction, (m - sep).cwiseAbs().maxCoeff());
  const double lower_left = sep.bottomLeftCorner(3, 3).cwiseAbs().maxCoeff();

  const bool pass = mismatch < tol && reconstruction < kReconstructionTol && lower_left == 0.0;
  json doc = verdict(Command::separation, pass,
                     {{"max_eigenvalue_mismatch", mismatch},
                      {"max_reconstruction_deviation", reconstruction},
                      {"lower_left_block_max_abs", lower_left},
                      {"probe_times", times}},
                     {{"eigenvalue_mismatch", tol}, {"reconstruction", kReconstructionTol}},
                     config);
  doc["separation_matrix"] = matrix_json(sep);
  doc["closed_loop"] = spectrum_json(eigenvalues(sep));
  doc["controller_union_observer"] = spectrum_json(expected);
  write_json(out_dir / "report.json", doc);
  return pass;
}

bool run_invariance(const ScenarioConfig& config, const RunOptions& options,
                    const std::filesystem::path& out_dir) {
  const Scenario& sc = config.scenario;
  const double tol = options.tol.value_or(kInvarianceTol);
  const std::vector<double> times = probe_times(config);
  const double closed = time_invariance_probe(
      closed_loop_error_dynamics(sc.reference, sc.landmarks, sc.controller, sc.observer), times);
  const double ctrl =
      time_invariance_probe(tracking_error_dynamics(sc.reference, sc.controller), times);
  const double obs = time_invariance_probe(
      observer_error_dynamics(sc.reference, sc.landmarks, sc.observer), times);

  std::vector<RobotInput> inputs;
  std::vector<GroupElement> poses;
  for (const double t : times) {
    inputs.push_back(reference_input(sc.reference, t));
    poses.push_back(reference_pose(sc.reference, t));
  }
  const bool pass = closed < tol;
  write_json(out_dir / "report.json",
             verdict(Command::invariance, pass,
                     {{"closed_loop_probe", closed},
                      {"controller_probe", ctrl},
                      {"observer_probe", obs},
                      {"permanence_probe", permanence_probe(poses, inputs)},
                      {"probe_times", times}},
                     {{"closed_loop_probe_max", tol}}, config));
  return pass;
}

bool run_ekf_compare(const ScenarioConfig& config, const RunOptions& options,
                     const std::filesystem::path& out_dir) {
  const Scenario& sc = config.scenario;
  const double tol = options.tol.value_or(kInvarianceTol);
  const std::vector<double> times = ekf_probe_times(config);

  EkfNoise noise{config.ekf.q * Eigen::Matrix3d::Identity(),
                 config.ekf.r * Eigen::MatrixXd::Identity(
                                    static_cast<Eigen::Index>(sc.landmarks.size()),
                                    static_cast<Eigen::Index>(sc.landmarks.size()))};
  const auto states = ekf_states_along(sc.reference, sc.landmarks, noise,
                                       config.ekf.p0 * Eigen::Matrix3d::Identity(), times,
                                       sc.dt);
  std::vector<Matrix> ekf_matrices;
  double min_p_eig = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const RobotInput input = reference_input(sc.reference, times[i]);
    const auto jac = ekf_jacobians(states[i].x_hat, input, sc.landmarks);
    const Eigen::MatrixXd L = ekf_gain(states[i].P, jac.H, noise.R);
    ekf_matrices.push_back(ekf_error_matrix(states[i].x_hat, input, sc.landmarks, L));
    for (const auto& lambda : eigenvalues(states[i].P)) min_p_eig = std::min(min_p_eig, lambda.real());
  }
  const double ekf_probe = max_pairwise_deviation(ekf_matrices);
  const double invariant_probe = time_invariance_probe(
      observer_error_dynamics(sc.reference, sc.landmarks, sc.observer), times);

  const bool pass = invariant_probe < tol && ekf_probe > kEkfVariationMin;
  write_json(out_dir / "report.json",
             verdict(Command::ekf_compare, pass,
                     {{"ekf_probe", ekf_probe},
                      {"invariant_probe", invariant_probe},
                      {"ekf_min_covariance_eigenvalue", min_p_eig},
                      {"probe_times", times}},
                     {{"invariant_probe_max", tol}, {"ekf_probe_min", kEkfVariationMin}},
                     config));
  return pass;
}

bool run_mech_lemma(const ScenarioConfig& config, const RunOptions& options,
                    const std::filesystem::path& out_dir) {
  const MechOptions& m = config.mech;
  const double tol = options.tol.value_or(kInvarianceTol);
  mech::EpSystem body;
  body.inertia = m.inertia.asDiagonal();

  body.force = mech::no_force();
  const double free_probe = mech::lemma1_probe(body, m.xi_r, m.times);
  body.force = mech::linear_damping(m.damping);
  const double damped_probe = mech::lemma1_probe(body, m.xi_r, m.times);
  body.force = mech::offset_mass_gravity(m.mass, m.offset, m.gravity);
  const double gravity_probe = mech::lemma1_probe(body, m.xi_r, m.times);

  body.force = mech::no_force();
  body.velocity = m.energy_velocity;
  const auto run = mech::integrate_rigid_body(body, m.energy_t_end, m.dt);
  const double e0 = mech::kinetic_energy(body.inertia, run.front().velocity);
  double drift = 0.0;
  for (const auto& s : run) {
    drift = std::max(drift, std::abs(mech::kinetic_energy(body.inertia, s.velocity) - e0));
  }

  const bool pass = free_probe < tol && damped_probe < tol &&
                    gravity_probe > kLemmaViolationMin && drift < kEnergyDriftTol;
  write_json(out_dir / "report.json",
             verdict(Command::mech_lemma, pass,
                     {{"free_probe", free_probe},
                      {"damped_probe", damped_probe},
                      {"attitude_dependent_probe", gravity_probe},
                      {"free_energy_drift", drift},
                      {"times", m.times}},
                     {{"hypothesis_probe_max", tol},
                      {"violated_probe_min", kLemmaViolationMin},
                      {"energy_drift_max", kEnergyDriftTol}},
                     config));
  return pass;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "simulate") return Command::simulate;
  if (name == "eigs") return Command::eigs;
  if (name == "separation") return Command::separation;
  if (name == "invariance") return Command::invariance;
  if (name == "ekf-compare") return Command::ekf_compare;
  if (name == "mech-lemma") return Command::mech_lemma;
  return std::nullopt;
}

std::string_view command_name(Command command) {
  switch (command) {
    case Command::simulate: return "simulate";
    case Command::eigs: return "eigs";
    case Command::separation: return "separation";
    case Command::invariance: return "invariance";
    case Command::ekf_compare: return "ekf-compare";
    case Command::mech_lemma: return "mech-lemma";
  }
  return "unknown";
}

std::vector<double> default_probe_times() {
  constexpr double kPi = std::numbers::pi;
  return {0.0, 0.5 * kPi, kPi, 1.5 * kPi};
}

std::string_view timeseries_header() { return kHeader; }

void write_timeseries(std::ostream& out, const SimulationResult& r) {
  out << kHeader << '\n';
  for (std::size_t k = 0; k < r.time.size(); ++k) {
    const double row[] = {r.time[k],
                          r.pose[k].x(),      r.pose[k].y(),      r.pose[k].theta(),
                          r.estimate[k].x(),  r.estimate[k].y(),  r.estimate[k].theta(),
                          r.reference[k].x(), r.reference[k].y(), r.reference[k].theta(),
                          r.eta[k].eta_x,     r.eta[k].eta_y,     r.eta[k].eta_theta,
                          r.eps[k].x(),       r.eps[k].y(),       r.eps[k].theta(),
                          r.input[k].u,       r.input[k].v};
    bool first = true;
    for (const double v : row) {
      if (!first) out << ',';
      put(out, v);
      first = false;
    }
    out << '\n';
  }
}

int run(Command command, const ScenarioConfig& config, const std::filesystem::path& out_dir,
        const RunOptions& options, std::ostream& diag) {
  try {
    std::filesystem::create_directories(out_dir);
    bool pass = false;
    switch (command) {
      case Command::simulate: pass = run_simulate(config, out_dir); break;
      case Command::eigs: pass = run_eigs(config, out_dir); break;
      case Command::separation: pass = run_separation(config, options, out_dir); break;
      case Command::invariance: pass = run_invariance(config, options, out_dir); break;
      case Command::ekf_compare: pass = run_ekf_compare(config, options, out_dir); break;
      case Command::mech_lemma: pass = run_mech_lemma(config, options, out_dir); break;
    }
    if (!pass) diag << command_name(command) << ": verdict FAIL\n";
    return pass ? 0 : 1;
  } catch (const std::exception& e) {
    diag << command_name(command) << ": error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace invsep
