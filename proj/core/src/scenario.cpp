#include "invsep/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "invsep/errors.hpp"

namespace invsep {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

const json* member(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& obj, const char* key, const std::string& path, double fallback) {
  const json* v = member(obj, key);
  if (v == nullptr) return fallback;
  if (!v->is_number()) fail(path, "expected a number");
  const double d = v->get<double>();
  if (!std::isfinite(d)) fail(path, "must be finite");
  return d;
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
    if (!std::isfinite(out.back())) fail(path + "[" + std::to_string(i) + "]", "must be finite");
  }
  return out;
}

Eigen::Vector3d triple(const json& obj, const char* key, const std::string& path,
                       const Eigen::Vector3d& fallback) {
  const json* v = member(obj, key);
  if (v == nullptr) return fallback;
  const auto vals = numbers(*v, path);
  if (vals.size() != 3) fail(path, "expected 3 numbers");
  return {vals[0], vals[1], vals[2]};
}

json to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }
json to_json(const GroupElement& g) { return json::array({g.x(), g.y(), g.theta()}); }

const json& object_or_empty(const json& root, const char* key, const std::string& path) {
  static const json kEmpty = json::object();
  const json* v = member(root, key);
  if (v == nullptr) return kEmpty;
  if (!v->is_object()) fail(path, "expected an object");
  return *v;
}

Reference parse_trajectory(const json& t, json& echo) {
  reject_unknown(t, "trajectory",
                 {"type", "u", "v", "origin", "segments", "v0", "amplitude", "frequency"});
  std::string type = "permanent";
  if (const json* ty = member(t, "type")) {
    if (!ty->is_string()) fail("trajectory.type", "expected a string");
    type = ty->get<std::string>();
  } else if (member(t, "segments") != nullptr) {
    type = "piecewise";
  }
  const GroupElement origin =
      GroupElement::from_vector(triple(t, "origin", "trajectory.origin", Eigen::Vector3d::Zero()));
  echo["origin"] = to_json(origin);
  echo["type"] = type;

  if (type == "permanent" || type == "circle" || type == "line") {
    const double u = number(t, "u", "trajectory.u", 1.0);
    const double v = type == "line" ? 0.0 : number(t, "v", "trajectory.v", 0.5);
    if (type == "line" && member(t, "v") != nullptr && t["v"] != 0.0) {
      fail("trajectory.v", "a line requires v = 0");
    }
    if (u == 0.0) fail("trajectory.u", "must satisfy u != 0");
    echo["u"] = u;
    echo["v"] = v;
    return PermanentTrajectory(u, v, origin);
  }
  if (type == "piecewise") {
    const json* segs = member(t, "segments");
    if (segs == nullptr || !segs->is_array() || segs->empty()) {
      fail("trajectory.segments", "expected a non-empty array");
    }
    std::vector<PiecewiseTrajectory::Segment> out;
    json seg_echo = json::array();
    for (std::size_t i = 0; i < segs->size(); ++i) {
      const std::string path = "trajectory.segments[" + std::to_string(i) + "]";
      const json& s = (*segs)[i];
      if (!s.is_object()) fail(path, "expected an object");
      reject_unknown(s, path, {"u", "v", "duration"});
      if (member(s, "duration") == nullptr) fail(path + ".duration", "required");
      const PiecewiseTrajectory::Segment seg{number(s, "u", path + ".u", 1.0),
                                             number(s, "v", path + ".v", 0.0),
                                             number(s, "duration", path + ".duration", 0.0)};
      if (seg.u == 0.0) fail(path + ".u", "must satisfy u != 0");
      if (!(seg.duration > 0.0)) fail(path + ".duration", "must satisfy duration > 0");
      out.push_back(seg);
      seg_echo.push_back({{"u", seg.u}, {"v", seg.v}, {"duration", seg.duration}});
    }
    echo["segments"] = seg_echo;
    return PiecewiseTrajectory(std::move(out), origin);
  }
  if (type == "sinusoid") {
    const double u = number(t, "u", "trajectory.u", 1.0);
    const double v0 = number(t, "v0", "trajectory.v0", 0.5);
    const double amp = number(t, "amplitude", "trajectory.amplitude", 0.3);
    const double freq = number(t, "frequency", "trajectory.frequency", 1.0);
    if (u == 0.0) fail("trajectory.u", "must satisfy u != 0");
    echo["u"] = u;
    echo["v0"] = v0;
    echo["amplitude"] = amp;
    echo["frequency"] = freq;
    return SteeringSinusoid(u, v0, amp, freq, origin);
  }
  fail("trajectory.type", "must be one of permanent, circle, line, piecewise, sinusoid");
}

LandmarkSet parse_landmarks(const json* v, json& echo) {
  if (v == nullptr) {
    LandmarkSet lm = standard_landmarks();
    for (const auto& p : lm.points()) echo.push_back({p.x(), p.y()});
    return lm;
  }
  if (!v->is_array()) fail("landmarks", "expected an array of [x, y] pairs");
  std::vector<Eigen::Vector2d> pts;
  for (std::size_t i = 0; i < v->size(); ++i) {
    const auto xy = numbers((*v)[i], "landmarks[" + std::to_string(i) + "]");
    if (xy.size() != 2) fail("landmarks[" + std::to_string(i) + "]", "expected [x, y]");
    pts.emplace_back(xy[0], xy[1]);
    echo.push_back({xy[0], xy[1]});
  }
  if (pts.size() < 3) fail("landmarks", "need at least 3 landmarks (p >= 3)");
  if (collinearity_ratio(pts) < kCollinearityThreshold) {
    fail("landmarks", "landmarks are collinear (smallest singular value below threshold)");
  }
  return LandmarkSet(std::move(pts));
}

double positive(const json& obj, const char* key, const std::string& path, double fallback) {
  const double v = number(obj, key, path, fallback);
  if (!(v > 0.0)) fail(path, std::string("must satisfy ") + key + " > 0");
  return v;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("document: malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("document: expected a JSON object");
  reject_unknown(root, "",
                 {"trajectory", "landmarks", "gains", "initial", "dt", "t_end", "probe_times",
                  "ekf", "mech"});

  json echo = json::object();

  json traj_echo = json::object();
  Reference reference = parse_trajectory(object_or_empty(root, "trajectory", "trajectory"),
                                         traj_echo);
  echo["trajectory"] = traj_echo;

  json lm_echo = json::array();
  LandmarkSet landmarks = parse_landmarks(member(root, "landmarks"), lm_echo);
  echo["landmarks"] = lm_echo;

  const json& gains = object_or_empty(root, "gains", "gains");
  reject_unknown(gains, "gains", {"k1", "k2", "k3", "l1", "l2", "l3"});
  const ControllerGains kg{positive(gains, "k1", "gains.k1", 1.0),
                           positive(gains, "k2", "gains.k2", 1.0),
                           positive(gains, "k3", "gains.k3", 1.0)};
  const ObserverGains og{positive(gains, "l1", "gains.l1", 1.0),
                         positive(gains, "l2", "gains.l2", 1.0),
                         positive(gains, "l3", "gains.l3", 1.0)};
  echo["gains"] = {{"k1", kg.k1}, {"k2", kg.k2}, {"k3", kg.k3},
                   {"l1", og.l1}, {"l2", og.l2}, {"l3", og.l3}};

  const double dt = positive(root, "dt", "dt", 1e-3);
  const double t_end = positive(root, "t_end", "t_end", 30.0);
  echo["dt"] = dt;
  echo["t_end"] = t_end;

  // Initial conditions: absolute poses, or invariant errors relative to the
  // reference start (tracking) and to the true pose (estimation).
  const json& init = object_or_empty(root, "initial", "initial");
  reject_unknown(init, "initial", {"pose", "estimate", "tracking_error", "estimation_error"});
  if (member(init, "pose") && member(init, "tracking_error")) {
    fail("initial", "give either pose or tracking_error, not both");
  }
  if (member(init, "estimate") && member(init, "estimation_error")) {
    fail("initial", "give either estimate or estimation_error, not both");
  }
  const GroupElement start = reference_pose(reference, 0.0);
  GroupElement pose = start;
  if (member(init, "pose")) {
    pose = GroupElement::from_vector(triple(init, "pose", "initial.pose", {}));
  } else if (member(init, "tracking_error")) {
    pose = compose(start, GroupElement::from_vector(
                              triple(init, "tracking_error", "initial.tracking_error", {})));
  }
  GroupElement estimate = pose;
  if (member(init, "estimate")) {
    estimate = GroupElement::from_vector(triple(init, "estimate", "initial.estimate", {}));
  } else if (member(init, "estimation_error")) {
    estimate = compose(pose, GroupElement::from_vector(triple(
                                 init, "estimation_error", "initial.estimation_error", {})));
  }
  echo["initial"] = {{"pose", to_json(pose)}, {"estimate", to_json(estimate)}};

  ScenarioConfig cfg{Scenario{std::move(reference), std::move(landmarks), kg, og, pose, estimate,
                              t_end, dt},
                     std::nullopt, EkfOptions{}, MechOptions{}, json::object()};
  cfg.scenario.validate();

  if (const json* pt = member(root, "probe_times")) {
    auto times = numbers(*pt, "probe_times");
    if (times.size() < 2) fail("probe_times", "need at least 2 times");
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] < 0.0) fail("probe_times[" + std::to_string(i) + "]", "must be >= 0");
      if (i > 0 && !(times[i] > times[i - 1])) {
        fail("probe_times", "must be strictly increasing");
      }
    }
    echo["probe_times"] = times;
    cfg.probe_times = std::move(times);
  }

  const json& ekf = object_or_empty(root, "ekf", "ekf");
  reject_unknown(ekf, "ekf", {"q", "r", "p0"});
  cfg.ekf = {positive(ekf, "q", "ekf.q", 1e-3), positive(ekf, "r", "ekf.r", 1e-2),
             positive(ekf, "p0", "ekf.p0", 1e-3)};
  echo["ekf"] = {{"q", cfg.ekf.q}, {"r", cfg.ekf.r}, {"p0", cfg.ekf.p0}};

  const json& mech = object_or_empty(root, "mech", "mech");
  reject_unknown(mech, "mech",
                 {"inertia", "damping", "mass", "offset", "gravity", "xi_r", "times",
                  "energy_velocity", "energy_t_end", "dt"});
  MechOptions& m = cfg.mech;
  m.inertia = triple(mech, "inertia", "mech.inertia", m.inertia);
  for (int i = 0; i < 3; ++i) {
    if (!(m.inertia[i] > 0.0)) fail("mech.inertia", "principal moments must be > 0");
  }
  m.damping = triple(mech, "damping", "mech.damping", m.damping);
  for (int i = 0; i < 3; ++i) {
    if (!(m.damping[i] > 0.0)) fail("mech.damping", "damping coefficients must be > 0");
  }
  m.mass = positive(mech, "mass", "mech.mass", m.mass);
  m.offset = triple(mech, "offset", "mech.offset", m.offset);
  m.gravity = triple(mech, "gravity", "mech.gravity", m.gravity);
  m.xi_r = triple(mech, "xi_r", "mech.xi_r", m.xi_r);
  if (const json* mt = member(mech, "times")) {
    m.times = numbers(*mt, "mech.times");
    if (m.times.size() < 2) fail("mech.times", "need at least 2 times");
  }
  m.energy_velocity = triple(mech, "energy_velocity", "mech.energy_velocity", m.energy_velocity);
  m.energy_t_end = positive(mech, "energy_t_end", "mech.energy_t_end", m.energy_t_end);
  m.dt = positive(mech, "dt", "mech.dt", m.dt);
  echo["mech"] = {{"inertia", to_json(m.inertia)},
                  {"damping", to_json(m.damping)},
                  {"mass", m.mass},
                  {"offset", to_json(m.offset)},
                  {"gravity", to_json(m.gravity)},
                  {"xi_r", to_json(m.xi_r)},
                  {"times", m.times},
                  {"energy_velocity", to_json(m.energy_velocity)},
                  {"energy_t_end", m.energy_t_end},
                  {"dt", m.dt}};

  cfg.resolved = std::move(echo);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void override_timing(ScenarioConfig& config, std::optional<double> dt,
                     std::optional<double> t_end) {
  if (dt) {
    if (!(*dt > 0.0)) throw ConfigError("--dt: must satisfy dt > 0");
    config.scenario.dt = *dt;
    config.resolved["dt"] = *dt;
  }
  if (t_end) {
    if (!(*t_end > 0.0)) throw ConfigError("--t-end: must satisfy t_end > 0");
    config.scenario.t_end = *t_end;
    config.resolved["t_end"] = *t_end;
  }
  config.scenario.validate();
}

std::string scenario_digest(const ScenarioConfig& config) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (const unsigned char c : config.resolved.dump()) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace invsep
