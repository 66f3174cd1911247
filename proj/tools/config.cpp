#include "config.hpp"

#include "lambscat/errors.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace lambscat::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ConfigError, path + ": " + what);
}

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  require_object(j, path);
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(join_path(path, key), "unknown key");
  }
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

double number(const json& j, const std::string& path, const char* key, std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    fail(join_path(path, key), "missing");
  }
  return as_number(j.at(key), join_path(path, key));
}

int integer(const json& j, const std::string& path, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) fail(join_path(path, key), "expected an integer");
  return v.get<int>();
}

std::vector<double> vector(const json& j, const std::string& path, const char* key) {
  const std::string p = join_path(path, key);
  if (!j.contains(key)) fail(p, "missing");
  const auto& v = j.at(key);
  if (!v.is_array()) fail(p, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], p + "." + std::to_string(i)));
  return out;
}

void require_positive(double x, const std::string& path) {
  if (!(x > 0.0)) fail(path, "must be positive");
}

ModelBlock parse_model(const json& j) {
  const std::string path = "model";
  require_object(j, path);
  for (const char* preset : {"lamb_chain", "pauli_fierz", "acoustic_shell"}) {
    if (!j.contains(preset)) continue;
    if (j.size() != 1) fail(path, std::string("a preset block must be the only key, found extra keys next to ") + preset);
    const json& b = j.at(preset);
    const std::string p = join_path(path, preset);
    if (std::string(preset) == "lamb_chain") {
      check_keys(b, p, {"masses", "springs", "tension"});
      LambChainPreset c{vector(b, p, "masses"), vector(b, p, "springs"), number(b, p, "tension", 1.0)};
      if (c.masses.empty()) fail(p + ".masses", "must not be empty");
      if (c.masses.size() != c.springs.size()) fail(p, "masses and springs must have the same length");
      for (std::size_t i = 0; i < c.masses.size(); ++i) {
        require_positive(c.masses[i], p + ".masses." + std::to_string(i));
        require_positive(c.springs[i], p + ".springs." + std::to_string(i));
      }
      require_positive(c.tension, p + ".tension");
      return c;
    }
    if (std::string(preset) == "pauli_fierz") {
      check_keys(b, p, {"m", "omega", "e"});
      PauliFierzPreset pf{number(b, p, "m"), number(b, p, "omega"), number(b, p, "e")};
      require_positive(pf.m, p + ".m");
      require_positive(pf.omega, p + ".omega");
      if (pf.e == 0.0) fail(p + ".e", "must be nonzero (zero charge decouples the oscillator)");
      return pf;
    }
    check_keys(b, p, {"M", "K", "R0"});
    AcousticShellPreset s{number(b, p, "M"), number(b, p, "K"), number(b, p, "R0")};
    require_positive(s.M, p + ".M");
    require_positive(s.K, p + ".K");
    require_positive(s.R0, p + ".R0");
    return s;
  }
  check_keys(j, path, {"eigenvalues", "coupling", "metric", "theta"});
  RawModel r{vector(j, path, "eigenvalues"), vector(j, path, "coupling"), std::nullopt, number(j, path, "theta", 0.0)};
  if (r.eigenvalues.empty()) fail(path + ".eigenvalues", "must not be empty");
  if (r.coupling.size() != r.eigenvalues.size()) fail(path + ".coupling", "length must match eigenvalues");
  if (j.contains("metric")) {
    r.metric = vector(j, path, "metric");
    if (r.metric->size() != r.eigenvalues.size()) fail(path + ".metric", "length must match eigenvalues");
    for (std::size_t i = 0; i < r.metric->size(); ++i) require_positive((*r.metric)[i], path + ".metric." + std::to_string(i));
  }
  return r;
}

FieldProfile parse_profile(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of profile terms");
  std::vector<FieldProfile::Gaussian> gs;
  std::vector<FieldProfile::Bump> bs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& t = j[i];
    const std::string p = path + "." + std::to_string(i);
    require_object(t, p);
    if (!t.contains("type") || !t.at("type").is_string()) fail(p + ".type", "expected \"gaussian\" or \"bump\"");
    const std::string type = t.at("type").get<std::string>();
    if (type == "gaussian") {
      check_keys(t, p, {"type", "amplitude", "center", "sigma", "power"});
      const int power = integer(t, p, "power", 0);
      if (power < 0) fail(p + ".power", "must be >= 0");
      gs.push_back({number(t, p, "amplitude"), number(t, p, "center"), number(t, p, "sigma"), power});
    } else if (type == "bump") {
      check_keys(t, p, {"type", "amplitude", "center", "radius"});
      bs.push_back({number(t, p, "amplitude"), number(t, p, "center"), number(t, p, "radius")});
    } else {
      fail(p + ".type", "expected \"gaussian\" or \"bump\", got \"" + type + "\"");
    }
  }
  try {
    return FieldProfile(std::move(gs), std::move(bs));
  } catch (const Error& e) {
    fail(path, e.detail());
  }
}

DataBlock parse_data(const json& j) {
  const std::string path = "data";
  check_keys(j, path, {"mode", "phi0", "phidot0", "y0", "ydot0"});
  DataBlock d;
  if (j.contains("mode")) {
    const auto& m = j.at("mode");
    if (!m.is_string()) fail(path + ".mode", "expected \"compatible\" or \"class_d\"");
    const std::string s = m.get<std::string>();
    if (s == "compatible") d.mode = DataMode::Compatible;
    else if (s == "class_d") d.mode = DataMode::ClassD;
    else fail(path + ".mode", "expected \"compatible\" or \"class_d\", got \"" + s + "\"");
  }
  if (j.contains("phi0")) d.phi0 = parse_profile(j.at("phi0"), path + ".phi0");
  if (j.contains("phidot0")) d.phidot0 = parse_profile(j.at("phidot0"), path + ".phidot0");
  if (j.contains("y0")) d.y0 = vector(j, path, "y0");
  if (j.contains("ydot0")) d.ydot0 = vector(j, path, "ydot0");
  if (d.mode == DataMode::ClassD && (d.y0 || d.ydot0))
    fail(path, "class_d data derives y0 and ydot0 from the field; remove them");
  return d;
}

SimBlock parse_sim(const json& j) {
  const std::string path = "sim";
  check_keys(j, path, {"T", "dt", "snapshot_times", "snapshot_grid", "output_stride", "decay_window"});
  SimBlock s;
  s.T = number(j, path, "T", s.T);
  s.dt = number(j, path, "dt", s.dt);
  require_positive(s.T, path + ".T");
  require_positive(s.dt, path + ".dt");
  if (s.dt > s.T) fail(path + ".dt", "must not exceed T");
  if (j.contains("snapshot_times")) {
    s.snapshot_times = vector(j, path, "snapshot_times");
    for (std::size_t i = 0; i < s.snapshot_times.size(); ++i)
      if (s.snapshot_times[i] < 0.0 || s.snapshot_times[i] > s.T)
        fail(path + ".snapshot_times." + std::to_string(i), "must lie in [0, T]");
  }
  if (j.contains("snapshot_grid")) {
    const json& g = j.at("snapshot_grid");
    const std::string p = path + ".snapshot_grid";
    check_keys(g, p, {"x_min", "x_max", "points"});
    s.snapshot_grid = {number(g, p, "x_min", 0.0), number(g, p, "x_max", 20.0), integer(g, p, "points", 201)};
    if (s.snapshot_grid.x_min < 0.0) fail(p + ".x_min", "must be >= 0 (the field lives on the half-line)");
    if (!(s.snapshot_grid.x_max >= s.snapshot_grid.x_min)) fail(p + ".x_max", "must be >= x_min");
    if (s.snapshot_grid.points < 1) fail(p + ".points", "must be >= 1");
  }
  s.output_stride = integer(j, path, "output_stride", s.output_stride);
  if (s.output_stride < 1) fail(path + ".output_stride", "must be >= 1");
  if (j.contains("decay_window")) {
    const auto w = vector(j, path, "decay_window");
    if (w.size() != 2 || !(w[0] >= 0.0) || !(w[1] > w[0]) || w[1] > s.T)
      fail(path + ".decay_window", "expected [t0, t1] with 0 <= t0 < t1 <= T");
    s.decay_window = std::pair{w[0], w[1]};
  }
  return s;
}

ScatterBlock parse_scatter(const json& j) {
  const std::string path = "scatter";
  check_keys(j, path, {"X", "h", "dt", "covariance_time", "truncation_tolerance", "kappa_max", "kappa_points"});
  ScatterBlock s;
  s.X = number(j, path, "X", s.X);
  s.h = number(j, path, "h", s.h);
  s.dt = number(j, path, "dt", s.dt);
  s.covariance_time = number(j, path, "covariance_time", s.covariance_time);
  s.truncation_tolerance = number(j, path, "truncation_tolerance", s.truncation_tolerance);
  s.kappa_max = number(j, path, "kappa_max", s.kappa_max);
  s.kappa_points = integer(j, path, "kappa_points", s.kappa_points);
  require_positive(s.X, path + ".X");
  require_positive(s.h, path + ".h");
  if (s.h > s.X) fail(path + ".h", "must not exceed X");
  if (s.dt < 0.0) fail(path + ".dt", "must be >= 0 (0 selects h/10)");
  if (s.covariance_time < 0.0) fail(path + ".covariance_time", "must be >= 0");
  require_positive(s.truncation_tolerance, path + ".truncation_tolerance");
  require_positive(s.kappa_max, path + ".kappa_max");
  if (s.kappa_points < 2) fail(path + ".kappa_points", "must be >= 2");
  return s;
}

LPBlock parse_lp(const json& j) {
  const std::string path = "lp";
  check_keys(j, path, {"t_max", "samples"});
  LPBlock b{number(j, path, "t_max", 10.0), integer(j, path, "samples", 101)};
  require_positive(b.t_max, path + ".t_max");
  if (b.samples < 2) fail(path + ".samples", "must be >= 2");
  return b;
}

NonlinearBlock parse_nonlinear(const json& j) {
  const std::string path = "nonlinear";
  check_keys(j, path, {"potential"});
  if (!j.contains("potential") || !j.at("potential").is_string()) fail(path + ".potential", "expected an expression string");
  return {j.at("potential").get<std::string>()};
}

OutputBlock parse_output(const json& j) {
  const std::string path = "output";
  check_keys(j, path, {"directory", "formats"});
  OutputBlock o;
  if (j.contains("directory")) {
    if (!j.at("directory").is_string()) fail(path + ".directory", "expected a string");
    o.directory = j.at("directory").get<std::string>();
  }
  if (j.contains("formats")) {
    const auto& f = j.at("formats");
    if (!f.is_array()) fail(path + ".formats", "expected an array of \"csv\" / \"json\"");
    o.formats.clear();
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!f[i].is_string() || (f[i] != "csv" && f[i] != "json"))
        fail(path + ".formats." + std::to_string(i), "expected \"csv\" or \"json\"");
      o.formats.push_back(f[i].get<std::string>());
    }
  }
  return o;
}

json profile_json(const FieldProfile& f) {
  json arr = json::array();
  for (const auto& g : f.gaussians())
    arr.push_back({{"type", "gaussian"}, {"amplitude", g.amplitude}, {"center", g.center}, {"sigma", g.sigma}, {"power", g.power}});
  for (const auto& b : f.bumps())
    arr.push_back({{"type", "bump"}, {"amplitude", b.amplitude}, {"center", b.center}, {"radius", b.radius}});
  return arr;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

RunConfig parse_config(const json& j) {
  check_keys(j, "", {"model", "data", "sim", "scatter", "lp", "nonlinear", "output"});
  if (!j.contains("model")) fail("model", "missing");
  RunConfig c{parse_model(j.at("model")), {}, {}, {}, {}, {}, {}};
  if (j.contains("data")) c.data = parse_data(j.at("data"));
  if (j.contains("sim")) c.sim = parse_sim(j.at("sim"));
  if (j.contains("scatter")) c.scatter = parse_scatter(j.at("scatter"));
  if (j.contains("lp")) c.lp = parse_lp(j.at("lp"));
  if (j.contains("nonlinear")) c.nonlinear = parse_nonlinear(j.at("nonlinear"));
  if (j.contains("output")) c.output = parse_output(j.at("output"));
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RawModel>) {
          j["model"] = {{"eigenvalues", m.eigenvalues}, {"coupling", m.coupling}, {"theta", m.theta}};
          if (m.metric) j["model"]["metric"] = *m.metric;
        } else if constexpr (std::is_same_v<T, LambChainPreset>) {
          j["model"]["lamb_chain"] = {{"masses", m.masses}, {"springs", m.springs}, {"tension", m.tension}};
        } else if constexpr (std::is_same_v<T, PauliFierzPreset>) {
          j["model"]["pauli_fierz"] = {{"m", m.m}, {"omega", m.omega}, {"e", m.e}};
        } else {
          j["model"]["acoustic_shell"] = {{"M", m.M}, {"K", m.K}, {"R0", m.R0}};
        }
      },
      c.model);
  if (c.data) {
    json d = {{"mode", c.data->mode == DataMode::ClassD ? "class_d" : "compatible"},
              {"phi0", profile_json(c.data->phi0)},
              {"phidot0", profile_json(c.data->phidot0)}};
    if (c.data->y0) d["y0"] = *c.data->y0;
    if (c.data->ydot0) d["ydot0"] = *c.data->ydot0;
    j["data"] = d;
  }
  if (c.sim) {
    const auto& s = *c.sim;
    j["sim"] = {{"T", s.T},
                {"dt", s.dt},
                {"snapshot_times", s.snapshot_times},
                {"snapshot_grid", {{"x_min", s.snapshot_grid.x_min}, {"x_max", s.snapshot_grid.x_max}, {"points", s.snapshot_grid.points}}},
                {"output_stride", s.output_stride}};
    if (s.decay_window) j["sim"]["decay_window"] = {s.decay_window->first, s.decay_window->second};
  }
  if (c.scatter) {
    const auto& s = *c.scatter;
    j["scatter"] = {{"X", s.X},
                    {"h", s.h},
                    {"dt", s.dt},
                    {"covariance_time", s.covariance_time},
                    {"truncation_tolerance", s.truncation_tolerance},
                    {"kappa_max", s.kappa_max},
                    {"kappa_points", s.kappa_points}};
  }
  if (c.lp) j["lp"] = {{"t_max", c.lp->t_max}, {"samples", c.lp->samples}};
  if (c.nonlinear) j["nonlinear"] = {{"potential", c.nonlinear->potential}};
  j["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
  return j;
}

NormalizedModel build_model(const ModelBlock& block) {
  return std::visit(
      [](const auto& m) -> NormalizedModel {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RawModel>) {
          ModelSpec spec{to_eigen(m.eigenvalues), to_eigen(m.coupling), std::nullopt, m.theta};
          if (m.metric) spec.metric = to_eigen(*m.metric);
          return normalize(spec);
        } else if constexpr (std::is_same_v<T, LambChainPreset>) {
          return build_chain({to_eigen(m.masses), to_eigen(m.springs), m.tension});
        } else if constexpr (std::is_same_v<T, PauliFierzPreset>) {
          const double w2 = m.omega * m.omega;
          ModelSpec spec{Eigen::VectorXd::Constant(1, -w2), Eigen::VectorXd::Constant(1, m.e * w2),
                         Eigen::VectorXd::Constant(1, 2.0 / (3.0 * m.m * w2)), 2.0 * m.e * m.e / (3.0 * m.m)};
          return normalize(spec);
        } else {
          const double w2 = m.K / m.M, pi = std::numbers::pi;
          ModelSpec spec{Eigen::VectorXd::Constant(1, -w2 / (1.0 + m.R0)),
                         Eigen::VectorXd::Constant(1, -4.0 * pi * w2 * m.R0 * m.R0 / (1.0 + m.R0)),
                         Eigen::VectorXd::Constant(1, 1.0 / (4.0 * pi * m.K)), -m.R0 / (1.0 + m.R0)};
          return normalize(spec);
        }
      },
      block);
}

std::string model_kind(const ModelBlock& block) {
  static const char* names[] = {"raw", "lamb_chain", "pauli_fierz", "acoustic_shell"};
  return names[block.index()];
}

InitialData build_data(const NormalizedModel& model, const DataBlock& block) {
  if (block.mode == DataMode::ClassD) return make_class_d_data(model, block.phi0, block.phidot0);
  auto vec = [&](const std::optional<std::vector<double>>& v, const char* key) -> Eigen::VectorXd {
    if (!v) return Eigen::VectorXd::Zero(model.n());
    if (static_cast<int>(v->size()) != model.n())
      fail(std::string("data.") + key, "length " + std::to_string(v->size()) + " does not match n = " + std::to_string(model.n()));
    return to_eigen(*v);
  };
  return make_compatible_data(model, block.phi0, block.phidot0, vec(block.y0, "y0"), vec(block.ydot0, "ydot0"));
}

void set_path(json& j, const std::string& path, double value) {
  json* cur = &j;
  std::stringstream ss(path);
  std::string part, walked;
  while (std::getline(ss, part, '.')) {
    walked = join_path(walked, part);
    if (cur->is_object()) {
      if (!cur->contains(part)) fail(walked, "no such key to sweep");
      cur = &(*cur)[part];
    } else if (cur->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(part);
      } catch (const std::exception&) {
        fail(walked, "expected an array index");
      }
      if (idx >= cur->size()) fail(walked, "index out of range");
      cur = &(*cur)[idx];
    } else {
      fail(walked, "cannot descend into a scalar");
    }
  }
  if (!cur->is_number()) fail(path, "sweep target must be a number");
  *cur = value;
}

}  // namespace lambscat::cli
