#include "commands.hpp"

#include "lambscat/lambscat.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace lambscat::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kSchema = 1;

bool wants(const RunConfig& c, const char* format) {
  return std::find(c.output.formats.begin(), c.output.formats.end(), format) != c.output.formats.end();
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path);
  f << j.dump(2) << '\n';
  if (!f) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : f_(path), path_(path) {
    if (!f_) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) f_ << (i ? "," : "") << header[i];
    f_ << '\n';
  }
  void row(const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) f_ << (i ? "," : "") << format_double(v[i]);
    f_ << '\n';
  }

 private:
  std::ofstream f_;
  fs::path path_;
};

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json complex_matrix_json(const Eigen::MatrixXcd& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

json model_json(const RunConfig& c, const NormalizedModel& m) {
  return {{"kind", model_kind(c.model)},
          {"n", m.n()},
          {"lambda", vec_json(m.lambda())},
          {"c", vec_json(m.c())},
          {"theta", m.theta()},
          {"moments", vec_json(m.moments())}};
}

json roots_json(const std::vector<Root>& roots) {
  json a = json::array();
  for (const auto& r : roots) a.push_back({{"re", r.value.real()}, {"im", r.value.imag()}, {"multiplicity", r.multiplicity}});
  return a;
}

std::string vec_text(const Eigen::VectorXd& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v(i));
  return s + ")";
}

void print_model(const RunConfig& c, const NormalizedModel& m, std::ostream& log) {
  log << "model " << model_kind(c.model) << ": n = " << m.n() << ", lambda = " << vec_text(m.lambda())
      << ", c = " << vec_text(m.c()) << ", theta = " << format_double(m.theta()) << '\n';
}

RootSet model_roots(const NormalizedModel& m) { return classify_roots(m, find_roots(build_p_closed_form(m))); }

const DataBlock& need_data(const RunConfig& c, const char* command) {
  if (!c.data) throw Error(ErrorCode::ConfigError, std::string(command) + " needs a data block");
  return *c.data;
}

std::shared_ptr<const PolynomialPotential> make_potential(const RunConfig& c, const NormalizedModel& m) {
  if (!c.nonlinear) return nullptr;
  return std::make_shared<const PolynomialPotential>(c.nonlinear->potential, m.n());
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) {
    const auto colon = w.find(':');
    if (colon == std::string::npos) err << "warning: " << w << '\n';
    else err << "warning[" << w.substr(0, colon) << "]:" << w.substr(colon + 1) << '\n';
  }
}

void analyze(const RunConfig& c, const fs::path& out, std::ostream& log, std::ostream& err) {
  const NormalizedModel m = build_model(c.model);
  print_model(c, m, log);

  const RealPolynomial p = build_p_closed_form(m);
  json poly = {{"degree", p.degree()}, {"expected_degree", m.boundary_degree()}, {"closed_form", vec_json(p.coeffs())}};
  try {
    const RealPolynomial q = build_p_vandermonde(m);
    poly["vandermonde"] = vec_json(q.coeffs());
    poly["max_relative_gap"] = relative_coefficient_gap(q, p);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IllConditioned) throw;
    poly["vandermonde"] = nullptr;
    poly["max_relative_gap"] = nullptr;
    err << "warning[IllConditioned]: " << e.detail() << '\n';
  }

  const RootSet roots = model_roots(m);
  const SpectralData spec = point_spectrum(m);
  const std::vector<double> from_roots = eigenvalues_from_roots(roots);

  json states = json::array();
  for (const auto& s : spec.bound_states) {
    const double x = s.decay_rate;
    const double bw = std::abs(p(std::complex<double>(-x, 0.0))) /
                      std::abs(RealPolynomial(p.coeffs().cwiseAbs())(std::complex<double>(x, 0.0)));
    states.push_back({{"lambda", s.lambda},
                      {"decay_rate", x},
                      {"y", vec_json(s.y)},
                      {"norm_sq", s.norm_sq},
                      {"secular_residual", std::abs(eigen_equation(m, x))},
                      {"polynomial_backward_error", bw}});
  }
  bool consistent = from_roots.size() == spec.eigenvalues.size();
  double gap = 0.0;
  if (consistent)
    for (std::size_t i = 0; i < from_roots.size(); ++i)
      gap = std::max(gap, std::abs(from_roots[i] - spec.eigenvalues[i]) / std::max(1.0, std::abs(spec.eigenvalues[i])));

  const Interval ess = essential_spectrum(m);
  json report = {{"schema", kSchema},
                 {"command", "analyze"},
                 {"model", model_json(c, m)},
                 {"polynomial", poly},
                 {"roots",
                  {{"all", roots_json(roots.roots)},
                   {"eigen_roots", roots_json(roots.eigen_roots)},
                   {"resonances", roots_json(roots.resonances)},
                   {"max_backward_error", roots.max_residual},
                   {"iterations", roots.iterations}}},
                 {"point_spectrum",
                  {{"eigenvalues", spec.eigenvalues},
                   {"eigenvalues_from_roots", from_roots},
                   {"consistent", consistent},
                   {"max_relative_difference", consistent ? json(gap) : json(nullptr)},
                   {"bound_states", states}}},
                 {"pp_empty", spec.pp_empty},
                 {"pp_empty_criterion", pp_empty_check(m)},
                 {"essential_spectrum", {nullptr, ess.upper}}};  // lower end is -inf
  if (wants(c, "json")) write_json(out / "analysis.json", report);

  log << "p (ascending) = " << vec_text(p.coeffs()) << '\n';
  for (const auto& r : roots.roots)
    log << "root " << format_double(r.value.real()) << (r.value.imag() < 0 ? " - " : " + ")
        << format_double(std::abs(r.value.imag())) << "i" << (r.multiplicity > 1 ? " x" + std::to_string(r.multiplicity) : "")
        << (r.value.real() < 0 ? "  [eigenvalue]" : "  [resonance]") << '\n';
  log << "point spectrum:" << (spec.pp_empty ? " empty" : "");
  for (double l : spec.eigenvalues) log << ' ' << format_double(l);
  log << '\n';
  if (!consistent || gap > 1e-8)
    throw Error(ErrorCode::IllConditioned, "eigenvalues from the secular equation and from the roots of p disagree");
}

void simulate(const RunConfig& c, const fs::path& out, std::ostream& log, std::ostream& err) {
  const DataBlock& db = need_data(c, "simulate");
  if (!c.sim) throw Error(ErrorCode::ConfigError, "simulate needs a sim block");
  const SimBlock& sim = *c.sim;
  const NormalizedModel m = build_model(c.model);
  print_model(c, m, log);
  const auto potential = make_potential(c, m);
  const InitialData data = build_data(m, db);

  const Trajectory tr = evolve(m, data, {sim.T, sim.dt, potential});
  report_warnings(tr.warnings(), err);
  std::vector<std::string> notes = tr.warnings();
  if (!potential && !pp_empty_check(m)) {
    const SpectralData spec = point_spectrum(m);
    if (!spec.pp_empty) {
      // a positive eigenvalue lambda of A is a runaway mode growing like exp(sqrt(lambda) t)
      std::string w = "PointSpectrumPresent: runaway mode, the largest eigenvalue " + format_double(spec.eigenvalues.back()) +
                      " grows like exp(" + format_double(std::sqrt(spec.eigenvalues.back())) + " t)";
      report_warnings({w}, err);
      notes.push_back(w);
    }
  }
  const int n = m.n();
  const double e0 = tr.energy()(0);

  if (wants(c, "csv")) {
    std::vector<std::string> header{"t"};
    for (int i = 1; i <= n; ++i) header.push_back("y" + std::to_string(i));
    for (int i = 1; i <= n; ++i) header.push_back("ydot" + std::to_string(i));
    header.insert(header.end(), {"b", "E", "E_drift"});
    CsvWriter traj(out / "trajectory.csv", header);
    for (int k = 0; k <= tr.steps(); ++k) {
      if (k % sim.output_stride != 0 && k != tr.steps()) continue;
      std::vector<double> row{tr.times()[static_cast<std::size_t>(k)]};
      for (int i = 0; i < n; ++i) row.push_back(tr.y()(i, k));
      for (int i = 0; i < n; ++i) row.push_back(tr.ydot()(i, k));
      const double e = tr.energy()(k);
      row.insert(row.end(), {tr.b()(k), e, e0 != 0.0 ? (e - e0) / std::abs(e0) : e - e0});
      traj.row(row);
    }
    CsvWriter snaps(out / "snapshots.csv", {"t", "x", "phi", "phidot"});
    std::vector<double> xs;
    const auto& g = sim.snapshot_grid;
    for (int i = 0; i < g.points; ++i)
      xs.push_back(g.points == 1 ? g.x_min : g.x_min + (g.x_max - g.x_min) * i / (g.points - 1));
    for (double t : sim.snapshot_times)
      for (const auto& s : field_snapshot(tr, t, xs)) snaps.row({t, s.x, s.phi, s.phidot});
  }

  const auto window = sim.decay_window.value_or(std::pair{sim.T / 2.0, sim.T});
  json decay = {{"window", {window.first, window.second}}};
  try {
    const double slope = fit_decay_rate(tr, window.first, window.second);
    decay["slope"] = slope;
    decay["rate"] = -slope;
  } catch (const Error& e) {
    decay["slope"] = nullptr;
    decay["rate"] = nullptr;
    decay["note"] = e.detail();
  }
  if (!potential && pp_empty_check(m)) {
    const double expected = min_resonance_decay(model_roots(m));
    decay["min_re_root"] = expected;
    decay["relative_difference"] =
        decay["rate"].is_null() ? json(nullptr) : json(std::abs(decay["rate"].get<double>() - expected) / expected);
  } else {
    decay["min_re_root"] = nullptr;
    decay["relative_difference"] = nullptr;
  }

  json summary = {{"schema", kSchema},
                  {"command", "simulate"},
                  {"model", model_json(c, m)},
                  {"T", tr.final_time()},
                  {"dt", tr.dt()},
                  {"steps", tr.steps()},
                  {"state_dimension", tr.state_dimension()},
                  {"boundary_degree", m.boundary_degree()},
                  {"energy_initial", e0},
                  {"energy_final", tr.energy()(tr.steps())},
                  {"max_relative_drift", tr.max_relative_drift()},
                  {"max_boundary_residual", tr.max_boundary_residual()},
                  {"decay_fit", decay},
                  {"warnings", notes}};
  if (potential) {
    const GrowthReport g = potential->growth_check();
    summary["nonlinear"] = {{"potential", potential->expression()},
                            {"degree", g.degree},
                            {"growth_condition_satisfied", g.satisfied},
                            {"growth_check_method", g.method}};
  } else {
    summary["nonlinear"] = nullptr;
  }
  if (wants(c, "json")) write_json(out / "summary.json", summary);
  log << "simulated " << tr.steps() << " steps to T = " << format_double(tr.final_time())
      << ", max relative energy drift " << format_double(tr.max_relative_drift()) << '\n';
}

void scatter(const RunConfig& c, const fs::path& out, std::ostream& log, std::ostream&) {
  const DataBlock& db = need_data(c, "scatter");
  const ScatterBlock sb = c.scatter.value_or(ScatterBlock{});
  const NormalizedModel m = build_model(c.model);
  print_model(c, m, log);
  require_pp_empty(m);
  const InitialData data = build_data(m, db);
  ScatterOptions opts{sb.X, sb.h, sb.dt, sb.truncation_tolerance};

  const TranslationRep rep = translation_reps(m, data, opts);
  const TransferFunction tf = make_transfer_function(m);
  const ParsevalCheck pc = parseval_check(rep);
  const double dft_error = scattering_relation_error(rep, tf);
  const double cov = translation_covariance_check(m, data, sb.covariance_time, opts);

  std::vector<double> kappas;
  for (int i = 0; i < sb.kappa_points; ++i) kappas.push_back(sb.kappa_max * i / (sb.kappa_points - 1));
  const auto s = transfer_eval(tf, kappas);
  double unimod = 0.0;
  for (const auto& v : s) unimod = std::max(unimod, std::abs(std::abs(v) - 1.0));

  if (wants(c, "csv")) {
    CsvWriter reps(out / "reps.csv", {"x", "f_minus", "f_plus"});
    for (std::size_t j = 0; j < rep.x.size(); ++j) {
      const auto i = static_cast<Eigen::Index>(j);
      reps.row({rep.x[j], rep.f_minus(i), rep.f_plus(i)});
    }
    CsvWriter tfile(out / "transfer.csv", {"kappa", "re_s", "im_s", "abs_s"});
    for (std::size_t j = 0; j < kappas.size(); ++j) tfile.row({kappas[j], s[j].real(), s[j].imag(), std::abs(s[j])});
  }
  json checks = {{"schema", kSchema},
                 {"command", "scatter"},
                 {"model", model_json(c, m)},
                 {"X", rep.X},
                 {"h", rep.h},
                 {"dt", opts.step()},
                 {"energy_norm_sq", rep.energy_norm_sq},
                 {"norm_sq_minus", pc.norm_sq_minus},
                 {"norm_sq_plus", pc.norm_sq_plus},
                 {"parseval_sum_error", pc.sum_error},
                 {"parseval_minus_error", pc.minus_error},
                 {"truncation_mass", rep.truncation_mass},
                 {"dft_relation_error", dft_error},
                 {"covariance", {{"t", sb.covariance_time}, {"sup_error", cov}}},
                 {"max_unimodularity_error", unimod}};
  if (wants(c, "json")) write_json(out / "checks.json", checks);
  log << "Parseval errors " << format_double(pc.sum_error) << " / " << format_double(pc.minus_error)
      << ", DFT relation error " << format_double(dft_error) << '\n';
}

void lp(const RunConfig& c, const fs::path& out, std::ostream& log, std::ostream&) {
  const LPBlock lb = c.lp.value_or(LPBlock{});
  const NormalizedModel m = build_model(c.model);
  print_model(c, m, log);
  require_pp_empty(m);
  const LPSemigroup sg = build_lp_semigroup(model_roots(m));

  json samples = json::array();
  double max_dev = 0.0, max_norm = 0.0, prev = 1.0;
  bool monotone = true;
  for (int i = 0; i < lb.samples; ++i) {
    const double t = lb.t_max * i / (lb.samples - 1);
    const LPEvolveCheck ch = lp_evolve_check(sg, t);
    samples.push_back({{"t", t}, {"g_norm", ch.g_norm}, {"deviation", ch.deviation}});
    max_dev = std::max(max_dev, ch.deviation);
    max_norm = std::max(max_norm, ch.g_norm);
    monotone = monotone && ch.g_norm <= prev * (1.0 + 1e-10);
    prev = ch.g_norm;
  }
  json report = {{"schema", kSchema},
                 {"command", "lp"},
                 {"model", model_json(c, m)},
                 {"dim", sg.dim},
                 {"degree", m.boundary_degree()},
                 {"roots", roots_json(sg.roots)},
                 {"B", complex_matrix_json(sg.B)},
                 {"gram", complex_matrix_json(sg.gram)},
                 {"dissipativity_margin", dissipativity_margin(sg)},
                 {"max_deviation", max_dev},
                 {"max_g_norm", max_norm},
                 {"monotone", monotone},
                 {"samples", samples}};
  if (wants(c, "json")) write_json(out / "lp.json", report);
  log << "dim K = " << sg.dim << ", max |exp(-tB)|_G = " << format_double(max_norm) << '\n';
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::optional<Command> parse_command(const std::string& name) {
  if (name == "analyze") return Command::Analyze;
  if (name == "simulate") return Command::Simulate;
  if (name == "scatter") return Command::Scatter;
  if (name == "lp") return Command::LP;
  return std::nullopt;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::Analyze: return "analyze";
    case Command::Simulate: return "simulate";
    case Command::Scatter: return "scatter";
    case Command::LP: return "lp";
  }
  return "?";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidModel:
    case ErrorCode::DuplicateEigenvalue:
    case ErrorCode::ZeroCoupling:
    case ErrorCode::DegenerateChain:
    case ErrorCode::ConstraintViolation:
      return 2;
    case ErrorCode::PointSpectrumPresent:
      return 4;
    default:
      return 3;
  }
}

int run_command(Command command, const RunConfig& config, const fs::path& out, std::ostream& log,
                std::ostream& err) {
  try {
    fs::create_directories(out);
    switch (command) {
      case Command::Analyze: analyze(config, out, log, err); break;
      case Command::Simulate: simulate(config, out, log, err); break;
      case Command::Scatter: scatter(config, out, log, err); break;
      case Command::LP: lp(config, out, log, err); break;
    }
    return 0;
  } catch (const Error& e) {
    err << "error[" << to_string(e.code()) << "]: " << e.detail() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error[ConfigError]: " << e.what() << '\n';
    return 2;
  }
}

SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  auto bad = [&] { return Error(ErrorCode::ConfigError, "--sweep expects key=a:b:steps, got \"" + text + "\""); };
  if (eq == std::string::npos || eq == 0) throw bad();
  SweepSpec s;
  s.key = text.substr(0, eq);
  std::stringstream ss(text.substr(eq + 1));
  std::string a, b, n;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n) || n.find(':') != std::string::npos)
    throw bad();
  try {
    std::size_t pa = 0, pb = 0, pn = 0;
    s.from = std::stod(a, &pa);
    s.to = std::stod(b, &pb);
    s.steps = std::stoi(n, &pn);
    if (pa != a.size() || pb != b.size() || pn != n.size()) throw bad();
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (s.steps < 1 || !std::isfinite(s.from) || !std::isfinite(s.to)) throw bad();
  return s;
}

int run_sweep(Command command, const RunConfig& config, const SweepSpec& sweep, const fs::path& out, std::ostream& log,
              std::ostream& err) {
  // validate every variant up front so nothing runs on a bad sweep
  const json base = to_json(config);
  std::vector<RunConfig> configs;
  for (int i = 0; i < sweep.steps; ++i) {
    json j = base;
    set_path(j, sweep.key, sweep.value(i));
    configs.push_back(parse_config(j));
  }

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LAMBSCAT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) workers = std::min<unsigned>(workers, static_cast<unsigned>(cap));
  }
  workers = std::min<unsigned>(workers, static_cast<unsigned>(sweep.steps));

  std::vector<int> codes(configs.size(), 0);
  std::vector<std::string> logs(configs.size()), errs(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < configs.size();) {
      char dir[32];
      std::snprintf(dir, sizeof dir, "sweep_%03zu", i);
      std::ostringstream l, e;
      codes[i] = run_command(command, configs[i], out / dir, l, e);
      logs[i] = l.str();
      errs[i] = e.str();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  json runs = json::array();
  int result = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    char dir[32];
    std::snprintf(dir, sizeof dir, "sweep_%03zu", i);
    log << dir << " " << sweep.key << " = " << format_double(sweep.value(static_cast<int>(i))) << " exit " << codes[i]
        << '\n'
        << logs[i];
    err << errs[i];
    runs.push_back({{"index", i},
                    {"directory", dir},
                    {"value", sweep.value(static_cast<int>(i))},
                    {"exit_code", codes[i]},
                    {"stderr", errs[i]}});
    if (result == 0) result = codes[i];
  }
  fs::create_directories(out);
  write_json(out / "sweep.json",
             {{"schema", kSchema}, {"command", command_name(command)}, {"key", sweep.key}, {"runs", runs}});
  return result;
}

}  // namespace lambscat::cli
