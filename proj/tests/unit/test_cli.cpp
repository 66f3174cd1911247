#include <doctest.h>

#include "commands.hpp"
#include "config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lambscat;
using namespace lambscat::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lambscat_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidModel;
}

json lamb_json() {
  return json::parse(R"({
    "model": {"lamb_chain": {"masses": [1], "springs": [1], "tension": 1}},
    "data": {"mode": "class_d",
             "phi0": [{"type": "gaussian", "amplitude": 1, "center": 5, "sigma": 1}],
             "phidot0": []},
    "sim": {"T": 2, "dt": 0.01},
    "scatter": {"X": 30, "h": 0.05},
    "lp": {"t_max": 2, "samples": 5}
  })");
}

}  // namespace

TEST_CASE("every example config round-trips through the canonical form") {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(LAMBSCAT_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const RunConfig c = load_config(entry.path().string());
    const json canon = to_json(c);
    CHECK(parse_config(canon) == c);
    CHECK(to_json(parse_config(canon)) == canon);
    ++seen;
  }
  CHECK(seen >= 6);
}

TEST_CASE("preset parameter maps") {
  const double pi = std::numbers::pi;
  const auto pf = build_model(PauliFierzPreset{2.0, 1.5, 0.5});
  // g = 2/(3 m w^2), lambda = -w^2, w = e w^2, theta = 2 e^2 / (3 m)
  CHECK(pf.lambda()(0) == doctest::Approx(-2.25));
  CHECK(pf.c()(0) == doctest::Approx(std::sqrt(2.0 / (3 * 2 * 2.25)) * 0.5 * 2.25));
  CHECK(pf.theta() == doctest::Approx(2 * 0.25 / 6));

  const auto sh = build_model(AcousticShellPreset{1.0, 1.0, 1.0});
  CHECK(sh.lambda()(0) == doctest::Approx(-0.5));
  CHECK(sh.c()(0) == doctest::Approx(-std::sqrt(pi)));
  CHECK(sh.theta() == doctest::Approx(-0.5));

  const auto lc = build_model(LambChainPreset{{2}, {2}, 1});
  CHECK(lc.lambda()(0) == doctest::Approx(-1.0));
  CHECK(lc.c()(0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(model_kind(LambChainPreset{}) == "lamb_chain");
  CHECK(model_kind(RawModel{}) == "raw");
}

TEST_CASE("config validation") {
  json j = lamb_json();
  j["sim"]["dtt"] = 1;
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigError);

  j = lamb_json();
  j["sim"]["dt"] = -1;
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigError);

  j = lamb_json();
  j["model"]["pauli_fierz"] = {{"m", 1}, {"omega", 1}, {"e", 1}};
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigError);

  j = lamb_json();
  j["data"]["y0"] = {0.0};
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigError);

  j = lamb_json();
  j["data"]["phi0"][0]["type"] = "lorentzian";
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::ConfigError);

  CHECK(code_of([] { load_config("/nonexistent/lambscat.json"); }) == ErrorCode::ConfigError);
}

TEST_CASE("dotted paths and sweeps") {
  json j = lamb_json();
  set_path(j, "model.lamb_chain.masses.0", 3.0);
  CHECK(j["model"]["lamb_chain"]["masses"][0] == 3.0);
  set_path(j, "sim.T", 7.0);
  CHECK(j["sim"]["T"] == 7.0);
  CHECK(code_of([&] { set_path(j, "sim.nothing", 1.0); }) == ErrorCode::ConfigError);
  CHECK(code_of([&] { set_path(j, "model.lamb_chain.masses.4", 1.0); }) == ErrorCode::ConfigError);

  const auto s = parse_sweep("model.theta=-1:0:5");
  CHECK(s.key == "model.theta");
  CHECK(s.steps == 5);
  CHECK(s.value(0) == -1.0);
  CHECK(s.value(2) == -0.5);
  CHECK(s.value(4) == 0.0);
  CHECK(code_of([] { parse_sweep("theta=1:2"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_sweep("theta"); }) == ErrorCode::ConfigError);
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(ErrorCode::ConfigError) == 2);
  CHECK(exit_code_for(ErrorCode::DuplicateEigenvalue) == 2);
  CHECK(exit_code_for(ErrorCode::ConstraintViolation) == 2);
  CHECK(exit_code_for(ErrorCode::PointSpectrumPresent) == 4);
  CHECK(exit_code_for(ErrorCode::NoConvergence) == 3);
  CHECK(exit_code_for(ErrorCode::InsufficientDecay) == 3);
  CHECK(parse_command("scatter") == Command::Scatter);
  CHECK_FALSE(parse_command("fly").has_value());
}

TEST_CASE("analyze writes the boundary polynomial") {
  const auto dir = scratch("analyze");
  std::ostringstream log, err;
  REQUIRE(run_command(Command::Analyze, parse_config(lamb_json()), dir, log, err) == 0);
  const json a = json::parse(slurp(dir / "analysis.json"));
  CHECK(a["polynomial"]["closed_form"] == json({1.0, -1.0, 1.0}));
  CHECK(a["pp_empty"] == true);
  CHECK(a["roots"]["resonances"].size() == 2);
  CHECK(err.str().empty());
}

TEST_CASE("scatter refuses a model with a bound state") {
  json j = lamb_json();
  j["model"] = {{"pauli_fierz", {{"m", 1}, {"omega", 1}, {"e", 1}}}};
  const auto dir = scratch("pf");
  std::ostringstream log, err;
  CHECK(run_command(Command::Scatter, parse_config(j), dir, log, err) == 4);
  CHECK(err.str().rfind("error[PointSpectrumPresent]", 0) == 0);
  CHECK(run_command(Command::LP, parse_config(j), dir, log, err) == 4);
}

TEST_CASE("simulate with zero data") {
  json j = lamb_json();
  j["data"]["phi0"] = json::array();
  const auto dir = scratch("zero");
  std::ostringstream log, err;
  REQUIRE(run_command(Command::Simulate, parse_config(j), dir, log, err) == 0);
  std::istringstream csv(slurp(dir / "trajectory.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,y1,ydot1,b,E,E_drift");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    while (std::getline(row, cell, ',')) CHECK(std::stod(cell) == 0.0);
    ++rows;
  }
  CHECK(rows > 10);
}

TEST_CASE("scatter output is deterministic") {
  const auto d1 = scratch("s1"), d2 = scratch("s2");
  std::ostringstream log, err;
  REQUIRE(run_command(Command::Scatter, parse_config(lamb_json()), d1, log, err) == 0);
  REQUIRE(run_command(Command::Scatter, parse_config(lamb_json()), d2, log, err) == 0);
  CHECK(slurp(d1 / "reps.csv") == slurp(d2 / "reps.csv"));
  CHECK(slurp(d1 / "checks.json") == slurp(d2 / "checks.json"));

  std::istringstream tf(slurp(d1 / "transfer.csv"));
  std::string line;
  std::getline(tf, line);
  CHECK(line == "kappa,re_s,im_s,abs_s");
  std::getline(tf, line);
  CHECK(line.rfind("0,-1,0,1", 0) == 0);
}
