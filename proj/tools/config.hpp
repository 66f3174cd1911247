#ifndef LAMBSCAT_TOOLS_CONFIG_HPP
#define LAMBSCAT_TOOLS_CONFIG_HPP

#include "lambscat/dynamics.hpp"
#include "lambscat/model.hpp"
#include "lambscat/profile.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lambscat::cli {

struct RawModel {
  std::vector<double> eigenvalues;
  std::vector<double> coupling;
  std::optional<std::vector<double>> metric;
  double theta = 0.0;
  friend bool operator==(const RawModel&, const RawModel&) = default;
};

struct LambChainPreset {
  std::vector<double> masses;
  std::vector<double> springs;
  double tension = 1.0;
  friend bool operator==(const LambChainPreset&, const LambChainPreset&) = default;
};

struct PauliFierzPreset {
  double m = 1.0;
  double omega = 1.0;
  double e = 1.0;
  friend bool operator==(const PauliFierzPreset&, const PauliFierzPreset&) = default;
};

struct AcousticShellPreset {
  double M = 1.0;
  double K = 1.0;
  double R0 = 1.0;
  friend bool operator==(const AcousticShellPreset&, const AcousticShellPreset&) = default;
};

using ModelBlock = std::variant<RawModel, LambChainPreset, PauliFierzPreset, AcousticShellPreset>;

struct DataBlock {
  DataMode mode = DataMode::Compatible;
  FieldProfile phi0;
  FieldProfile phidot0;
  std::optional<std::vector<double>> y0;
  std::optional<std::vector<double>> ydot0;
  friend bool operator==(const DataBlock&, const DataBlock&) = default;
};

struct SnapshotGrid {
  double x_min = 0.0;
  double x_max = 20.0;
  int points = 201;
  friend bool operator==(const SnapshotGrid&, const SnapshotGrid&) = default;
};

struct SimBlock {
  double T = 20.0;
  double dt = 1e-3;
  std::vector<double> snapshot_times;
  SnapshotGrid snapshot_grid;
  /// trajectory.csv keeps every stride-th step
  int output_stride = 10;
  std::optional<std::pair<double, double>> decay_window;  // default [T/2, T]
  friend bool operator==(const SimBlock&, const SimBlock&) = default;
};

struct ScatterBlock {
  double X = 60.0;
  double h = 0.01;
  double dt = 0.0;
  double covariance_time = 1.0;
  double truncation_tolerance = 1e-6;
  double kappa_max = 10.0;
  int kappa_points = 401;
  friend bool operator==(const ScatterBlock&, const ScatterBlock&) = default;
};

struct LPBlock {
  double t_max = 10.0;
  int samples = 101;
  friend bool operator==(const LPBlock&, const LPBlock&) = default;
};

struct NonlinearBlock {
  std::string potential;
  friend bool operator==(const NonlinearBlock&, const NonlinearBlock&) = default;
};

struct OutputBlock {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "json"};
  friend bool operator==(const OutputBlock&, const OutputBlock&) = default;
};

struct RunConfig {
  ModelBlock model;
  std::optional<DataBlock> data;
  std::optional<SimBlock> sim;
  std::optional<ScatterBlock> scatter;
  std::optional<LPBlock> lp;
  std::optional<NonlinearBlock> nonlinear;
  OutputBlock output;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws Error(ConfigError) with a path to the offending key.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Canonical form: every field spelled out, re-parses to an equal RunConfig.
nlohmann::json to_json(const RunConfig& config);

/// Normalized model for the model block (presets apply their parameter maps).
NormalizedModel build_model(const ModelBlock& block);
std::string model_kind(const ModelBlock& block);

/// Initial data, applying the class-D lift or the compatibility check.
InitialData build_data(const NormalizedModel& model, const DataBlock& block);

/// Sets the value at a dotted path such as "model.theta" or
/// "model.lamb_chain.masses.0"; ConfigError if the path does not exist.
void set_path(nlohmann::json& j, const std::string& path, double value);

}  // namespace lambscat::cli

#endif  // LAMBSCAT_TOOLS_CONFIG_HPP
