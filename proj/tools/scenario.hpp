#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spectral_flrw/integrator.hpp"
#include "spectral_flrw/perturbation.hpp"
#include "spectral_flrw/profiles.hpp"
#include "spectral_flrw/verify.hpp"

namespace sflrw::cli {

enum class Mode { verify, evolve, perturb, sweep };

[[nodiscard]] std::string to_string(Mode m);
/// Throws ConfigError for an unknown name.
[[nodiscard]] Mode mode_from_string(const std::string& name);

struct InitialConditions {
  double a1 = 1.0;
  double a2 = 1.0;
  double v2 = 0.0;
  Branch branch = Branch::plus;

  friend bool operator==(const InitialConditions&, const InitialConditions&) = default;
};

struct ModelSpec {
  ModelKind kind = ModelKind::empty;
  double a0 = 1.0;
  double c1 = 1.0;
  double c2 = 0.0;
  BesselArgument argument = BesselArgument::reduced;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct VerifySpec {
  Suite suite = Suite::all;
  std::uint64_t seed = 1;
  int node_budget = 96;

  friend bool operator==(const VerifySpec&, const VerifySpec&) = default;
};

/// Geometry whose spectral terms are reported by the verify mode.
struct GeometrySpec {
  SheetGeometry geometry;
  double t = 1.0;

  friend bool operator==(const GeometrySpec&, const GeometrySpec&) = default;
};

/// Cartesian grid; an empty axis keeps the base value (epsilon: 0).
struct SweepSpec {
  std::vector<double> lambda;
  std::vector<double> alpha;
  std::vector<double> epsilon;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct Scenario {
  Mode mode = Mode::verify;
  std::optional<CosmoParams> params;
  std::optional<GeometrySpec> geometry;
  std::optional<InitialConditions> initial_conditions;
  std::optional<ModelSpec> model;
  IntegratorConfig integrator;
  VerifySpec verify;
  std::optional<SweepSpec> sweep;
  std::string output_dir = "out";
  /// Sweep worker count; 0 = number of logical CPUs.
  int workers = 0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Strict parse: unknown keys, missing mode-specific fields, type mismatches
/// and invalid values throw ConfigError with a JSON path ($.a.b) in the
/// message. Integrator defaults: rk4, step 1e-3, t in [0, 1] (t0 = 0.1 for
/// the radiation and matter models unless given).
[[nodiscard]] Scenario parse_config(std::string_view text);

/// JSON text that parse_config maps back to an equal Scenario.
[[nodiscard]] std::string serialize(const Scenario& s);

/// Description of every config key, printed by --help.
[[nodiscard]] std::string config_reference();

struct SweepPoint {
  double lambda_eff = 0.0;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::string subdir;
  Scenario scenario;  ///< evolve scenario for this grid point
};

/// One evolve scenario per grid point; the initial scale factors become
/// (a1 + epsilon, a2 - epsilon) with v1 re-solved from the constraint.
[[nodiscard]] std::vector<SweepPoint> expand_sweep(const Scenario& s);

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;

/// Runs the scenario and writes its artifacts below output_dir. Returns the
/// process exit code (failed verification checks and sweep points give 1;
/// paper-discrepancy verdicts do not).
[[nodiscard]] int run_scenario(const Scenario& s, std::ostream& log);

}  // namespace sflrw::cli
