#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sflrw {

enum class Suite { symbols, action, eom, perturbation, all };

[[nodiscard]] std::string to_string(Suite s);
/// Throws std::invalid_argument for an unknown name.
[[nodiscard]] Suite suite_from_string(const std::string& name);

enum class Verdict { pass, fail, paper_discrepancy };

[[nodiscard]] std::string to_string(Verdict v);

struct VerificationTolerances {
  double quadrature = 1e-8;
  double algebraic = 1e-12;
  double pointwise = 1e-12;
  double variational = 1e-5;
  double force = 1e-8;
  double evolution = 1e-8;
  double drift = 1e-9;
  double exponents = 1e-12;
  double linear_residual = 1e-10;
  double oscillating_residual = 1e-9;
  double bessel_argument = 1e-8;
  double bessel = 1e-10;
  double split = 0.05;
};

struct ReportEntry {
  std::string check_id;
  /// Descriptive tag of the formula being checked.
  std::string location;
  double computed = 0.0;
  double oracle = 0.0;
  /// |computed - oracle| / |oracle|, or the absolute difference when the
  /// oracle vanishes.
  double rel_dev = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::pass;
  std::string note;
};

struct VerificationReport {
  Suite suite = Suite::all;
  std::uint64_t seed = 0;
  int node_budget = 0;
  VerificationTolerances tolerances;
  /// Sorted by check_id.
  std::vector<ReportEntry> entries;

  [[nodiscard]] int count(Verdict v) const;
  [[nodiscard]] bool any_fail() const { return count(Verdict::fail) > 0; }
  [[nodiscard]] const ReportEntry* find(const std::string& check_id) const;
};

/// Runs the registered checks of `suite`. `node_budget` is the number of
/// hyperspherical cosphere nodes (the inner S^2 grid stays at its default);
/// throws std::invalid_argument below CosphereRule::kMinNodes. Check failures
/// are report entries, not exceptions.
[[nodiscard]] VerificationReport run_suite(Suite suite, std::uint64_t seed, int node_budget,
                                           const VerificationTolerances& tolerances = {});

void write_text(const VerificationReport& report, std::ostream& out);
/// JSON document with the fields of VerificationReport.
[[nodiscard]] std::string to_json(const VerificationReport& report);

}  // namespace sflrw
