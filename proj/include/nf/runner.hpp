#pragma once

// Orchestration layer: runs the per-point suites over sampled points with a
// capped parallel work list, merges results order-stably, and loads
// user-supplied manifold config files. All aggregation is order-independent
// (max / counts) or done serially in point order, so reports are
// deterministic for a fixed (manifold, points, seed).

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nf/family.hpp"
#include "nf/geometry.hpp"
#include "nf/pseudosym.hpp"

namespace nf {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// One verification row: residual is the raw max over points, scale the
// magnitude it is judged against, tol the relative tolerance.
struct SuiteRow {
  std::string id;
  std::string tag;
  double max_residual = 0.0;
  double scale = 1.0;
  double tol = 1e-9;
  bool pass = true;
};

struct VerifyOptions {
  int points = 10;
  unsigned seed = 1;
  // Replaces every row's relative tolerance when set.
  std::optional<double> tol_override;
};

struct VerifyReport {
  std::string manifold;
  int points = 0;
  std::vector<SuiteRow> rows;
  bool pass = true;
};

// Geometry invariants at every point; nullity, closed-form and structure
// suites when the manifold declares a distinguished field.
VerifyReport run_verify(const ManifoldSpec& spec, const VerifyOptions& opt);

struct FitOptions {
  int points = 20;
  unsigned seed = 1;
  bool dichotomy = false;  // requires ta = curvature, sigma = g
};

struct FitSummary {
  std::string manifold;
  ConditionSpec cond;
  std::string ta_name;
  std::string tb_name;  // "ric" when the condition derives the Ricci trace
  std::string sigma_name;
  int points = 0;
  std::vector<FitReport> reports;          // point order
  std::optional<double> mean_L;            // over non-degenerate points
  double max_deviation = 0.0;              // max |L_i - mean_L|
  double max_residual = 0.0;
  int degenerate = 0;
  std::vector<DichotomyVerdict> verdicts;  // point order, when requested
  bool pass = true;                        // false iff any verdict is Violation
};

FitSummary run_fit(const ManifoldSpec& spec, const ConditionSpec& cond, std::string ta_name,
                   std::string tb_name, std::string sigma_name, const FitOptions& opt);

struct TableRow {
  std::string klass;
  std::string L_pred;
  std::string S_pred;
  bool witnessed = false;
  std::string witness;  // comma-joined registry entries backing the row
  std::optional<double> max_residual;
  bool pass = true;  // false iff a witness contradicts the row
};

struct TableReport {
  std::string name;
  int n = 0;
  std::optional<int> ell;
  std::vector<TableRow> rows;
  bool pass = true;
};

// name is one of "tps", "w2", "rr-sl". Witnesses are registry entries matched
// by (k, epsilon); rows without one are emitted unwitnessed. Throws
// ConfigError on an unknown name.
TableReport run_table(const std::string& name, int n, int ell, int points, unsigned seed);

// JSON manifold description: keys name, dimension, signature, metric
// (upper-triangle "i,j" -> expression), xi, k, epsilon, chart_box, class_tag.
// Throws ConfigError with a byte offset on malformed expressions, unknown
// keys, or a signature that contradicts the metric.
ManifoldSpec load_manifold_config(const std::string& path);

// Builtin name, "random-3d" (seeded), or a config file path.
ManifoldSpec resolve_manifold(const std::string& selector, unsigned seed);

}  // namespace nf
