#pragma once

// Run configuration: a flat key=value description of one pipeline run.
// Lengths and times are given in units of the fermion mass, as k/m, t*m and
// e/m; angles accept a trailing "pi" (e.g. dtheta = 1pi, theta = 0.45pi).

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thetaquench/free_theory.hpp"
#include "thetaquench/krylov.hpp"
#include "thetaquench/lattice.hpp"

namespace tq {

enum class Mode { FreePhase, FreeRate, FreeNu, EdRun, EdScan };

std::string_view mode_name(Mode m);
Mode parse_mode(std::string_view name);
bool is_free(Mode m);

/// Ordered key=value pairs; later entries override earlier ones.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct RunConfig {
  Mode mode = Mode::FreeRate;
  FreeParams<double> free;
  LatticeParams lattice;

  // Free-theory grids in units of m. k_nodes is odd so that k = 0 is a node.
  double k_min = -3, k_max = 3;
  Index k_nodes = 401;

  // Time grid t*m = 0 .. t_max, either t_nodes points or a fixed step.
  double t_max = 12;
  Index t_nodes = 400;
  std::optional<double> t_step;

  // Coupling grid of ed-scan.
  double e_min = 0, e_max = 3, e_step = 0.25;

  unsigned threads = 0;  // 0: hardware concurrency
  QuadratureSettings quadrature;
  SolverOptions solver;

  std::filesystem::path out = ".";
  std::vector<std::string> warnings;

  VectorXd k_grid() const;  // k, not k/m
  VectorXd t_grid() const;  // t, not t*m
  VectorXd e_over_m_grid() const;

  /// Every key with its resolved value, for the manifest.
  std::map<std::string, std::string> resolved() const;
};

/// The keys accepted by make_config, in documentation order.
const std::vector<std::string>& config_keys();

/// Parse key=value lines. '#' starts a comment, blank lines are skipped.
KeyValues parse_key_values(std::string_view text, const std::string& origin = "config");
KeyValues read_config_file(const std::filesystem::path& path);

/// Mode defaults, then `kv` in order; validates the result. Unknown keys,
/// malformed values and inconsistent settings raise ValidationError.
RunConfig make_config(Mode mode, const KeyValues& kv);

/// A number with an optional "pi" factor: "2", "-0.5pi", "pi", "1.5*pi".
double parse_number(std::string_view text, const std::string& key);

/// Exact round-trip text for a double.
std::string format_double(double x);

}  // namespace tq
