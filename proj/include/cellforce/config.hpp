#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cellforce {

enum class ExperimentKind {
  Immersed,
  Hole,
  AdjustedImmersed,
  GammaSweep,
  PolyDegreeSweep,
  Multicell,
  ConvergenceStudy,
  GreensDivergence,
};

/// Force formalism used for a single-cell solve.
enum class Approach { Immersed, Hole, AdjustedImmersed };

/// Load driving a convergence study.
enum class StudyLoadKind { Cell, Manufactured };

enum class Placement { OmegaW, Domain };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Hole;
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  double half_length = 10.0;
  double omega_w = 5.0;  // half-length of the observed square, centered at 0

  double E = 1.0;
  double nu = 0.49;
  double kappa = 10.0;
  double gamma = 1e-5;  // interior stiffness of the adjusted approach

  double P = 1.0;
  double R = 3.0;
  double lambda = 15.0;
  Placement placement = Placement::OmegaW;
  int n_polygon = 32;
  bool equal_area = false;
  bool conserve_total = false;
  double phase = 0.0;
  std::string cells_file;  // read cell centers instead of sampling

  double h = 0.5;
  int levels = 1;

  std::vector<double> gammas{1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<int> degrees{3, 4, 5, 6, 7, 8};
  Approach approach = Approach::Hole;  // convergence study formalism
  StudyLoadKind load = StudyLoadKind::Cell;
  int repeats = 1;  // timed solves per measurement; the minimum is kept

  /// Throws ConfigError on non-physical values.
  void validate() const;
};

/// Defaults for a kind: the reference single-cell parameters, or the
/// multi-cell set (P=10, R=0.1, λ=15, square mesh) otherwise.
ExperimentConfig default_config(ExperimentKind kind);

/// Raw `key = value` pairs; `[section]` headers group keys for readability
/// but keys are global. Comments start with '#' or ';'.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in);

/// Applies the pairs on top of the defaults for the kind named by "kind"
/// (or `fallback_kind` when absent). Unknown keys and malformed values throw
/// ConfigError.
ExperimentConfig build_config(const KeyValues& values, std::optional<ExperimentKind> fallback_kind = {});

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Splits "key=value"; throws ConfigError when '=' is missing.
std::pair<std::string, std::string> split_override(const std::string& text);

ExperimentKind parse_kind(const std::string& text);
std::string to_string(ExperimentKind kind);
std::string to_string(Approach approach);

/// Canonical dump of every field, one `key = value` per line.
std::string config_snapshot(const ExperimentConfig& config);

}  // namespace cellforce
