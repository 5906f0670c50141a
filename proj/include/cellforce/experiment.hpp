#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cellforce/cellmodel.hpp"
#include "cellforce/config.hpp"
#include "cellforce/elasticity.hpp"
#include "cellforce/errors.hpp"
#include "cellforce/greens.hpp"
#include "cellforce/mesh.hpp"

namespace cellforce {

/// A module error raised inside a run, tagged with the pipeline phase.
class PhaseError : public Error {
 public:
  PhaseError(std::string phase, const std::string& what)
      : Error(what.starts_with(phase + ": ") ? what : phase + ": " + what), phase_(std::move(phase)) {}
  const std::string& phase() const noexcept { return phase_; }

 private:
  std::string phase_;
};

/// One line of metrics.csv. Percentages are reduction ratios times 100.
struct MetricsRow {
  std::string approach;
  double gamma = 0.0;  // NaN when the run has no interior stiffness
  int n_polygon = 0;
  double h = 0.0;
  double cell_area_red_pct = 0.0;
  double omega_w_area_red_pct = 0.0;  // shoelace of the deformed Ω_w boundary
  double strain_energy_w = 0.0;
  double l2_norm = 0.0;      // over Ω \ Ω_C
  double energy_norm = 0.0;  // over Ω \ Ω_C, Robin term included
  double rate_l2 = 0.0;      // NaN until three levels exist
  double rate_energy = 0.0;  // rate of strain_energy_w
  double wall_ms = 0.0;      // assembly + solve, minimum over repeats
  std::uint64_t seed = 0;

  // Not written to metrics.csv.
  double omega_w_area_red_jacobian_pct = 0.0;  // ∫det(I+∇u) based
  int inverted_elements = 0;
};

struct PhaseTimes {
  double mesh_ms = 0.0;
  double assemble_ms = 0.0;
  double solve_ms = 0.0;
  double metrics_ms = 0.0;
};

/// Gamma-sweep comparison against the companion hole run.
struct SweepRow {
  double gamma = 0.0;
  double omega_w_area_red_pct = 0.0;
  double hole_omega_w_area_red_pct = 0.0;
  double relative_gap = 0.0;            // |Δ| / hole value
  double exterior_energy_distance = 0.0;  // ‖u(γ) - u_hole‖ on Ω \ Ω_C
};

struct DegreeRow {
  int degree = 0;
  double wall_ms = 0.0;
  double omega_w_area_red_pct = 0.0;
  double cell_area_red_pct = 0.0;
};

struct RunRecord {
  ExperimentConfig config;
  std::vector<MetricsRow> rows;
  std::vector<SweepRow> sweep;
  std::vector<DegreeRow> degree_sweep;
  std::vector<StudyRow> point_study;
  std::vector<StudyRow> hole_study;
  std::vector<CellSpec> cells;
  PhaseTimes times;
  std::size_t mesh_hash = 0;            // hole mesh of single-cell runs
  std::size_t companion_mesh_hash = 0;  // exterior of the conforming mesh (gamma sweep)
  std::vector<std::filesystem::path> artifacts;
};

/// Result of one solve, kept for callers that need the field itself.
struct SolvedCase {
  Mesh mesh;
  MaterialField material;
  DisplacementField u;
  MetricsRow row;
};

/// Single-cell solve at every refinement level (h, h/2, ...); rates filled in
/// once three levels exist.
std::vector<SolvedCase> solve_single_cell(const ExperimentConfig& config, Approach approach, double gamma,
                                          int levels, PhaseTimes* times = nullptr);

/// Multi-cell solve on the plain square mesh with all cells' force segments
/// in one right-hand side.
std::vector<SolvedCase> solve_multicell(const ExperimentConfig& config, std::span<const CellSpec> cells,
                                        int degree, int levels, PhaseTimes* times = nullptr);

/// Smooth body-force problem on the square mesh, for rate checks against a
/// regular solution.
std::vector<SolvedCase> solve_manufactured(const ExperimentConfig& config, int levels,
                                           PhaseTimes* times = nullptr);

/// Field on `to` taken from the coincident nodes of `from` (matched by exact
/// coordinates). Used to compare a conforming-mesh solution with the hole
/// mesh it contains. Throws NotFoundError for a node of `to` missing in `from`.
DisplacementField restrict_field(const Mesh& from, const DisplacementField& u, const Mesh& to);

/// Cells from config.cells_file, or sampled by the Poisson process.
std::vector<CellSpec> place_cells(const ExperimentConfig& config);

/// Executes the experiment and, when config.out_dir is non-empty, writes its
/// artifacts there atomically.
RunRecord run(const ExperimentConfig& config);

// CSV writers. Non-finite values print as "nan".
std::string metrics_csv(std::span<const MetricsRow> rows);
std::string gamma_sweep_csv(std::span<const SweepRow> rows);
std::string degree_sweep_csv(std::span<const DegreeRow> rows);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace cellforce
