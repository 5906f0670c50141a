#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cellforce/experiment.hpp"
#include "cellforce/metrics.hpp"

using namespace cellforce;

namespace {

ExperimentConfig quick(ExperimentKind kind) {
  ExperimentConfig c = default_config(kind);
  c.out_dir.clear();
  if (kind != ExperimentKind::Multicell && kind != ExperimentKind::PolyDegreeSweep) {
    c.h = 1.0;
    c.n_polygon = 8;
  }
  return c;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// metrics.csv without the wall_ms column.
std::string strip_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (k != 11) out << cols[k] << ';';
    out << '\n';
  }
  return out.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("cellforce_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Run, ZeroForceGivesZeroMetrics) {
  for (auto kind : {ExperimentKind::Hole, ExperimentKind::Immersed, ExperimentKind::AdjustedImmersed,
                    ExperimentKind::Multicell}) {
    ExperimentConfig c = quick(kind);
    c.P = 0.0;
    const RunRecord rec = run(c);
    ASSERT_FALSE(rec.rows.empty());
    for (const auto& r : rec.rows) {
      if (!std::isnan(r.cell_area_red_pct)) EXPECT_EQ(r.cell_area_red_pct, 0.0);
      EXPECT_EQ(r.omega_w_area_red_pct, 0.0);
      EXPECT_EQ(r.strain_energy_w, 0.0);
      EXPECT_EQ(r.l2_norm, 0.0);
      EXPECT_EQ(r.energy_norm, 0.0);
    }
  }
}

TEST(Run, HoleMuchStifferResponseThanImmersed) {
  const RunRecord hole = run(quick(ExperimentKind::Hole));
  const RunRecord imm = run(quick(ExperimentKind::Immersed));
  EXPECT_GT(hole.rows[0].cell_area_red_pct, 10 * imm.rows[0].cell_area_red_pct);
}

TEST(Run, JacobianAndShoelaceAgreeOnEveryRow) {
  for (auto kind : {ExperimentKind::Hole, ExperimentKind::Immersed, ExperimentKind::AdjustedImmersed,
                    ExperimentKind::Multicell}) {
    for (const auto& r : run(quick(kind)).rows) {
      EXPECT_NEAR(r.omega_w_area_red_jacobian_pct, r.omega_w_area_red_pct,
                  1e-8 * std::max(1e-12, r.omega_w_area_red_pct) * 100)
          << r.approach;
    }
  }
}

TEST(Run, FormalismsCoincideWithoutInteriorStiffness) {
  ExperimentConfig c = quick(ExperimentKind::AdjustedImmersed);
  const auto hole = solve_single_cell(c, Approach::Hole, 0.0, 1);
  const auto adj = solve_single_cell(c, Approach::AdjustedImmersed, 0.0, 1);
  const auto& h = hole.back();
  const auto& a = adj.back();
  DisplacementField d = restrict_field(a.mesh, a.u, h.mesh);
  d.values -= h.u.values;
  EXPECT_LT(energy_norm(h.mesh, d, h.material), 1e-8 * energy_norm(h.mesh, h.u, h.material));
  EXPECT_NEAR(a.row.energy_norm, h.row.energy_norm, 1e-8 * h.row.energy_norm);
}

TEST(GammaSweep, SharedMeshMonotoneAndDeterministic) {
  ExperimentConfig c = quick(ExperimentKind::GammaSweep);
  const RunRecord a = run(c);
  ASSERT_EQ(a.sweep.size(), 4u);
  EXPECT_NE(a.mesh_hash, 0u);
  EXPECT_EQ(a.mesh_hash, a.companion_mesh_hash);
  for (std::size_t k = 1; k < a.sweep.size(); ++k) {
    EXPECT_LT(a.sweep[k].exterior_energy_distance, a.sweep[k - 1].exterior_energy_distance);
    EXPECT_LT(a.sweep[k].relative_gap, a.sweep[k - 1].relative_gap);
  }
  const RunRecord b = run(c);
  EXPECT_EQ(strip_timing(metrics_csv(a.rows)), strip_timing(metrics_csv(b.rows)));
  EXPECT_EQ(gamma_sweep_csv(a.sweep), gamma_sweep_csv(b.sweep));
}

TEST(GammaSweep, SingleGammaMatchesPlainRun) {
  ExperimentConfig c = quick(ExperimentKind::GammaSweep);
  c.gammas = {1e-4};
  const RunRecord sweep = run(c);
  ExperimentConfig p = quick(ExperimentKind::AdjustedImmersed);
  p.gamma = 1e-4;
  const RunRecord plain = run(p);
  ASSERT_EQ(sweep.rows.size(), 2u);
  std::vector<MetricsRow> a{sweep.rows[1]}, b{plain.rows[0]};
  EXPECT_EQ(strip_timing(metrics_csv(a)), strip_timing(metrics_csv(b)));
}

TEST(DegreeSweep, SharedCellsAndDeterminism) {
  ExperimentConfig c = quick(ExperimentKind::PolyDegreeSweep);
  c.h = 0.5;
  c.repeats = 1;
  c.seed = 5;
  const RunRecord a = run(c);
  ASSERT_EQ(a.degree_sweep.size(), 6u);
  EXPECT_FALSE(a.cells.empty());
  for (std::size_t k = 0; k < a.degree_sweep.size(); ++k) EXPECT_EQ(a.degree_sweep[k].degree, static_cast<int>(k) + 3);
  const RunRecord b = run(c);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) EXPECT_EQ(a.cells[i].center, b.cells[i].center);
  EXPECT_EQ(strip_timing(metrics_csv(a.rows)), strip_timing(metrics_csv(b.rows)));
}

TEST(ConvergenceStudy, ManufacturedLoadSecondOrder) {
  // Compressible material: the smooth problem shows the asymptotic P1 order
  // without volumetric locking in the way.
  ExperimentConfig c = default_config(ExperimentKind::ConvergenceStudy);
  c.out_dir.clear();
  c.load = StudyLoadKind::Manufactured;
  c.nu = 0.3;
  c.levels = 3;
  const RunRecord rec = run(c);
  ASSERT_EQ(rec.rows.size(), 3u);
  EXPECT_TRUE(std::isnan(rec.rows[1].rate_l2));
  EXPECT_GE(rec.rows[2].rate_l2, 1.9);
  EXPECT_LE(rec.rows[2].rate_l2, 2.1);
}

TEST(Run, WritesArtifactsAtomically) {
  const auto dir = scratch("artifacts");
  ExperimentConfig c = quick(ExperimentKind::Multicell);
  c.out_dir = dir.string();
  const RunRecord rec = run(c);
  for (const char* name : {"mesh.txt", "field.txt", "cells.txt", "metrics.csv", "config.txt"})
    EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    EXPECT_NE(entry.path().extension(), ".tmp");
  const std::string csv = read_file(dir / "metrics.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "approach,gamma,n_polygon,h,cell_area_red_pct,omega_w_area_red_pct,strain_energy_w,l2_norm,"
            "energy_norm,rate_l2,rate_energy,wall_ms,seed");
  EXPECT_EQ(read_file(dir / "mesh.txt").rfind("MESH2 ", 0), 0u);
  EXPECT_EQ(read_file(dir / "field.txt").rfind("FIELD2 ", 0), 0u);
  EXPECT_EQ(read_file(dir / "cells.txt").rfind("CELLS ", 0), 0u);
  std::filesystem::remove_all(dir);
}

TEST(Run, GreensStudyWritesBothTables) {
  const auto dir = scratch("greens");
  ExperimentConfig c = default_config(ExperimentKind::GreensDivergence);
  c.levels = 2;
  c.out_dir = dir.string();
  const RunRecord rec = run(c);
  EXPECT_EQ(rec.point_study.size(), 2u);
  EXPECT_EQ(rec.hole_study.size(), 2u);
  EXPECT_EQ(read_file(dir / "greens_point.csv").rfind("h,energy,seminorm_increment\n", 0), 0u);
  EXPECT_EQ(read_file(dir / "greens_hole.csv").rfind("h,energy,seminorm_increment\n", 0), 0u);
  std::filesystem::remove_all(dir);
}

TEST(Run, FailingPhaseIsNamed) {
  ExperimentConfig c = quick(ExperimentKind::Hole);
  c.R = 4.9;  // polygon reaches the observed square's boundary at h = 1
  try {
    run(c);
    FAIL() << "expected a mesh failure";
  } catch (const PhaseError& e) {
    EXPECT_EQ(e.phase(), "mesh");
  }
}

TEST(Run, CellsFileOverridesSampling) {
  const auto dir = scratch("cells");
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "cells.txt");
    out << "CELLS 2\n1 1 0.1\n-2 0.5 0.1\n";
  }
  ExperimentConfig c = quick(ExperimentKind::Multicell);
  c.cells_file = (dir / "cells.txt").string();
  const RunRecord rec = run(c);
  ASSERT_EQ(rec.cells.size(), 2u);
  EXPECT_EQ(rec.cells[1].center, (Point2{-2, 0.5}));
  c.cells_file = (dir / "missing.txt").string();
  EXPECT_THROW(run(c), ConfigError);
  std::filesystem::remove_all(dir);
}
