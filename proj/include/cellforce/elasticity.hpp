#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "cellforce/mesh.hpp"

namespace cellforce {

/// Piecewise-constant stiffness: E_exterior on exterior elements, E_interior
/// (the interior stiffness γ) on cell-interior elements.
struct MaterialField {
  double E_exterior = 1.0;  // kg/(µm·min²)
  double E_interior = 1.0;
  double nu = 0.49;
  double kappa = 10.0;  // Robin spring coefficient

  double stiffness(Region r) const { return r == Region::CellInterior ? E_interior : E_exterior; }
  void validate() const;
};

struct PointLoad {
  Point2 location;
  Vec2 force;  // kg·µm/min²
};

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Displacement dofs are interleaved per node: (2k, 2k+1) = (u_x, u_y) of node k.
struct LinearSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<int> fixed_dofs;  // homogeneous Dirichlet pins (u = 0)

  static int dof(int node, int component) { return 2 * node + component; }
};

struct DisplacementField {
  Eigen::VectorXd values;  // interleaved, length 2 * n_nodes

  std::size_t num_nodes() const { return static_cast<std::size_t>(values.size() / 2); }
  Vec2 at(std::size_t node) const { return {values[2 * node], values[2 * node + 1]}; }

  static DisplacementField zeros(std::size_t n_nodes) {
    return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n_nodes))};
  }
  /// Nodal interpolant of a vector function.
  static DisplacementField from_function(const Mesh& mesh, const std::function<Vec2(const Point2&)>& u);
};

// ---------------------------------------------------------------------------
// Assembly

/// Plane-strain P1 element matrix (dof order x1 y1 x2 y2 x3 y3).
Eigen::Matrix<double, 6, 6> element_stiffness(const std::array<Point2, 3>& tri, double E, double nu);

/// Elastic stiffness with the element-wise E from `mat`; zero right-hand side.
/// Throws AssemblyError on inverted elements.
LinearSystem assemble_stiffness(const Mesh& mesh, const MaterialField& mat);

/// Boundary mass matrix κ∫φ_iφ_j dΓ over Outer edges, for both components.
SparseMatrix robin_matrix(const Mesh& mesh, double kappa);

/// Stiffness plus Robin term: the full operator of both weak forms.
LinearSystem assemble_system(const Mesh& mesh, const MaterialField& mat);

/// Adds each point force to the nodes of its containing element, weighted by
/// the barycentric coordinates of the load point.
Eigen::VectorXd point_load_vector(const Mesh& mesh, std::span<const PointLoad> loads);

/// Normal traction P·n on every edge with `tag`, n pointing out of the meshed
/// region (towards the cell). Each endpoint receives P·n·ΔΓ/2.
Eigen::VectorXd traction_vector(const Mesh& mesh, double P, EdgeTag tag = EdgeTag::Hole);

/// Consistent load ∫ f·φ for the nodal interpolant of a body force f.
Eigen::VectorXd body_force_vector(const Mesh& mesh, const std::function<Vec2(const Point2&)>& f);

// ---------------------------------------------------------------------------
// Solve

struct SolveOptions {
  double tolerance = 1e-10;  // relative residual ‖Ku - f‖ / ‖f‖
  int max_refinement_steps = 4;
};

struct SolveReport {
  double relative_residual = 0.0;
  int pinned_dofs = 0;  // explicit pins plus dofs with no stiffness at all
};

/// Sparse LDLᵀ solve with iterative refinement. Dofs whose row is entirely
/// zero (nodes touching only zero-stiffness elements) are pinned to zero.
/// Throws SolverError if the reduced matrix is not positive definite or the
/// residual contract cannot be met.
DisplacementField solve(const LinearSystem& system, const SolveOptions& options = {},
                        SolveReport* report = nullptr);

// ---------------------------------------------------------------------------
// Post-processing

struct StrainStress {
  Eigen::Matrix2d strain;
  Eigen::Matrix2d stress;
};

/// Hooke's law σ = E/(1+ν) {ε + tr(ε) ν/(1-2ν) I}.
Eigen::Matrix2d hooke_stress(const Eigen::Matrix2d& strain, double E, double nu);

/// Constant displacement gradient ∇u (rows: components, cols: derivatives).
Eigen::Matrix2d displacement_gradient(const Mesh& mesh, const DisplacementField& u, std::size_t e);

StrainStress element_strain_stress(const Mesh& mesh, const DisplacementField& u,
                                   const MaterialField& mat, std::size_t e);

/// ½∫σ:ε over the given elements.
double strain_energy(const Mesh& mesh, const DisplacementField& u, const MaterialField& mat,
                     std::span<const int> elements);
double strain_energy(const Mesh& mesh, const DisplacementField& u, const MaterialField& mat);

/// (∫σ:ε dΩ + ∫_{∂Ω} κ|u|² dΓ)^{1/2}, the interior integral restricted to
/// `elements` when given (e.g. the exterior region Ω \ Ω_C).
double energy_norm(const Mesh& mesh, const DisplacementField& u, const MaterialField& mat);
double energy_norm(const Mesh& mesh, const DisplacementField& u, const MaterialField& mat,
                   std::span<const int> elements);

/// ∫_{∂Ω} κu dΓ over Outer edges (exact for P1 traces).
Vec2 boundary_momentum_integral(const Mesh& mesh, const DisplacementField& u, double kappa);

// Text formats (17 significant digits):
//   FIELD2 <n_nodes>   then "ux uy" per node
//   STRESS2 <n_elems>  then "sxx syy sxy" per element
void write_field(std::ostream& out, const DisplacementField& u);
DisplacementField read_field(std::istream& in);
void write_stress(std::ostream& out, const Mesh& mesh, const DisplacementField& u, const MaterialField& mat);

}  // namespace cellforce
