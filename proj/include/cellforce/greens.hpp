#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace cellforce {

/// Surface constant a_d = 2π^{(d-1)/2} / Γ((d-1)/2) used by the free-space
/// Laplace Green's function for d >= 3.
double laplace_surface_constant(int d);

/// Free-space Green's function of -Δ: -(1/2π) log‖x‖ for d = 2 and
/// 1 / (d(d-2) a_d ‖x‖^{d-2}) for d >= 3. The dimension is x.size().
/// Throws SingularityError at x = 0.
double laplace_green(std::span<const double> x);

struct KelvinParams {
  double mu = 1.0;  // second Lamé parameter
  double nu = 0.0;
  Eigen::Vector3d force = Eigen::Vector3d::UnitX();
};

/// Kelvin tensor G_ij = ((3-4ν)δ_ij + x_i x_j/‖x‖²) / (16πμ(1-ν)‖x‖).
Eigen::Matrix3d kelvin_tensor(const Eigen::Vector3d& x, double mu, double nu);

/// Point-force displacement û = G(x) F.
Eigen::Vector3d kelvin_green(const Eigen::Vector3d& x, const KelvinParams& params);

/// ∫ ‖∇û‖² over the annulus inner < r < outer for the 2D Laplace Green's
/// function: ln(outer/inner) / (2π). Grows without bound as inner -> 0.
double annulus_gradient_energy_2d(double inner, double outer);

enum class StudyLoad { PointForce, Hole };

struct SingularityStudyOptions {
  StudyLoad load = StudyLoad::PointForce;
  double half_length = 10.0;
  double subdomain_half_length = 5.0;
  double base_h = 1.0;
  int levels = 4;  // number of meshes: base_h, base_h/2, ...
  double E = 1.0;
  double nu = 0.3;  // compressible, so locking does not blur the contrast
  double kappa = 10.0;
  std::array<double, 2> force{1.0, 0.0};  // point force at the origin
  double hole_radius = 3.0;                // hole study: traction P on a fixed polygon
  int hole_degree = 32;
  double hole_traction = 1.0;
};

struct StudyRow {
  double h = 0.0;
  double energy = 0.0;     // (∫σ(u_h):ε(u_h) dΩ)^{1/2}
  double increment = 0.0;  // energy minus previous level (NaN on the first)
};

/// Solves on a nested sequence of uniformly refined meshes and reports the
/// discrete H¹-type seminorm per level. For a point force the sequence keeps
/// growing (the continuous solution is not in H¹); for the hole problem it
/// converges.
std::vector<StudyRow> fem_singularity_study(const SingularityStudyOptions& options);

/// CSV with header "h,energy,seminorm_increment".
void write_study_csv(std::ostream& out, std::span<const StudyRow> rows);

}  // namespace cellforce
