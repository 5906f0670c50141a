#include "cellforce/greens.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include "cellforce/cellmodel.hpp"
#include "cellforce/elasticity.hpp"
#include "cellforce/errors.hpp"
#include "cellforce/mesh.hpp"

namespace cellforce {

double laplace_surface_constant(int d) {
  if (d < 3) throw SingularityError("laplace_surface_constant: defined for d >= 3");
  const double s = 0.5 * (d - 1);
  return 2.0 * std::pow(std::numbers::pi, s) / std::tgamma(s);
}

double laplace_green(std::span<const double> x) {
  const int d = static_cast<int>(x.size());
  if (d < 2) throw SingularityError("laplace_green: dimension must be at least 2");
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  if (r2 == 0.0) throw SingularityError("laplace_green: evaluated at the source point");
  const double r = std::sqrt(r2);
  if (d == 2) return -std::log(r) / (2.0 * std::numbers::pi);
  return 1.0 / (d * (d - 2) * laplace_surface_constant(d) * std::pow(r, d - 2));
}

Eigen::Matrix3d kelvin_tensor(const Eigen::Vector3d& x, double mu, double nu) {
  const double r = x.norm();
  if (r == 0.0) throw SingularityError("kelvin_tensor: evaluated at the source point");
  const double c = 1.0 / (16.0 * std::numbers::pi * mu * (1.0 - nu) * r);
  return c * ((3.0 - 4.0 * nu) * Eigen::Matrix3d::Identity() + x * x.transpose() / (r * r));
}

Eigen::Vector3d kelvin_green(const Eigen::Vector3d& x, const KelvinParams& params) {
  return kelvin_tensor(x, params.mu, params.nu) * params.force;
}

double annulus_gradient_energy_2d(double inner, double outer) {
  if (!(inner > 0.0) || inner > outer) throw SingularityError("annulus: need 0 < inner <= outer");
  return std::log(outer / inner) / (2.0 * std::numbers::pi);
}

std::vector<StudyRow> fem_singularity_study(const SingularityStudyOptions& o) {
  const SubdomainSpec sub = SubdomainSpec::square({0.0, 0.0}, o.subdomain_half_length);
  MaterialField mat{o.E, o.E, o.nu, o.kappa};

  Mesh mesh;
  if (o.load == StudyLoad::PointForce) {
    mesh = generate_square_mesh(o.half_length, o.base_h, sub);
  } else {
    const PolygonApprox poly = polygonize({{0.0, 0.0}, o.hole_radius}, o.hole_degree, false);
    mesh = generate_hole_mesh(o.half_length, poly.vertices, o.base_h, sub);
  }

  std::vector<StudyRow> rows;
  for (int level = 0; level < o.levels; ++level) {
    if (level > 0) mesh = refine(mesh);
    LinearSystem sys = assemble_system(mesh, mat);
    if (o.load == StudyLoad::PointForce) {
      const PointLoad load{{0.0, 0.0}, {o.force[0], o.force[1]}};
      sys.rhs = point_load_vector(mesh, std::span<const PointLoad>(&load, 1));
    } else {
      sys.rhs = traction_vector(mesh, o.hole_traction, EdgeTag::Hole);
    }
    const DisplacementField u = solve(sys);
    StudyRow row;
    row.h = mesh.h;
    row.energy = std::sqrt(2.0 * strain_energy(mesh, u, mat));
    row.increment = rows.empty() ? std::numeric_limits<double>::quiet_NaN() : row.energy - rows.back().energy;
    rows.push_back(row);
  }
  return rows;
}

void write_study_csv(std::ostream& out, std::span<const StudyRow> rows) {
  out << "h,energy,seminorm_increment\n" << std::setprecision(17);
  for (const StudyRow& r : rows) {
    out << r.h << ',' << r.energy << ',';
    if (std::isnan(r.increment)) {
      out << "nan";
    } else {
      out << r.increment;
    }
    out << '\n';
  }
}

}  // namespace cellforce
