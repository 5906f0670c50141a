#include "cellforce/elasticity.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/SparseCholesky>

#include "cellforce/errors.hpp"

namespace cellforce {
namespace {

// Gradients of the three P1 basis functions, and twice the signed area.
struct P1Gradients {
  std::array<Vec2, 3> grad;
  double area;
};

P1Gradients p1_gradients(const std::array<Point2, 3>& v) {
  const double a2 = orient2d(v[0], v[1], v[2]);
  P1Gradients g{};
  g.area = 0.5 * a2;
  for (int i = 0; i < 3; ++i) {
    const Point2& pj = v[(i + 1) % 3];
    const Point2& pk = v[(i + 2) % 3];
    g.grad[i] = {(pj.y - pk.y) / a2, (pk.x - pj.x) / a2};
  }
  return g;
}

Eigen::Matrix3d plane_strain_d(double E, double nu) {
  const double c = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
  Eigen::Matrix3d D;
  D << c * (1.0 - nu), c * nu, 0.0,  //
      c * nu, c * (1.0 - nu), 0.0,   //
      0.0, 0.0, c * (1.0 - 2.0 * nu) / 2.0;
  return D;
}

void add_robin_edge(std::vector<Eigen::Triplet<double>>& trip, int a, int b, double weight) {
  // Exact P1 edge mass: ΔΓ/6 [[2,1],[1,2]], per component.
  for (int c = 0; c < 2; ++c) {
    const int da = LinearSystem::dof(a, c);
    const int db = LinearSystem::dof(b, c);
    trip.emplace_back(da, da, 2.0 * weight);
    trip.emplace_back(db, db, 2.0 * weight);
    trip.emplace_back(da, db, weight);
    trip.emplace_back(db, da, weight);
  }
}

double robin_quadratic_form(const Mesh& mesh, const DisplacementField& u, double kappa) {
  double q = 0.0;
  for (const TaggedEdge& e : mesh.edges) {
    if (e.tag != EdgeTag::Outer) continue;
    const double len = distance(mesh.nodes[e.a], mesh.nodes[e.b]);
    const Vec2 ua = u.at(e.a);
    const Vec2 ub = u.at(e.b);
    q += kappa * len / 6.0 * (2.0 * dot(ua, ua) + 2.0 * dot(ub, ub) + 2.0 * dot(ua, ub));
  }
  return q;
}

}  // namespace

void MaterialField::validate() const {
  if (!(E_exterior > 0.0)) throw AssemblyError("material: E must be positive");
  if (!(E_interior >= 0.0)) throw AssemblyError("material: interior stiffness must be non-negative");
  if (!(nu >= 0.0 && nu < 0.5)) throw AssemblyError("material: Poisson ratio must lie in [0, 0.5)");
  if (!(kappa >= 0.0)) throw AssemblyError("material: kappa must be non-negative");
}

DisplacementField DisplacementField::from_function(const Mesh& mesh,
                                                   const std::function<Vec2(const Point2&)>& u) {
  DisplacementField f = zeros(mesh.num_nodes());
  for (std::size_t k = 0; k < mesh.num_nodes(); ++k) {
    const Vec2 v = u(mesh.nodes[k]);
    f.values[2 * k] = v.x;
    f.values[2 * k + 1] = v.y;
  }
  return f;
}

Eigen::Matrix<double, 6, 6> element_stiffness(const std::array<Point2, 3>& tri, double E, double nu) {
  const P1Gradients g = p1_gradients(tri);
  if (!(g.area > 0.0)) throw AssemblyError("assembly: inverted or degenerate element");
  Eigen::Matrix<double, 3, 6> B = Eigen::Matrix<double, 3, 6>::Zero();
  for (int i = 0; i < 3; ++i) {
    B(0, 2 * i) = g.grad[i].x;
    B(1, 2 * i + 1) = g.grad[i].y;
    B(2, 2 * i) = g.grad[i].y;
    B(2, 2 * i + 1) = g.grad[i].x;
  }
  return g.area * B.transpose() * plane_strain_d(E, nu) * B;
}

LinearSystem assemble_stiffness(const Mesh& mesh, const MaterialField& mat) {
  mat.validate();
  const auto n = static_cast<Eigen::Index>(2 * mesh.num_nodes());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(36 * mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto v = mesh.vertices(e);
    if (!(signed_triangle_area(v[0], v[1], v[2]) > 0.0)) {
      std::ostringstream msg;
      msg << "assembly: element " << e << " is inverted";
      throw AssemblyError(msg.str());
    }
    const double E = mat.stiffness(mesh.elements[e].region);
    if (E == 0.0) continue;
    const auto ke = element_stiffness(v, E, mat.nu);
    const auto& t = mesh.elements[e].nodes;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        trip.emplace_back(LinearSystem::dof(t[i / 2], i % 2), LinearSystem::dof(t[j / 2], j % 2), ke(i, j));
  }
  LinearSystem sys;
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.rhs = Eigen::VectorXd::Zero(n);
  return sys;
}

SparseMatrix robin_matrix(const Mesh& mesh, double kappa) {
  const auto n = static_cast<Eigen::Index>(2 * mesh.num_nodes());
  std::vector<Eigen::Triplet<double>> trip;
  if (kappa != 0.0) {
    for (const TaggedEdge& e : mesh.edges) {
      if (e.tag != EdgeTag::Outer) continue;
      const double len = distance(mesh.nodes[e.a], mesh.nodes[e.b]);
      add_robin_edge(trip, e.a, e.b, kappa * len / 6.0);
    }
  }
  SparseMatrix R(n, n);
  R.setFromTriplets(trip.begin(), trip.end());
  return R;
}

LinearSystem assemble_system(const Mesh& mesh, const MaterialField& mat) {
  LinearSystem sys = assemble_stiffness(mesh, mat);
  sys.matrix += robin_matrix(mesh, mat.kappa);
  return sys;
}

Eigen::VectorXd point_load_vector(const Mesh& mesh, std::span<const PointLoad> loads) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * mesh.num_nodes()));
  for (const PointLoad& load : loads) {
    const Location loc = locate(mesh, load.location);
    const auto& t = mesh.elements[loc.element].nodes;
    for (int k = 0; k < 3; ++k) {
      f[LinearSystem::dof(t[k], 0)] += loc.bary[k] * load.force.x;
      f[LinearSystem::dof(t[k], 1)] += loc.bary[k] * load.force.y;
    }
  }
  return f;
}

Eigen::VectorXd traction_vector(const Mesh& mesh, double P, EdgeTag tag) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * mesh.num_nodes()));
  for (const auto& loop : edge_loops(mesh, tag)) {
    std::vector<Point2> pts;
    for (int v : loop) pts.push_back(mesh.nodes[v]);
    const Point2 center = polygon_centroid(pts);
    for (std::size_t k = 0; k < loop.size(); ++k) {
      const int a = loop[k];
      const int b = loop[(k + 1) % loop.size()];
      const Vec2 d = mesh.nodes[b] - mesh.nodes[a];
      const double len = norm(d);
      const Vec2 n{d.y / len, -d.x / len};  // right of a->b: out of the meshed region
      if (dot(n, center - midpoint(mesh.nodes[a], mesh.nodes[b])) <= 0.0)
        throw AssemblyError("traction: edge orientation inconsistent with the cell center");
      const Vec2 share = 0.5 * P * len * n;
      for (int v : {a, b}) {
        f[LinearSystem::dof(v, 0)] += share.x;
        f[LinearSystem::dof(v, 1)] += share.y;
      }
    }
  }
  return f;
}

Eigen::VectorXd body_force_vector(const Mesh& mesh, const std::function<Vec2(const Point2&)>& fn) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * mesh.num_nodes()));
  std::vector<Vec2> nodal(mesh.num_nodes());
  for (std::size_t k = 0; k < mesh.num_nodes(); ++k) nodal[k] = fn(mesh.nodes[k]);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double area = mesh.element_area(e);
    const auto& t = mesh.elements[e].nodes;
    // P1 mass matrix: area/12 * (1 + δ_ij).
    for (int i = 0; i < 3; ++i) {
      Vec2 s{};
      for (int j = 0; j < 3; ++j) s += (i == j ? 2.0 : 1.0) * nodal[t[j]];
      f[LinearSystem::dof(t[i], 0)] += area / 12.0 * s.x;
      f[LinearSystem::dof(t[i], 1)] += area / 12.0 * s.y;
    }
  }
  return f;
}

DisplacementField solve(const LinearSystem& system, const SolveOptions& options, SolveReport* report) {
  const SparseMatrix& K = system.matrix;
  const Eigen::Index n = K.rows();
  if (K.cols() != n || system.rhs.size() != n) throw SolverError("solve: dimension mismatch", 0.0);

  std::vector<char> pinned(static_cast<std::size_t>(n), 0);
  for (int d : system.fixed_dofs) pinned.at(static_cast<std::size_t>(d)) = 1;
  Eigen::VectorXd row_max = Eigen::VectorXd::Zero(n);
  for (Eigen::Index c = 0; c < K.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(K, c); it; ++it)
      row_max[it.row()] = std::max(row_max[it.row()], std::abs(it.value()));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (row_max[i] != 0.0) continue;
    if (system.rhs[i] != 0.0 && !pinned[i])
      throw SolverError("solve: load applied to a dof without stiffness", std::abs(system.rhs[i]));
    pinned[i] = 1;
  }
  const int n_pinned = static_cast<int>(std::count(pinned.begin(), pinned.end(), 1));

  SparseMatrix A = K;
  A.prune([&](const Eigen::Index& r, const Eigen::Index& c, const double&) { return !pinned[r] && !pinned[c]; });
  Eigen::VectorXd b = system.rhs;
  std::vector<Eigen::Triplet<double>> unit;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!pinned[i]) continue;
    unit.emplace_back(i, i, 1.0);
    b[i] = 0.0;
  }
  SparseMatrix I(n, n);
  I.setFromTriplets(unit.begin(), unit.end());
  A += I;

  DisplacementField u{Eigen::VectorXd::Zero(n)};
  const double bnorm = b.norm();
  if (report) *report = {0.0, n_pinned};
  if (bnorm == 0.0) return u;

  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw SolverError("solve: factorization failed", 1.0);
  if (ldlt.vectorD().minCoeff() <= 0.0)
    throw SolverError("solve: matrix is not positive definite (check kappa and stiffness)", 1.0);

  u.values = ldlt.solve(b);
  double rel = (b - A * u.values).norm() / bnorm;
  for (int step = 0; step < options.max_refinement_steps && rel > options.tolerance; ++step) {
    u.values += ldlt.solve(b - A * u.values);
    rel = (b - A * u.values).norm() / bnorm;
  }
  if (!std::isfinite(rel) || rel > options.tolerance) {
    std::ostringstream msg;
    msg << "solve: relative residual " << rel << " exceeds tolerance " << options.tolerance;
    throw SolverError(msg.str(), rel);
  }
  if (report) report->relative_residual = rel;
  return u;
}

Eigen::Matrix2d hooke_stress(const Eigen::Matrix2d& strain, double E, double nu) {
  return E / (1.0 + nu) * (strain + strain.trace() * (nu / (1.0 - 2.0 * nu)) * Eigen::Matrix2d::Identity());
}

Eigen::Matrix2d displacement_gradient(const Mesh& mesh, const DisplacementField& u, std::size_t e) {
  const P1Gradients g = p1_gradients(mesh.vertices(e));
  const auto& t = mesh.elements[e].nodes;
  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
  for (int i = 0; i < 3; ++i) {
    const Vec2 ui = u.at(t[i]);
    J(0, 0) += ui.x * g.grad[i].x;
    J(0, 1) += ui.x * g.grad[i].y;
    J(1, 0) += ui.y * g.grad[i].x;
    J(1, 1) += ui.y * g.grad[i].y;
  }
  return J;
}

StrainStress element_strain_stress(const Mesh& mesh, const DisplacementField& u, const MaterialField& mat,
                                   std::size_t e) {
  const Eigen::Matrix2d J = displacement_gradient(mesh, u, e);
  const Eigen::Matrix2d strain = 0.5 * (J + J.transpose());
  return {strain, hooke_stress(strain, mat.stiffness(mesh.elements[e].region), mat.nu)};
}

double strain_energy(const Mesh& mesh, const DisplacementField& u, const MaterialField& mat,
                     std::span<const int> elements) {
  double w = 0.0;
  for (int e : elements) {
    const StrainStress s = element_strain_stress(mesh, u, mat, static_cast<std::size_t>(e));
    w += 0.5 * (s.stress.array() * s.strain.array()).sum() * mesh.element_area(static_cast<std::size_t>(e));
  }
  return w;
}

double strain_energy(const Mesh& mesh, const DisplacementField& u, const MaterialField& mat) {
  std::vector<int> all(mesh.num_elements());
  for (std::size_t e = 0; e < all.size(); ++e) all[e] = static_cast<int>(e);
  return strain_energy(mesh, u, mat, all);
}

double energy_norm(const Mesh& mesh, const DisplacementField& u, const MaterialField& mat,
                   std::span<const int> elements) {
  return std::sqrt(2.0 * strain_energy(mesh, u, mat, elements) + robin_quadratic_form(mesh, u, mat.kappa));
}

double energy_norm(const Mesh& mesh, const DisplacementField& u, const MaterialField& mat) {
  return std::sqrt(2.0 * strain_energy(mesh, u, mat) + robin_quadratic_form(mesh, u, mat.kappa));
}

Vec2 boundary_momentum_integral(const Mesh& mesh, const DisplacementField& u, double kappa) {
  Vec2 total{};
  for (const TaggedEdge& e : mesh.edges) {
    if (e.tag != EdgeTag::Outer) continue;
    const double len = distance(mesh.nodes[e.a], mesh.nodes[e.b]);
    total += 0.5 * kappa * len * (u.at(e.a) + u.at(e.b));
  }
  return total;
}

void write_field(std::ostream& out, const DisplacementField& u) {
  out << "FIELD2 " << u.num_nodes() << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < u.num_nodes(); ++k) out << u.values[2 * k] << ' ' << u.values[2 * k + 1] << '\n';
}

DisplacementField read_field(std::istream& in) {
  std::string magic;
  std::size_t n = 0;
  if (!(in >> magic >> n) || magic != "FIELD2") throw FormatError("field: bad FIELD2 header");
  DisplacementField u = DisplacementField::zeros(n);
  for (Eigen::Index i = 0; i < u.values.size(); ++i)
    if (!(in >> u.values[i])) throw FormatError("field: truncated value list");
  return u;
}

void write_stress(std::ostream& out, const Mesh& mesh, const DisplacementField& u, const MaterialField& mat) {
  out << "STRESS2 " << mesh.num_elements() << '\n' << std::setprecision(17);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto s = element_strain_stress(mesh, u, mat, e).stress;
    out << s(0, 0) << ' ' << s(1, 1) << ' ' << s(0, 1) << '\n';
  }
}

}  // namespace cellforce
