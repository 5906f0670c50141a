#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cellforce/cellmodel.hpp"
#include "cellforce/errors.hpp"
#include "cellforce/metrics.hpp"

using namespace cellforce;

namespace {

const SubdomainSpec kOmegaW = SubdomainSpec::square({0, 0}, 5);

DisplacementField smooth_field(const Mesh& m, double a, double b, double c) {
  return DisplacementField::from_function(m, [=](const Point2& p) {
    return Vec2{a * std::sin(0.3 * p.x + b * p.y), c * std::cos(0.2 * p.y - a * p.x) + b * p.x * p.y / 100};
  });
}

}  // namespace

TEST(Shoelace, BasicAreas) {
  const std::vector<Point2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_DOUBLE_EQ(shoelace_area(sq), 1.0);
  const std::vector<Point2> cw(sq.rbegin(), sq.rend());
  EXPECT_DOUBLE_EQ(shoelace_area(cw), 1.0);
  EXPECT_NEAR(shoelace_area(polygonize({{2, 3}, 3}, 8, false).vertices), 25.455844122715710, 1e-12);
  const std::vector<Point2> two{{0, 0}, {1, 0}};
  EXPECT_THROW(shoelace_area(two), GeometryError);
}

TEST(ReductionRatio, Axioms) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> area(1e-3, 1e3), scale(1e-3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double a0 = area(rng), a = area(rng), k = scale(rng);
    const double r = reduction_ratio(a, a0);
    EXPECT_GE(r, 0.0);
    EXPECT_EQ(reduction_ratio(a0, a0), 0.0);
    EXPECT_NEAR(reduction_ratio(k * a, k * a0), r, 1e-12 * std::max(1.0, r));
    EXPECT_NEAR(r, std::abs(a - a0) / a0, 1e-15 * std::max(1.0, r));
  }
  EXPECT_THROW(reduction_ratio(1.0, 0.0), GeometryError);
  EXPECT_THROW(reduction_ratio(1.0, -2.0), GeometryError);
}

TEST(ConvergenceRate, RecoversPowerLaw) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> p(0.5, 4.0), c(-5, 5), q(-10, 10), h(0.01, 1);
  for (int i = 0; i < 1000; ++i) {
    const double order = p(rng), C = c(rng), Q = q(rng), h0 = h(rng);
    if (std::abs(C) < 1e-3) continue;
    auto f = [&](double s) { return Q + C * std::pow(s, order); };
    EXPECT_NEAR(convergence_rate({f(h0), f(h0 / 2), f(h0 / 4)}), order, 1e-6);
  }
  EXPECT_THROW(convergence_rate({1.0, 1.0, 0.5}), IndeterminateRateError);
  EXPECT_THROW(convergence_rate({1.0, 0.5, 0.5}), IndeterminateRateError);
}

TEST(L2Norm, ConstantFieldAndAxioms) {
  const Mesh m = generate_square_mesh(10, 2);
  const auto c = DisplacementField::from_function(m, [](const Point2&) { return Vec2{3, 4}; });
  EXPECT_NEAR(l2_norm(m, c), 5.0 * 20.0, 1e-12);

  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  const MaterialField mat{};
  for (int i = 0; i < 1000; ++i) {
    DisplacementField u = DisplacementField::zeros(m.num_nodes()), v = u;
    for (Eigen::Index k = 0; k < u.values.size(); ++k) {
      u.values[k] = g(rng);
      v.values[k] = g(rng);
    }
    const double alpha = g(rng);
    const DisplacementField au{alpha * u.values}, w{u.values + v.values};
    const double nu = l2_norm(m, u), ne = energy_norm(m, u, mat);
    EXPECT_NEAR(l2_norm(m, au), std::abs(alpha) * nu, 1e-12 * nu);
    EXPECT_NEAR(energy_norm(m, au, mat), std::abs(alpha) * ne, 1e-12 * ne);
    EXPECT_LE(l2_norm(m, w), nu + l2_norm(m, v) + 1e-12);
    EXPECT_LE(energy_norm(m, w, mat), ne + energy_norm(m, v, mat) + 1e-12);
  }
}

TEST(SubdomainBoundary, LoopThroughGridNodes) {
  const Mesh m = generate_square_mesh(10, 0.5, kOmegaW);
  const auto loop = subdomain_boundary_nodes(m, kOmegaW);
  EXPECT_EQ(loop.size(), 80u);  // 40 µm perimeter at h = 0.5
  EXPECT_EQ(m.nodes[loop[0]], kOmegaW.vertices[0]);
  std::vector<Point2> pts;
  for (int v : loop) pts.push_back(m.nodes[v]);
  EXPECT_GT(signed_polygon_area(pts), 0.0);
  EXPECT_DOUBLE_EQ(shoelace_area(deformed_boundary(m, DisplacementField::zeros(m.num_nodes()), kOmegaW)), 100.0);
}

TEST(JacobianArea, MatchesShoelaceOnRandomFields) {
  const Mesh m = generate_square_mesh(10, 1, kOmegaW);
  const auto inside = elements_in_subdomain(m, kOmegaW);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 1000; ++i) {
    const auto f = smooth_field(m, u(rng), u(rng), u(rng));
    const double jac = jacobian_area(m, f, inside).area;
    const double sl = shoelace_area(deformed_boundary(m, f, kOmegaW));
    EXPECT_NEAR(jac, sl, 1e-8 * sl);
  }
}

TEST(JacobianArea, LinearMapScalesByDeterminant) {
  const Mesh m = generate_square_mesh(10, 1, kOmegaW);
  const auto f = DisplacementField::from_function(m, [](const Point2& p) { return Vec2{0.1 * p.x + 0.05 * p.y, -0.2 * p.y}; });
  const JacobianArea ja = jacobian_area(m, f, elements_in_subdomain(m, kOmegaW));
  EXPECT_NEAR(ja.area, 100.0 * (1.1 * 0.8), 1e-12);
  EXPECT_EQ(ja.inverted_elements, 0);
  const auto flip = DisplacementField::from_function(m, [](const Point2& p) { return Vec2{-2.0 * p.x, 0.0}; });
  EXPECT_EQ(jacobian_area(m, flip, elements_in_subdomain(m, kOmegaW)).inverted_elements, 200);
}

TEST(Interpolate, ReproducesLinearFields) {
  const auto poly = polygonize({{0, 0}, 3}, 8, false).vertices;
  const Mesh m = generate_hole_mesh(10, poly, 1.0, kOmegaW);
  const auto f = DisplacementField::from_function(m, [](const Point2& p) { return Vec2{1 + 2 * p.x - p.y, 0.5 * p.y}; });
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-9.9, 9.9);
  for (int i = 0; i < 200; ++i) {
    const Point2 p{u(rng), u(rng)};
    if (point_in_polygon(poly, p)) continue;
    const Vec2 v = interpolate(m, f, p);
    EXPECT_NEAR(v.x, 1 + 2 * p.x - p.y, 1e-12);
    EXPECT_NEAR(v.y, 0.5 * p.y, 1e-12);
  }
}
