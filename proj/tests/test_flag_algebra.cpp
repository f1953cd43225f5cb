#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "hitchin/flag_algebra.hpp"
#include "hitchin/limit_curve.hpp"

using namespace hitchin;

namespace {

Eigen::MatrixXd seeded_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
  return m;
}

Subspace axis_span(int n, std::initializer_list<int> axes) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, static_cast<int>(axes.size()));
  int c = 0;
  for (int a : axes) b(a, c++) = 1.0;
  return Subspace(n, b);
}

}  // namespace

TEST_SUITE("flag_algebra") {

TEST_CASE("orthonormalize spans the same column space") {
  Eigen::MatrixXd m = seeded_matrix(6, 3, 11);
  Subspace s = orthonormalize(m);
  CHECK(s.dim() == 3);
  CHECK((s.basis().transpose() * s.basis() - Eigen::MatrixXd::Identity(3, 3)).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
  for (int j = 0; j < 3; ++j) CHECK(s.residual(m.col(j)) < 1e-12);
}

TEST_CASE("orthonormalize rejects dependent columns") {
  Eigen::MatrixXd m(4, 2);
  m.col(0) = Eigen::Vector4d(1, 2, 3, 4);
  m.col(1) = 2.0 * m.col(0);
  CHECK_THROWS_AS(orthonormalize(m), RankDeficient);
  CHECK_THROWS_AS(orthonormalize(seeded_matrix(3, 5, 2)), DimensionOverflow);
}

TEST_CASE("subspace_sum margins") {
  Subspace e01 = axis_span(4, {0, 1});
  Subspace e23 = axis_span(4, {2, 3});
  SumResult direct = subspace_sum({e01, e23});
  CHECK(direct.is_direct);
  CHECK(direct.total_dim == 4);
  CHECK(direct.margin == doctest::Approx(1.0).epsilon(1e-12));

  Subspace e12 = axis_span(4, {1, 2});
  SumResult overlap = subspace_sum({e01, e12});
  CHECK(!overlap.is_direct);
  CHECK(overlap.margin < 1e-12);

  // margin is invariant under reordering the parts
  Subspace tilted = orthonormalize(seeded_matrix(4, 1, 5));
  SumResult ab = subspace_sum({e01, tilted});
  SumResult ba = subspace_sum({tilted, e01});
  CHECK(ab.margin == doctest::Approx(ba.margin).epsilon(1e-12));
}

TEST_CASE("subspace_intersection of coordinate planes") {
  Subspace a = axis_span(4, {0, 1});
  Subspace b = axis_span(4, {1, 2});
  Subspace inter = subspace_intersection(a, b);
  CHECK(inter.dim() == 1);
  CHECK(inter.residual(Eigen::Vector4d(0, 1, 0, 0)) < 1e-12);
  // transverse planes in R^4 meet only at 0
  CHECK(subspace_intersection(a, axis_span(4, {2, 3})).dim() == 0);
}

TEST_CASE("veronese osculating planes meet in a line") {
  // hyperconvexity of the rational normal curve: xi^2(x) + xi^2(y) fills R^3,
  // so the intersection is exactly one-dimensional
  const FlagChain fx = veronese_flag(3, CirclePoint::from_angle(0.7));
  const FlagChain fy = veronese_flag(3, CirclePoint::from_angle(2.9));
  Subspace inter = subspace_intersection(fx.level(2), fy.level(2));
  CHECK(inter.dim() == 1);
  CHECK(fx.level(2).contains(inter, 1e-9));
  CHECK(fy.level(2).contains(inter, 1e-9));
  SumResult sum = subspace_sum({fx.level(1), fy.level(2)});
  CHECK(sum.is_direct);
  CHECK(sum.total_dim == 3);
}

TEST_CASE("principal angles of a rotated plane") {
  const double alpha = 0.37;
  Subspace a = axis_span(4, {0, 1});
  Eigen::MatrixXd b(4, 2);
  b.setZero();
  b(0, 0) = 1.0;  // shared direction -> angle 0
  b(1, 1) = std::cos(alpha);
  b(2, 1) = std::sin(alpha);
  Subspace rotated(4, b);
  auto angles = principal_angles(a, rotated);
  REQUIRE(angles.size() == 2);
  CHECK(angles[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(angles[1] == doctest::Approx(alpha).epsilon(1e-12));
  CHECK(subspace_distance(a, rotated) == doctest::Approx(alpha).epsilon(1e-12));
}

TEST_CASE("subspace_distance properties") {
  Subspace a = orthonormalize(seeded_matrix(5, 2, 21));
  Subspace b = orthonormalize(seeded_matrix(5, 2, 22));
  CHECK(subspace_distance(a, a) < 1e-12);
  CHECK(subspace_distance(a, b) == doctest::Approx(subspace_distance(b, a)).epsilon(1e-12));
  // missing directions are counted as right angles
  CHECK(subspace_distance(axis_span(3, {0}), axis_span(3, {0, 1})) ==
        doctest::Approx(M_PI / 2).epsilon(1e-12));
  CHECK_THROWS_AS(subspace_distance(axis_span(3, {0}), axis_span(4, {0})), MixedAmbient);
}

TEST_CASE("flag distance and nesting") {
  const FlagChain f = veronese_flag(4, CirclePoint::from_angle(1.1));
  CHECK(f.depth() == 3);
  for (int k = 2; k <= 3; ++k) CHECK(f.level(k).contains(f.level(k - 1), 1e-10));
  CHECK(flag_distance(f, f) < 1e-12);
  const FlagChain g = veronese_flag(4, CirclePoint::from_angle(1.2));
  CHECK(flag_distance(f, g) > 1e-3);
  CHECK(flag_distance(f, g) == doctest::Approx(flag_distance(g, f)).epsilon(1e-12));
}

TEST_CASE("flag_level conventions") {
  const FlagChain f = veronese_flag(3, CirclePoint::from_angle(0.4));
  CHECK(flag_level(f, 0).dim() == 0);
  CHECK(flag_level(f, 3).dim() == 3);
  CHECK(flag_level(f, 2).dim() == 2);
}

}  // TEST_SUITE
