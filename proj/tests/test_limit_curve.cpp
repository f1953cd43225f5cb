#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "hitchin/limit_curve.hpp"
#include "hitchin/representations.hpp"

using namespace hitchin;

namespace {

// Exact limit-curve samples of the Fuchsian base: the Veronese flags.
std::vector<CurveSample> veronese_samples(int n, int count) {
  std::vector<CurveSample> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const CirclePoint pt = CirclePoint::from_angle(2.0 * M_PI * k / count);
    out.push_back(CurveSample{pt, veronese_flag(n, pt), Word(), 1.0});
  }
  return out;
}

}  // namespace

TEST_SUITE("limit_curve") {

TEST_CASE("circle coordinates wrap and measure") {
  CirclePoint a = CirclePoint::from_angle(2.0 * M_PI + 1.0);
  CHECK(a.theta == doctest::Approx(1.0));
  CirclePoint b = CirclePoint::from_angle(-0.5);
  CHECK(b.theta == doctest::Approx(2.0 * M_PI - 0.5));
  CHECK(circle_distance(a, b) == doctest::Approx(1.5));
  CHECK(circle_distance(CirclePoint::from_angle(0.1), CirclePoint::from_angle(6.2)) ==
        doctest::Approx(2.0 * M_PI - 6.1));
  CHECK(circle_offset(a, b) == doctest::Approx(-1.5));
  CHECK(positively_ordered(CirclePoint::from_angle(0.0), CirclePoint::from_angle(2.0),
                           CirclePoint::from_angle(4.0)));
  CHECK(!positively_ordered(CirclePoint::from_angle(0.0), CirclePoint::from_angle(4.0),
                            CirclePoint::from_angle(2.0)));
}

TEST_CASE("attracting_point is fixed by the Mobius action") {
  Eigen::Matrix2d g;
  g << 2.0, 0.7, 0.3, 0.605;  // det = 1, trace > 2
  g /= std::sqrt(g.determinant());
  CirclePoint fix = attracting_point(g);
  CHECK(circle_distance(mobius_point(g, fix), fix) < 1e-10);
  // a nearby point converges toward the attracting fixed point
  CirclePoint x = CirclePoint::from_angle(fix.theta + 0.5);
  for (int k = 0; k < 30; ++k) x = mobius_point(g, x);
  CHECK(circle_distance(x, fix) < 1e-6);
}

TEST_CASE("attracting_point rejects elliptic matrices") {
  Eigen::Matrix2d rot;
  rot << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
  CHECK_THROWS_AS(attracting_point(rot), NotHyperbolic);
}

TEST_CASE("veronese line is equivariant under sym_power") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss;
  for (int n = 3; n <= 5; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::Matrix2d g;
      g << gauss(rng), gauss(rng), gauss(rng), gauss(rng);
      if (std::abs(g.determinant()) < 0.05) continue;
      if (g.determinant() < 0) g.col(0) *= -1.0;
      g /= std::sqrt(g.determinant());
      CirclePoint x = CirclePoint::from_angle(gauss(rng));
      Eigen::VectorXd pushed =
          sym_power(n, g) * veronese_flag(n, x).level(1).basis().col(0);
      Subspace target = veronese_flag(n, mobius_point(g, x)).level(1);
      CHECK(target.residual(pushed) / pushed.norm() < 1e-9);
    }
  }
}

TEST_CASE("sampled flags of the Fuchsian base match the Veronese curve") {
  SurfaceRep base = fuchsian_genus2();
  SurfaceRep rep = compose_irreducible(3, base);
  auto samples = sample_curve(rep, base, 2);
  CHECK(samples.size() > 30);
  for (std::size_t i = 1; i < samples.size(); ++i)
    CHECK(samples[i - 1].point.theta < samples[i].point.theta);
  double worst = 0.0;
  for (const auto& s : samples)
    worst = std::max(worst, flag_distance(s.flag, veronese_flag(3, s.point)));
  CHECK(worst < 1e-7);
}

TEST_CASE("boundary_coordinate matches the attracting eigenflag line") {
  SurfaceRep base = fuchsian_genus2();
  SurfaceRep rep = compose_irreducible(4, base);
  for (const char* text : {"a1", "b2 a1", "A2 b1 a1"}) {
    Word w = Word::from_text(text);
    CirclePoint x = boundary_coordinate(w, base);
    WordEigen we = word_eigen(w, rep);
    CHECK(flag_distance(we.flag, veronese_flag(4, x)) < 1e-8);
  }
}

TEST_CASE("SampleSource guards against sparse coverage") {
  auto dense = veronese_samples(3, 500);
  SampleSource src(dense, 0.1);
  CirclePoint x = CirclePoint::from_angle(1.2345);
  CHECK(flag_distance(src.flag_at(x), veronese_flag(3, x)) < 0.1);
  CHECK(circle_distance(src.nearest(x).point, x) < 2.0 * M_PI / 500);

  auto sparse = veronese_samples(3, 4);
  SampleSource tight(sparse, 1e-3);
  CHECK_THROWS_AS(tight.flag_at(CirclePoint::from_angle(0.7)), InsufficientSamples);
  std::vector<CurveSample> none;
  CHECK_THROWS_AS(SampleSource{none}, InsufficientSamples);
}

TEST_CASE("check_frenet passes on exact Veronese samples") {
  auto samples = veronese_samples(4, 4000);
  CirclePoint anchor = samples[1234].point;
  std::vector<std::vector<int>> partitions = {{1, 1, 1, 1}, {2, 1, 1}, {3, 1}};
  CheckReport r = check_frenet(samples, anchor, partitions, default_schedule(), 1e-5);
  CHECK(r.pass);
  CHECK(r.worst_margin > 1e-5);
  for (const auto& [key, value] : r.extra)
    if (key.rfind("final_dist_p", 0) == 0) CHECK(value < 1e-2);
}

TEST_CASE("check_frenet needs window coverage") {
  auto samples = veronese_samples(3, 3);
  CHECK_THROWS_AS(check_frenet(samples, samples[0].point, {{1, 1, 1}},
                               default_schedule()),
                  InsufficientSamples);
}

TEST_CASE("check_positivity passes on exact Veronese samples") {
  auto samples = veronese_samples(3, 1500);
  for (auto which : {PositivityCheck::TwoHyper, PositivityCheck::HyperconvexN,
                     PositivityCheck::PropertyH, PositivityCheck::ThreeHyper,
                     PositivityCheck::Main14}) {
    CheckReport r = check_positivity(samples, which, 50, 9, 1e-6);
    CHECK_MESSAGE(r.pass, positivity_name(which));
    CHECK(r.worst_margin > 1e-6);
    CHECK(r.tuples == 50);
  }
}

TEST_CASE("one-sided limits agree on the Veronese curve") {
  auto samples = veronese_samples(4, 6000);
  CirclePoint anchor = samples[2000].point;
  for (int p : {2, 3}) {
    OneSidedResult r = one_sided_limits(samples, anchor, p, default_schedule());
    CHECK(r.plus.dim() == p);
    CHECK(r.minus.dim() == p);
    CHECK(r.agreement < 1e-2);
    CHECK(r.dist_plus.back() < 1e-2);
    CHECK(r.dist_minus.back() < 1e-2);
  }
}

TEST_CASE("monotone_trace on the Veronese curve") {
  VeroneseSource curve(3);
  auto W = std::make_pair(CirclePoint::from_angle(0.0), CirclePoint::from_angle(2.0));
  std::vector<CirclePoint> grid;
  for (int k = 0; k < 25; ++k)
    grid.push_back(CirclePoint::from_angle(2.3 + 0.15 * k));
  CheckReport fw = monotone_trace(curve, W, grid, MonotoneMode::FW);
  CHECK(fw.pass);
  CheckReport my = monotone_trace(curve, W, grid, MonotoneMode::MapY, 2);
  CHECK(my.pass);
  // grid touching the base pair is rejected
  std::vector<CirclePoint> bad = {CirclePoint::from_angle(0.0),
                                  CirclePoint::from_angle(3.0),
                                  CirclePoint::from_angle(4.0)};
  CHECK_THROWS_AS(monotone_trace(curve, W, bad, MonotoneMode::FW), ConfigError);
}

}  // TEST_SUITE
