#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "hitchin/flag_algebra.hpp"
#include "hitchin/report.hpp"
#include "hitchin/representations.hpp"

namespace hitchin {

// Boundary point of the surface group, parametrized on the base Fuchsian
// limit circle: theta = 2*phi with phi in [0,pi) the angle of the
// attracting eigenline in RP^1.
struct CirclePoint {
  double theta = 0.0;

  static CirclePoint from_angle(double theta);
  static CirclePoint from_slope_angle(double phi) { return from_angle(2.0 * phi); }

  // Unit vector (cos(theta/2), sin(theta/2)) spanning the eigenline.
  Eigen::Vector2d line() const;
};

// Circular distance in [0, pi].
double circle_distance(CirclePoint a, CirclePoint b);
// Signed offset of x from anchor in (-pi, pi].
double circle_offset(CirclePoint anchor, CirclePoint x);
// Positive cyclic orientation of (a, b, c).
bool positively_ordered(CirclePoint a, CirclePoint b, CirclePoint c);

// Projective action of a 2x2 matrix on the boundary circle.
CirclePoint mobius_point(const Eigen::Matrix2d& g, CirclePoint x);

struct CurveSample {
  CirclePoint point;
  FlagChain flag;
  Word word;
  double gap = 0.0;
};

// Level k of a flag extended by conventions xi^0 = 0 and xi^n = E.
Subspace flag_level(const FlagChain& f, int k);

CirclePoint boundary_coordinate(const Word& w, const SurfaceRep& base);
CirclePoint attracting_point(const Eigen::Matrix2d& m);

// Flag values along the limit curve, by closed form or by sample lookup.
class FlagSource {
 public:
  virtual ~FlagSource() = default;
  virtual int ambient_dim() const = 0;
  virtual FlagChain flag_at(CirclePoint x) const = 0;
};

// Closed-form Veronese flag of the Fuchsian limit curve.
FlagChain veronese_flag(int n, CirclePoint x);

class VeroneseSource : public FlagSource {
 public:
  explicit VeroneseSource(int n) : n_(n) {}
  int ambient_dim() const override { return n_; }
  FlagChain flag_at(CirclePoint x) const override { return veronese_flag(n_, x); }

 private:
  int n_;
};

// Nearest-sample lookup with a separation guard; documents interpolation
// error instead of hiding it.
class SampleSource : public FlagSource {
 public:
  SampleSource(const std::vector<CurveSample>& samples, double guard = 1e-4);
  int ambient_dim() const override;
  FlagChain flag_at(CirclePoint x) const override;
  const CurveSample& nearest(CirclePoint x) const;

 private:
  const std::vector<CurveSample>* samples_;
  double guard_;
};

// Attracting eigenflags at the fixed points of all ball words, deduplicated
// by theta and sorted. Throws NotLoxodromic naming the failing word when
// the rep has left the certified regime.
std::vector<CurveSample> sample_curve(const SurfaceRep& rep, const SurfaceRep& base,
                                      int radius, const Tolerances& tol = {});

// Default shrinking window radii: 0.2 * 2^-k, k = 0..5.
std::vector<double> default_schedule();

CheckReport check_frenet(const std::vector<CurveSample>& samples, CirclePoint anchor,
                         const std::vector<std::vector<int>>& partitions,
                         const std::vector<double>& schedule,
                         double margin_tol = 1e-7, double final_limit = 1e-2,
                         const Tolerances& tol = {});

enum class PositivityCheck { TwoHyper, ThreeHyper, PropertyH, Main14, HyperconvexN };

const char* positivity_name(PositivityCheck which);

CheckReport check_positivity(const std::vector<CurveSample>& samples,
                             PositivityCheck which, int budget, std::uint64_t seed,
                             double margin_tol = 1e-7, const Tolerances& tol = {});

struct OneSidedResult {
  Subspace plus;
  Subspace minus;
  double agreement = 0.0;
  std::vector<double> dist_plus;   // distance to xi^p(anchor) per window
  std::vector<double> dist_minus;
};

OneSidedResult one_sided_limits(const std::vector<CurveSample>& samples,
                                CirclePoint anchor, int p,
                                const std::vector<double>& schedule,
                                const Tolerances& tol = {});

enum class MonotoneMode { FW, MapY };

// f_W: y -> xi^{n-1}(y) cap (xi^1(w1) + xi^1(w2)), traced as an angle in
// the 2-plane; passes when strictly monotone.
// map_Y: y -> (xi^{n-p+1}(y) + xi^{p-2}(x)) cap G_{p,x,z} with W = (x,z);
// passes when all values are pairwise distinct.
CheckReport monotone_trace(const FlagSource& flags,
                           std::pair<CirclePoint, CirclePoint> W,
                           const std::vector<CirclePoint>& grid, MonotoneMode mode,
                           int p = 2, const Tolerances& tol = {});

}  // namespace hitchin
