#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hitchin/limit_curve.hpp"
#include "hitchin/report.hpp"
#include "hitchin/representations.hpp"
#include "hitchin/surface_group.hpp"

namespace hitchin {

// Positively ordered boundary triple (x_plus, x_zero, x_minus).
struct Triple {
  CirclePoint x_plus;
  CirclePoint x_zero;
  CirclePoint x_minus;

  Triple reversed() const { return Triple{x_minus, x_zero, x_plus}; }
};

// Throws on pairwise separation <= 1e-8; when require_orientation, also
// throws unless (x_plus, x_zero, x_minus) is positively ordered.
void validate_triple(const Triple& w, bool require_orientation = true);

// Geodesic flow on the triple space: x_zero is pushed by the hyperbolic
// one-parameter subgroup with attracting fixed point x_plus and repelling
// fixed point x_minus; x_plus/x_minus stay put. Additive in t.
Triple flow(const Triple& w, double t);

// Time-t Mobius matrix of that subgroup (eigenvalues e^t, e^{-t}).
Eigen::Matrix2d flow_matrix(const Triple& w, double t);

// Norm of the canonical generator phi: V^i -> V^{i+1} of the flag-bundle
// splitting, V^j = xi^j(x_minus) cap xi^{n-j+1}(x_plus), measured with the
// forms alpha_j whose kernel is xi^{j-1}(x_minus) + xi^{n-j}(x_plus) and a
// vector z spanning xi^1(x_zero). Scale choices cancel in flow ratios.
double bundle_norm(const FlagSource& curve, const Triple& w, int i,
                   double phi_scale = 1.0, const Tolerances& tol = {});

// log bundle_norm along flow(w, t) for each requested time.
std::vector<double> contraction_log_norms(const FlagSource& curve, const Triple& w,
                                          int i, const std::vector<double>& times,
                                          const Tolerances& tol = {});

// Pass iff the log-norm is strictly decreasing along the flow (1e-9 slack)
// and the endpoint drop reaches tol.contraction_decades decades.
CheckReport contraction_trace(const FlagSource& curve, const Triple& w, int i,
                              const std::vector<double>& times,
                              const Tolerances& tol = {});

// Least-squares growth of the singular-value gaps against word length.
struct GapGrowth {
  std::vector<double> per_root_slopes;  // slope of log(s_i/s_{i+1}), i=1..n-1
  std::vector<double> intercepts;
  double min_slope = 0.0;
};

GapGrowth gap_growth(const SurfaceRep& rep, const std::vector<Word>& words);

CheckReport gap_growth_report(const SurfaceRep& rep, const std::vector<Word>& words,
                              double slope_threshold = 0.05);

// b = (phi_x(v_z) * phi_y(v_t)) / (phi_x(v_t) * phi_y(v_z)) with v_p
// spanning xi^1(p) and phi_p a form vanishing on xi^{n-1}(p).
double crossratio(const FlagSource& curve, CirclePoint x, CirclePoint y,
                  CirclePoint z, CirclePoint t);

// log(lambda_max / lambda_min) of evaluate(w, rep); cross-checked at every
// witness y against log|b(gamma+, gamma-, y, gamma y)| computed with
// equivariant line choices, which must agree to identity_tol.
double period(const SurfaceRep& rep, const Word& w,
              const std::vector<CirclePoint>& witnesses,
              double identity_tol = 1e-8);

}  // namespace hitchin
