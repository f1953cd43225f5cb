#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hitchin/report.hpp"

namespace hitchin {

// Fundamental solution system of f^(n) + a_2 f^(n-2) + ... + a_n f = 0 on a
// uniform grid. Row i of fundamental[k] is solution f_i at node k; column j
// holds the j-th derivative. No f^(n-1) term, so the Wronskian is constant.
struct HillSystem {
  int order = 0;
  double x0 = 0.0;
  double x1 = 0.0;
  double step = 0.0;
  std::vector<double> grid;
  std::vector<Eigen::MatrixXd> fundamental;
  double wronskian_drift = 0.0;  // max relative deviation from the initial value
};

// Coefficient functions a_2..a_n, in that order.
using HillCoeffs = std::vector<std::function<double(double)>>;

// Classical 4th-order fixed-step integration from identity initial data.
// Throws StepTooLarge when the Wronskian drifts beyond 1e-4 relative.
HillSystem hill_solve(int order, const HillCoeffs& coeffs, double x0, double x1,
                      double step);

// Constant-coefficient convenience wrapper.
HillSystem hill_solve_const(int order, const std::vector<double>& coeffs, double x0,
                            double x1, double step);

// Named constant-coefficient presets for the CLI and tests.
struct HillPreset {
  int order = 0;
  std::vector<double> coeffs;  // a_2..a_n
};

// "moment3" / "moment4": a == 0; "exp2": roots {-1,1}; "exp3": roots
// {-1,0,1}; "exp4": roots {-1.5,-0.5,0.5,1.5}.
HillPreset hill_preset(const std::string& name);
std::vector<std::string> hill_preset_names();

// New fundamental system B * M(x): same projective curve.
HillSystem hill_transformed(const HillSystem& sys, const Eigen::MatrixXd& b);

// Hyperconvexity of the curve [f_1 : ... : f_n] over random node tuples
// (pairwise farther than 10*step), plus Frenet agreement between derivative
// flags and shrinking-cluster spans at sampled anchors.
CheckReport hill_curve_check(const HillSystem& sys, int tuple_budget,
                             std::uint64_t seed, double margin_tol = 1e-6);

}  // namespace hitchin
