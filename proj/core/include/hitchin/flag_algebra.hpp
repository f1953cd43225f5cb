#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hitchin/errors.hpp"

namespace hitchin {

// Numerical tolerances shared by the subspace operations. Values are the
// library defaults; the CLI can override any of them per scene.
struct Tolerances {
  double direct_margin = 1e-7;    // a sum is direct when margin exceeds this
  double angle = 1e-6;            // principal-angle threshold for intersections
  double rank = 1e-10;            // relative rank cutoff for orthonormalize
  double theta_dedupe = 1e-9;     // fixed points closer than this are one point
  double theta_separation = 0.1;  // minimum separation inside check tuples;
                                  // quantitative margins are only meaningful
                                  // for quantitatively separated points
  double gap_slope = 0.05;        // Anosov certificate threshold on gap slopes
  double contraction_decades = 2.0;
};

constexpr int kMaxAmbientDim = 16;  // desk scale

// A k-plane in R^n held as an n-by-k matrix with orthonormal columns.
// Bases are gauge: comparisons go through projectors or principal angles.
class Subspace {
 public:
  Subspace(int ambient_dim, Eigen::MatrixXd orthonormal_basis);

  static Subspace zero(int ambient_dim) {
    return Subspace(ambient_dim, Eigen::MatrixXd(ambient_dim, 0));
  }

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }

  Eigen::MatrixXd projector() const { return basis_ * basis_.transpose(); }

  // Residual of v after projecting onto this subspace.
  double residual(const Eigen::VectorXd& v) const {
    return (v - basis_ * (basis_.transpose() * v)).norm();
  }

  bool contains(const Subspace& other, double tol = 1e-8) const;

 private:
  int ambient_dim_;
  Eigen::MatrixXd basis_;
};

// Full nested flag: levels of dimension 1..n-1.
class FlagChain {
 public:
  FlagChain(int ambient_dim, std::vector<Subspace> levels);

  int ambient_dim() const { return ambient_dim_; }
  const Subspace& level(int k) const { return levels_.at(k - 1); }
  int depth() const { return static_cast<int>(levels_.size()); }

 private:
  int ambient_dim_;
  std::vector<Subspace> levels_;
};

struct SumResult {
  int total_dim = 0;
  double margin = 0.0;  // smallest singular value of the stacked bases
  bool is_direct = false;
};

// Orthonormal basis for the column space. Throws RankDeficient when the
// columns are numerically dependent.
Subspace orthonormalize(const Eigen::MatrixXd& vectors, double rank_tol = 1e-10);

SumResult subspace_sum(const std::vector<Subspace>& parts,
                       double direct_tol = 1e-7);

// Span of the concatenated bases (no directness requirement).
Subspace subspace_span(const std::vector<Subspace>& parts, double rank_tol = 1e-10);

Subspace subspace_intersection(const Subspace& a, const Subspace& b,
                               double angle_tol = 1e-6);

// Principal angles between equal-ambient subspaces, ascending.
std::vector<double> principal_angles(const Subspace& a, const Subspace& b);

// Largest principal angle; for subspaces of different dimension the angle
// is computed on the smaller dimension padded by pi/2 per missing direction.
double subspace_distance(const Subspace& a, const Subspace& b);

double flag_distance(const FlagChain& f, const FlagChain& g);

}  // namespace hitchin
