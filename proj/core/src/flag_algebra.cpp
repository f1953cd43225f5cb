#include "hitchin/flag_algebra.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace hitchin {

Subspace::Subspace(int ambient_dim, Eigen::MatrixXd orthonormal_basis)
    : ambient_dim_(ambient_dim), basis_(std::move(orthonormal_basis)) {
  if (ambient_dim_ < 1 || ambient_dim_ > kMaxAmbientDim)
    throw DimensionMismatch("ambient dim " + std::to_string(ambient_dim_) +
                            " outside [1," + std::to_string(kMaxAmbientDim) + "]");
  if (basis_.rows() != ambient_dim_)
    throw DimensionMismatch("basis rows do not match ambient dim");
  if (basis_.cols() > ambient_dim_)
    throw DimensionOverflow("more basis columns than ambient dim");
  if (basis_.cols() > 0) {
    Eigen::MatrixXd gram = basis_.transpose() * basis_;
    gram -= Eigen::MatrixXd::Identity(basis_.cols(), basis_.cols());
    if (gram.cwiseAbs().maxCoeff() >= 1e-12)
      throw RankDeficient("basis columns are not orthonormal");
  }
}

bool Subspace::contains(const Subspace& other, double tol) const {
  if (other.ambient_dim() != ambient_dim_) throw MixedAmbient("contains");
  for (int j = 0; j < other.dim(); ++j)
    if (residual(other.basis().col(j)) > tol) return false;
  return true;
}

FlagChain::FlagChain(int ambient_dim, std::vector<Subspace> levels)
    : ambient_dim_(ambient_dim), levels_(std::move(levels)) {
  if (static_cast<int>(levels_.size()) != ambient_dim_ - 1)
    throw DimensionMismatch("flag must have levels 1..n-1");
  for (int k = 0; k < ambient_dim_ - 1; ++k) {
    if (levels_[k].ambient_dim() != ambient_dim_) throw MixedAmbient("flag level");
    if (levels_[k].dim() != k + 1)
      throw DimensionMismatch("flag level " + std::to_string(k + 1) + " has wrong dim");
    if (k + 1 < ambient_dim_ - 1) {
      for (int j = 0; j <= k; ++j)
        if (levels_[k + 1].residual(levels_[k].basis().col(j)) > 1e-10)
          throw DimensionMismatch("flag nesting violated at level " + std::to_string(k + 1));
    }
  }
}

Subspace orthonormalize(const Eigen::MatrixXd& vectors, double rank_tol) {
  const int n = static_cast<int>(vectors.rows());
  const int k = static_cast<int>(vectors.cols());
  if (k > n) throw DimensionOverflow("more columns than ambient dim");
  if (k == 0) return Subspace::zero(n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(vectors, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv(k - 1) <= rank_tol * sv(0))
    throw RankDeficient("numerical rank below column count (sigma_min/sigma_max = " +
                        std::to_string(sv(k - 1) / sv(0)) + ")");
  return Subspace(n, svd.matrixU().leftCols(k));
}

SumResult subspace_sum(const std::vector<Subspace>& parts, double direct_tol) {
  if (parts.empty()) throw DimensionMismatch("empty sum");
  const int n = parts[0].ambient_dim();
  int total = 0;
  for (const auto& p : parts) {
    if (p.ambient_dim() != n) throw MixedAmbient("subspace_sum");
    total += p.dim();
  }
  if (total > n)
    throw DimensionOverflow("sum of dims " + std::to_string(total) + " exceeds n=" +
                            std::to_string(n));
  SumResult r;
  r.total_dim = total;
  if (total == 0) {
    r.margin = 1.0;
    r.is_direct = true;
    return r;
  }
  Eigen::MatrixXd stacked(n, total);
  int col = 0;
  for (const auto& p : parts) {
    stacked.middleCols(col, p.dim()) = p.basis();
    col += p.dim();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  r.margin = svd.singularValues()(total - 1);
  r.is_direct = r.margin > direct_tol;
  return r;
}

Subspace subspace_span(const std::vector<Subspace>& parts, double rank_tol) {
  if (parts.empty()) throw DimensionMismatch("empty span");
  const int n = parts[0].ambient_dim();
  int total = 0;
  for (const auto& p : parts) {
    if (p.ambient_dim() != n) throw MixedAmbient("subspace_span");
    total += p.dim();
  }
  Eigen::MatrixXd stacked(n, total);
  int col = 0;
  for (const auto& p : parts) {
    stacked.middleCols(col, p.dim()) = p.basis();
    col += p.dim();
  }
  if (total == 0) return Subspace::zero(n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv(rank) > rank_tol * sv(0)) ++rank;
  return Subspace(n, svd.matrixU().leftCols(rank));
}

std::vector<double> principal_angles(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw MixedAmbient("principal_angles");
  const int m = std::min(a.dim(), b.dim());
  if (m == 0) return {};
  // cosines from a^T b (accurate near pi/2), sines from the projection onto
  // the complement of a (accurate near 0); acos alone floors small angles at
  // sqrt(eps) because cos is flat there
  Eigen::MatrixXd cross = a.basis().transpose() * b.basis();
  Eigen::JacobiSVD<Eigen::MatrixXd> cos_svd(cross);
  Eigen::MatrixXd residual =
      b.basis() - a.basis() * (a.basis().transpose() * b.basis());
  Eigen::JacobiSVD<Eigen::MatrixXd> sin_svd(residual);
  const int extra = b.dim() - m;  // directions outside the smaller span
  std::vector<double> angles(m);
  for (int i = 0; i < m; ++i) {
    const double c = std::clamp(cos_svd.singularValues()(i), 0.0, 1.0);
    // sines ascend as cosines descend; skip the sines of the extra directions
    const double s =
        std::clamp(sin_svd.singularValues()(m - 1 - i + extra), 0.0, 1.0);
    angles[i] = s < M_SQRT1_2 ? std::asin(s) : std::acos(c);
  }
  return angles;
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b,
                               double angle_tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw MixedAmbient("subspace_intersection");
  const int m = std::min(a.dim(), b.dim());
  if (m == 0) return Subspace::zero(a.ambient_dim());
  Eigen::MatrixXd cross = a.basis().transpose() * b.basis();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU);
  int count = 0;
  for (int i = 0; i < m; ++i) {
    double c = std::clamp(svd.singularValues()(i), 0.0, 1.0);
    if (std::acos(c) < angle_tol) ++count;
  }
  if (count == 0) return Subspace::zero(a.ambient_dim());
  Eigen::MatrixXd dirs = a.basis() * svd.matrixU().leftCols(count);
  return orthonormalize(dirs);
}

double subspace_distance(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw MixedAmbient("subspace_distance");
  if (a.dim() != b.dim()) return M_PI / 2.0;
  if (a.dim() == 0) return 0.0;
  auto angles = principal_angles(a, b);
  return angles.back();
}

double flag_distance(const FlagChain& f, const FlagChain& g) {
  if (f.ambient_dim() != g.ambient_dim()) throw MixedAmbient("flag_distance");
  double d = 0.0;
  for (int k = 1; k <= f.depth(); ++k)
    d = std::max(d, subspace_distance(f.level(k), g.level(k)));
  return d;
}

}  // namespace hitchin
