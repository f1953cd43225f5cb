#include "hitchin/anosov_cert.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <set>

#include "hitchin/util.hpp"

namespace hitchin {

namespace {

// Unit normal of a codimension-1 subspace, i.e. the linear form (up to
// scale) whose kernel is that subspace.
Eigen::VectorXd form_normal(const Subspace& kernel) {
  const int n = kernel.ambient_dim();
  if (kernel.dim() != n - 1)
    throw DegenerateSum("form kernel has dim " + std::to_string(kernel.dim()) +
                        ", expected " + std::to_string(n - 1));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(kernel.basis(), Eigen::ComputeFullU);
  return svd.matrixU().col(n - 1);
}

Subspace line_intersection(const Subspace& a, const Subspace& b, const Tolerances& tol,
                           const char* what) {
  Subspace inter = subspace_intersection(a, b, tol.angle);
  if (inter.dim() != 1)
    throw DegenerateSum(std::string(what) + " has dim " + std::to_string(inter.dim()) +
                        ", expected 1");
  return inter;
}

}  // namespace

void validate_triple(const Triple& w, bool require_orientation) {
  const double sep = 1e-8;
  if (circle_distance(w.x_plus, w.x_zero) <= sep ||
      circle_distance(w.x_zero, w.x_minus) <= sep ||
      circle_distance(w.x_plus, w.x_minus) <= sep)
    throw ConfigError("triple points not separated by 1e-8");
  if (require_orientation && !positively_ordered(w.x_plus, w.x_zero, w.x_minus))
    throw ConfigError("triple not positively ordered");
}

Eigen::Matrix2d flow_matrix(const Triple& w, double t) {
  validate_triple(w, false);
  Eigen::Matrix2d p;
  p.col(0) = w.x_plus.line();
  p.col(1) = w.x_minus.line();
  Eigen::Vector2d d(std::exp(t), std::exp(-t));
  return p * d.asDiagonal() * p.inverse();
}

Triple flow(const Triple& w, double t) {
  validate_triple(w, false);
  Triple out = w;
  out.x_zero = mobius_point(flow_matrix(w, t), w.x_zero);
  return out;
}

double bundle_norm(const FlagSource& curve, const Triple& w, int i, double phi_scale,
                   const Tolerances& tol) {
  validate_triple(w, false);
  const int n = curve.ambient_dim();
  if (i < 1 || i > n - 1) throw Error("bundle_norm: need 1 <= i <= n-1");
  FlagChain fp = curve.flag_at(w.x_plus);
  FlagChain fm = curve.flag_at(w.x_minus);
  FlagChain f0 = curve.flag_at(w.x_zero);

  Subspace vi = line_intersection(flag_level(fm, i), flag_level(fp, n - i + 1), tol, "V^i");
  Subspace vi1 =
      line_intersection(flag_level(fm, i + 1), flag_level(fp, n - i), tol, "V^{i+1}");
  Eigen::VectorXd alpha_i =
      form_normal(subspace_span({flag_level(fm, i - 1), flag_level(fp, n - i)}));
  Eigen::VectorXd alpha_i1 =
      form_normal(subspace_span({flag_level(fm, i), flag_level(fp, n - i - 1)}));

  Eigen::VectorXd u = vi.basis().col(0);
  Eigen::VectorXd phi_u = phi_scale * vi1.basis().col(0);
  Eigen::VectorXd z = f0.level(1).basis().col(0);

  const double num = std::abs(alpha_i1.dot(phi_u)) * std::abs(alpha_i.dot(z));
  const double den = std::abs(alpha_i1.dot(z)) * std::abs(alpha_i.dot(u));
  if (den < 1e-280 || std::abs(alpha_i.dot(u)) < 1e-12 ||
      std::abs(alpha_i1.dot(z)) < 1e-12 * z.norm())
    throw DegeneratePairing("bundle_norm pairing vanished");
  return num / den;
}

std::vector<double> contraction_log_norms(const FlagSource& curve, const Triple& w,
                                          int i, const std::vector<double>& times,
                                          const Tolerances& tol) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(std::log(bundle_norm(curve, flow(w, t), i, 1.0, tol)));
  return out;
}

CheckReport contraction_trace(const FlagSource& curve, const Triple& w, int i,
                              const std::vector<double>& times, const Tolerances& tol) {
  if (!std::is_sorted(times.begin(), times.end()))
    throw ConfigError("contraction_trace: times must be ascending");
  std::vector<double> logs = contraction_log_norms(curve, w, i, times, tol);

  CheckReport r;
  r.check = "contraction";
  r.n = curve.ambient_dim();
  r.tuples = static_cast<int>(times.size());
  r.tolerance = -1e-9;
  r.pass = true;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < logs.size(); ++k) {
    const double step = logs[k] - logs[k + 1];  // positive when decreasing
    worst = std::min(worst, step);
    if (step <= -1e-9) {
      r.pass = false;
      r.note = "log-norm increases at t=" + std::to_string(times[k + 1]);
    }
  }
  r.worst_margin = logs.size() > 1 ? worst : 0.0;
  const double drop_decades =
      logs.size() > 1 ? (logs.front() - logs.back()) / std::log(10.0) : 0.0;
  r.extra["drop_decades"] = drop_decades;
  r.extra["log_norm_first"] = logs.front();
  r.extra["log_norm_last"] = logs.back();
  if (times.size() < 2 || times.front() >= 0.0 || times.back() <= 0.0) {
    r.pass = false;
    r.note = "insufficient time span (need negative and positive times)";
  } else if (drop_decades < tol.contraction_decades) {
    r.pass = false;
    if (r.note.empty())
      r.note = "drop of " + std::to_string(drop_decades) + " decades below required " +
               std::to_string(tol.contraction_decades);
  }
  return r;
}

GapGrowth gap_growth(const SurfaceRep& rep, const std::vector<Word>& words) {
  const int n = rep.n;
  std::vector<const Word*> ws;
  for (const auto& w : words)
    if (w.length() > 0) ws.push_back(&w);
  std::set<int> lengths;
  for (const auto* w : ws) lengths.insert(w->length());
  if (ws.size() < 30 || lengths.size() < 4)
    throw TooFewWords("need >= 30 nonempty words over >= 4 lengths, got " +
                      std::to_string(ws.size()) + " words over " +
                      std::to_string(lengths.size()) + " lengths");

  Eigen::MatrixXd gaps(ws.size(), n - 1);
  parallel_for(ws.size(), [&](std::size_t k) {
    Eigen::VectorXd sv = word_singular_values(*ws[k], rep);
    for (int i = 0; i < n - 1; ++i) gaps(k, i) = std::log(sv(i) / sv(i + 1));
  });

  GapGrowth g;
  g.min_slope = std::numeric_limits<double>::infinity();
  std::vector<double> xs(ws.size());
  for (std::size_t k = 0; k < ws.size(); ++k) xs[k] = ws[k]->length();
  for (int i = 0; i < n - 1; ++i) {
    std::vector<double> ys(ws.size());
    for (std::size_t k = 0; k < ws.size(); ++k) ys[k] = gaps(k, i);
    LineFit fit = fit_line(xs, ys);
    g.per_root_slopes.push_back(fit.slope);
    g.intercepts.push_back(fit.intercept);
    g.min_slope = std::min(g.min_slope, fit.slope);
  }
  return g;
}

CheckReport gap_growth_report(const SurfaceRep& rep, const std::vector<Word>& words,
                              double slope_threshold) {
  GapGrowth g = gap_growth(rep, words);
  CheckReport r;
  r.check = "gap_growth";
  r.n = rep.n;
  r.tuples = 0;
  for (const auto& w : words)
    if (w.length() > 0) ++r.tuples;
  r.worst_margin = g.min_slope;
  r.tolerance = slope_threshold;
  r.pass = g.min_slope > slope_threshold;
  for (std::size_t i = 0; i < g.per_root_slopes.size(); ++i) {
    r.extra["slope_" + std::to_string(i + 1)] = g.per_root_slopes[i];
    r.extra["intercept_" + std::to_string(i + 1)] = g.intercepts[i];
    if (!r.pass && g.per_root_slopes[i] <= slope_threshold)
      r.note += (r.note.empty() ? "root " : ", root ") + std::to_string(i + 1) +
                " slope " + std::to_string(g.per_root_slopes[i]);
  }
  return r;
}

double crossratio(const FlagSource& curve, CirclePoint x, CirclePoint y, CirclePoint z,
                  CirclePoint t) {
  const int n = curve.ambient_dim();
  FlagChain fx = curve.flag_at(x), fy = curve.flag_at(y);
  Eigen::VectorXd phi_x = form_normal(flag_level(fx, n - 1));
  Eigen::VectorXd phi_y = form_normal(flag_level(fy, n - 1));
  Eigen::VectorXd vz = curve.flag_at(z).level(1).basis().col(0);
  Eigen::VectorXd vt = curve.flag_at(t).level(1).basis().col(0);
  const double xz = phi_x.dot(vz), yt = phi_y.dot(vt);
  const double xt = phi_x.dot(vt), yz = phi_y.dot(vz);
  if (std::abs(xt) < 1e-12 || std::abs(yz) < 1e-12)
    throw DegeneratePairing("crossratio denominator pairing vanished");
  return (xz * yt) / (xt * yz);
}

double period(const SurfaceRep& rep, const Word& w,
              const std::vector<CirclePoint>& witnesses, double identity_tol) {
  const int n = rep.n;
  WordEigen we = [&] {
    try {
      return word_eigen(w, rep);
    } catch (const Error& e) {
      throw NotLoxodromic(std::string("word '") + w.to_text() + "': " + e.what());
    }
  }();
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const double lmax = std::abs(we.eigenvalues(0));
  const double lmin = std::abs(we.eigenvalues(n - 1));
  const double p0 = std::log(lmax) - std::log(lmin);

  // the pairing chain below multiplies V back against V^-1, which loses
  // cond(V) digits; extended precision keeps the residual well under the
  // certificate tolerance for the strongly non-normal words
  const LMat& vecs = we.vectors_ext;
  LVec lambda = we.eigenvalues.cast<long double>();
  LMat vinv = vecs.inverse();
  // left eigenvectors: phi_plus kills xi^{n-1}(gamma+), phi_minus kills
  // xi^{n-1}(gamma-)
  LVec phi_plus = vinv.row(n - 1).transpose();
  LVec phi_minus = vinv.row(0).transpose();

  int usable = 0;
  for (const auto& y : witnesses) {
    LVec vz = veronese_flag(n, y).level(1).basis().col(0).cast<long double>();
    LVec c = vinv * vz;  // witness in eigencoordinates
    // the witness is degenerate iff it has no component on an extreme
    // eigenline. Near-degenerate witnesses are also excluded: the pairing
    // of gamma*z against phi_plus cancels its dominant component, leaving
    // round-off of size ~ eps * e^{p0} * |c_0 / c_{n-1}|, so witnesses too
    // close to the repelling hyperplane cannot support the identity at
    // tolerance in finite precision.
    const long double cnorm = c.norm();
    if (std::abs(c(n - 1)) < 1e-12L * cnorm || std::abs(c(0)) < 1e-12L * cnorm)
      throw DegeneratePairing("witness theta=" + std::to_string(y.theta) +
                              " pairs degenerately");
    const long double predicted = 1e-18L * std::exp(static_cast<long double>(p0)) *
                                  std::abs(c(0) / c(n - 1));
    if (predicted > 0.1L * static_cast<long double>(identity_tol)) continue;
    ++usable;
    // act through the decomposition so the eigenline components scale by
    // exactly the computed eigenvalues (the assembled product would drown
    // the small components in round-off)
    LVec vt = vecs * lambda.cwiseProduct(c);
    const long double xz = phi_plus.dot(vz), yt = phi_minus.dot(vt);
    const long double xt = phi_plus.dot(vt), yz = phi_minus.dot(vz);
    const double logb =
        static_cast<double>(std::log(std::abs((xz * yt) / (xt * yz))));
    if (std::abs(logb - p0) >= identity_tol)
      throw CrossratioMismatch("witness theta=" + std::to_string(y.theta) +
                               ": |log b| = " + std::to_string(logb) + " vs period " +
                               std::to_string(p0));
  }
  if (usable == 0 && !witnesses.empty())
    throw DegeneratePairing("no witness supports the identity at tolerance " +
                            std::to_string(identity_tol));
  return p0;
}

}  // namespace hitchin
