#include "hitchin/limit_curve.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "hitchin/util.hpp"

namespace hitchin {

namespace {

double wrap_2pi(double t) {
  t = std::fmod(t, 2.0 * M_PI);
  if (t < 0) t += 2.0 * M_PI;
  // guard against -0 and 2*pi rounding
  if (t >= 2.0 * M_PI) t = 0.0;
  return t;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

CirclePoint CirclePoint::from_angle(double theta) {
  return CirclePoint{wrap_2pi(theta)};
}

Eigen::Vector2d CirclePoint::line() const {
  return {std::cos(theta / 2.0), std::sin(theta / 2.0)};
}

double circle_distance(CirclePoint a, CirclePoint b) {
  double d = std::abs(a.theta - b.theta);
  return std::min(d, 2.0 * M_PI - d);
}

double circle_offset(CirclePoint anchor, CirclePoint x) {
  double d = std::remainder(x.theta - anchor.theta, 2.0 * M_PI);
  return d;
}

bool positively_ordered(CirclePoint a, CirclePoint b, CirclePoint c) {
  const double ab = wrap_2pi(b.theta - a.theta);
  const double ac = wrap_2pi(c.theta - a.theta);
  return ab > 0 && ac > 0 && ab < ac;
}

CirclePoint mobius_point(const Eigen::Matrix2d& g, CirclePoint x) {
  Eigen::Vector2d v = g * x.line();
  double phi = std::atan2(v(1), v(0));
  if (phi < 0) phi += M_PI;
  if (phi >= M_PI) phi -= M_PI;
  return CirclePoint::from_slope_angle(phi);
}

Subspace flag_level(const FlagChain& f, int k) {
  const int n = f.ambient_dim();
  if (k == 0) return Subspace::zero(n);
  if (k == n) return Subspace(n, Eigen::MatrixXd::Identity(n, n));
  return f.level(k);
}

CirclePoint attracting_point(const Eigen::Matrix2d& m) {
  const double tr = m.trace();
  if (std::abs(tr) <= 2.0 + 1e-8)
    throw NotHyperbolic("|trace| = " + std::to_string(std::abs(tr)));
  const double disc = std::sqrt(tr * tr - 4.0);
  const double lambda = (tr + (tr >= 0 ? disc : -disc)) / 2.0;  // |lambda| > 1
  // eigenvector from the better conditioned row
  Eigen::Vector2d v1(m(0, 1), lambda - m(0, 0));
  Eigen::Vector2d v2(lambda - m(1, 1), m(1, 0));
  Eigen::Vector2d v = v1.norm() >= v2.norm() ? v1 : v2;
  double phi = std::atan2(v(1), v(0));
  if (phi < 0) phi += M_PI;
  if (phi >= M_PI) phi -= M_PI;
  return CirclePoint::from_slope_angle(phi);
}

CirclePoint boundary_coordinate(const Word& w, const SurfaceRep& base) {
  if (base.n != 2) throw Error("boundary_coordinate: base must have n=2");
  return attracting_point(Eigen::Matrix2d(evaluate(w, base)));
}

FlagChain veronese_flag(int n, CirclePoint x) {
  const double c = std::cos(x.theta / 2.0), s = std::sin(x.theta / 2.0);
  // level k = polynomials divisible by (c*s + s*t)^{n-k}, in the
  // normalized monomial basis
  std::vector<Subspace> levels;
  for (int k = 1; k <= n - 1; ++k) {
    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(n, k);
    for (int j = 0; j < k; ++j) {
      // (c s + sigma t)^{n-k} * s^{k-1-j} t^j
      for (int i = 0; i <= n - k; ++i) {
        const double coef = binom(n - k, i) * std::pow(c, n - k - i) * std::pow(s, i);
        raw(i + j, j) += coef;
      }
    }
    for (int r = 0; r < n; ++r) raw.row(r) /= std::sqrt(binom(n - 1, r));
    levels.push_back(orthonormalize(raw));
  }
  return FlagChain(n, std::move(levels));
}

SampleSource::SampleSource(const std::vector<CurveSample>& samples, double guard)
    : samples_(&samples), guard_(guard) {
  if (samples.empty()) throw InsufficientSamples("SampleSource: no samples");
}

int SampleSource::ambient_dim() const { return (*samples_)[0].flag.ambient_dim(); }

const CurveSample& SampleSource::nearest(CirclePoint x) const {
  const auto& ss = *samples_;
  // samples are sorted by theta
  auto it = std::lower_bound(ss.begin(), ss.end(), x.theta,
                             [](const CurveSample& s, double t) { return s.point.theta < t; });
  const CurveSample* best = nullptr;
  double bestd = std::numeric_limits<double>::infinity();
  for (int off = -1; off <= 1; ++off) {
    auto jt = it;
    if (off == -1) {
      if (jt == ss.begin()) jt = ss.end();
      --jt;
    } else if (off == 1) {
      if (jt == ss.end()) jt = ss.begin();
    } else {
      if (jt == ss.end()) jt = ss.begin();
    }
    double d = circle_distance(jt->point, x);
    if (d < bestd) {
      bestd = d;
      best = &*jt;
    }
  }
  if (bestd > guard_)
    throw InsufficientSamples("no curve sample within guard " + std::to_string(guard_) +
                              " of theta=" + std::to_string(x.theta));
  return *best;
}

FlagChain SampleSource::flag_at(CirclePoint x) const { return nearest(x).flag; }

std::vector<CurveSample> sample_curve(const SurfaceRep& rep, const SurfaceRep& base,
                                      int radius, const Tolerances& tol) {
  if (rep.genus != base.genus) throw Error("sample_curve: genus mismatch");
  Ball b = ball(base.genus, radius);

  // fixed points under the base rep, powers pruned, deduplicated by theta
  struct Cand {
    double theta;
    const Word* word;
  };
  std::vector<Cand> cands;
  std::vector<double> seen;  // sorted thetas
  for (const auto& w : b.words) {
    if (w.power_order() > 1) continue;
    Eigen::Matrix2d m = evaluate(w, base);
    if (std::abs(m.trace()) <= 2.0 + 1e-8) continue;  // relation-trivial or elliptic
    const double theta = attracting_point(m).theta;
    auto it = std::lower_bound(seen.begin(), seen.end(), theta - tol.theta_dedupe);
    bool dup = false;
    for (; it != seen.end() && *it <= theta + tol.theta_dedupe; ++it) dup = true;
    if (!dup && !seen.empty()) {
      // wraparound duplicates near 0 / 2*pi
      if (theta < tol.theta_dedupe && seen.back() > 2 * M_PI - tol.theta_dedupe) dup = true;
      if (theta > 2 * M_PI - tol.theta_dedupe && seen.front() < tol.theta_dedupe) dup = true;
    }
    if (dup) continue;
    seen.insert(std::lower_bound(seen.begin(), seen.end(), theta), theta);
    cands.push_back({theta, &w});
  }

  std::vector<CurveSample> out;
  out.reserve(cands.size());
  std::vector<std::optional<CurveSample>> slots(cands.size());
  std::vector<std::string> errors(cands.size());
  parallel_for(cands.size(), [&](std::size_t i) {
    try {
      LoxodromicData lox = word_loxodromic(*cands[i].word, rep);
      slots[i] = CurveSample{CirclePoint::from_angle(cands[i].theta), lox.eigenflag,
                             *cands[i].word, lox.min_gap};
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!errors[i].empty())
      throw NotLoxodromic("at word '" + cands[i].word->to_text() + "': " + errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  std::sort(out.begin(), out.end(),
            [](const CurveSample& a, const CurveSample& b) { return a.point.theta < b.point.theta; });
  return out;
}

std::vector<double> default_schedule() {
  std::vector<double> s;
  for (int k = 0; k <= 5; ++k) s.push_back(0.2 * std::pow(2.0, -k));
  return s;
}

namespace {

// Samples within eps of anchor (one side, both sides with side=0),
// nearest first, anchor excluded. With min_sep > 0 the selection is greedy
// nearest-first with pairwise separation at least min_sep: the raw nearest
// samples can be arbitrarily close together (sampled thetas cluster), which
// would collapse the spans built from the window.
std::vector<const CurveSample*> window_points(const std::vector<CurveSample>& samples,
                                              CirclePoint anchor, double eps, int side,
                                              double dedupe, double min_sep = 0.0) {
  std::vector<const CurveSample*> pts;
  for (const auto& s : samples) {
    const double off = circle_offset(anchor, s.point);
    if (std::abs(off) < dedupe) continue;
    if (std::abs(off) > eps) continue;
    if (side > 0 && off <= 0) continue;
    if (side < 0 && off >= 0) continue;
    pts.push_back(&s);
  }
  std::sort(pts.begin(), pts.end(), [&](const CurveSample* a, const CurveSample* b) {
    return std::abs(circle_offset(anchor, a->point)) < std::abs(circle_offset(anchor, b->point));
  });
  if (min_sep > 0.0) {
    std::vector<const CurveSample*> spread;
    for (const CurveSample* s : pts) {
      bool ok = true;
      for (const CurveSample* t : spread)
        if (circle_distance(s->point, t->point) < min_sep) {
          ok = false;
          break;
        }
      if (ok) spread.push_back(s);
    }
    return spread;
  }
  return pts;
}

const CurveSample& sample_at(const std::vector<CurveSample>& samples, CirclePoint anchor,
                             double dedupe) {
  for (const auto& s : samples)
    if (circle_distance(s.point, anchor) <= dedupe) return s;
  throw InsufficientSamples("anchor theta=" + std::to_string(anchor.theta) +
                            " is not a sample point");
}

}  // namespace

CheckReport check_frenet(const std::vector<CurveSample>& samples, CirclePoint anchor,
                         const std::vector<std::vector<int>>& partitions,
                         const std::vector<double>& schedule, double margin_tol,
                         double final_limit, const Tolerances& tol) {
  if (samples.empty()) throw InsufficientSamples("no samples");
  const int n = samples[0].flag.ambient_dim();
  const CurveSample& anchor_sample = sample_at(samples, anchor, tol.theta_dedupe);

  CheckReport r;
  r.check = "frenet";
  r.n = n;
  r.tolerance = margin_tol;
  r.worst_margin = std::numeric_limits<double>::infinity();
  r.pass = true;

  int tested = 0;
  for (std::size_t pi = 0; pi < partitions.size(); ++pi) {
    const auto& part = partitions[pi];
    int p = 0;
    for (int ni : part) {
      if (ni < 1) throw Error("check_frenet: partition entries must be positive");
      p += ni;
    }
    if (p > n) throw DimensionOverflow("partition sums to " + std::to_string(p));
    const int l = static_cast<int>(part.size());

    std::vector<double> dists;
    for (double eps : schedule) {
      std::vector<const CurveSample*> pts;
      if (l == 1) {
        // single block: the window is irrelevant
        pts = {&anchor_sample};
      } else {
        pts = window_points(samples, anchor, eps, 0, tol.theta_dedupe, eps / (2.0 * l));
        if (static_cast<int>(pts.size()) < l)
          throw InsufficientSamples("window eps=" + std::to_string(eps) + " holds " +
                                    std::to_string(pts.size()) +
                                    " spread samples, need " + std::to_string(l));
        pts.resize(l);
      }
      Eigen::MatrixXd stacked(n, p);
      int col = 0;
      for (int i = 0; i < l; ++i) {
        stacked.middleCols(col, part[i]) = flag_level(pts[i]->flag, part[i]).basis();
        col += part[i];
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinU);
      const double sigma_min = svd.singularValues()(p - 1);
      // the raw sigma_min of a directness frame vanishes to order
      // prod_{i<j} d(y_i,y_j)^{n_i n_j} as the window shrinks (osculation
      // order of the Frenet curve); normalizing by that order gives a
      // scale-free transversality margin that stays bounded away from zero
      // exactly when the curve is hyperconvex at the anchor
      double denom = 1.0;
      for (int i = 0; i < l; ++i)
        for (int j = i + 1; j < l; ++j) {
          const double d = circle_distance(pts[i]->point, pts[j]->point);
          denom *= std::pow(d, part[i] * part[j]);
        }
      const double margin = denom > 0.0 ? sigma_min / denom : sigma_min;
      r.worst_margin = std::min(r.worst_margin, margin);
      if (margin <= margin_tol) {
        r.pass = false;
        r.note = "sum not direct at eps=" + std::to_string(eps);
        dists.push_back(M_PI / 2);
      } else {
        Eigen::MatrixXd qfull =
            Eigen::HouseholderQR<Eigen::MatrixXd>(stacked).householderQ();
        Subspace span(n, qfull.leftCols(p));
        dists.push_back(subspace_distance(span, flag_level(anchor_sample.flag, p)));
      }
      ++tested;
    }
    for (std::size_t k = 0; k + 1 < dists.size(); ++k) {
      if (dists[k + 1] > 1.10 * dists[k] + 1e-12) {
        r.pass = false;
        r.note = "distances not monotone for partition " + std::to_string(pi);
      }
    }
    if (dists.back() >= final_limit) {
      r.pass = false;
      r.note = "final distance " + std::to_string(dists.back()) + " above limit";
    }
    r.extra["final_dist_p" + std::to_string(pi)] = dists.back();
  }
  r.tuples = tested;
  return r;
}

const char* positivity_name(PositivityCheck which) {
  switch (which) {
    case PositivityCheck::TwoHyper: return "two_hyper";
    case PositivityCheck::ThreeHyper: return "three_hyper";
    case PositivityCheck::PropertyH: return "property_H";
    case PositivityCheck::Main14: return "main14";
    case PositivityCheck::HyperconvexN: return "hyperconvex_n";
  }
  return "?";
}

CheckReport check_positivity(const std::vector<CurveSample>& samples,
                             PositivityCheck which, int budget, std::uint64_t seed,
                             double margin_tol, const Tolerances& tol) {
  if (samples.size() < 3) throw InsufficientSamples("need >= 3 distinct samples");
  const int n = samples[0].flag.ambient_dim();
  int arity = 0;
  switch (which) {
    case PositivityCheck::TwoHyper: arity = 2; break;
    case PositivityCheck::ThreeHyper:
    case PositivityCheck::PropertyH:
    case PositivityCheck::Main14: arity = 3; break;
    case PositivityCheck::HyperconvexN: arity = n; break;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);

  CheckReport r;
  r.check = positivity_name(which);
  r.n = n;
  r.tolerance = margin_tol;
  r.worst_margin = std::numeric_limits<double>::infinity();

  int collected = 0;
  const long max_attempts = 200L * budget + 1000;
  for (long attempt = 0; attempt < max_attempts && collected < budget; ++attempt) {
    std::vector<std::size_t> idx(arity);
    for (int i = 0; i < arity; ++i) idx[i] = pick(rng);
    bool ok = true;
    for (int i = 0; i < arity && ok; ++i)
      for (int j = i + 1; j < arity && ok; ++j)
        if (circle_distance(samples[idx[i]].point, samples[idx[j]].point) <=
            tol.theta_separation)
          ok = false;
    if (!ok) continue;
    ++collected;

    double tuple_margin = std::numeric_limits<double>::infinity();
    auto level = [&](int which_pt, int k) { return flag_level(samples[idx[which_pt]].flag, k); };
    switch (which) {
      case PositivityCheck::TwoHyper: {
        for (int p = 1; p <= n - 1; ++p) {
          SumResult s = subspace_sum({level(0, p), level(1, n - p)}, margin_tol);
          tuple_margin = std::min(tuple_margin, s.margin);
        }
        break;
      }
      case PositivityCheck::ThreeHyper: {
        for (int k = 1; k <= n - 2; ++k)
          for (int p = 1; p + k <= n - 1; ++p)
            for (int l = 1; k + p + l <= n; ++l) {
              SumResult s = subspace_sum({level(0, k), level(1, p), level(2, l)}, margin_tol);
              tuple_margin = std::min(tuple_margin, s.margin);
            }
        break;
      }
      case PositivityCheck::PropertyH:
      case PositivityCheck::Main14: {
        // xi^{k+1}(y) + (xi^{k+1}(z) cap xi^{n-k}(x)) + xi^{n-k-2}(x) = E
        for (int k = 0; k <= n - 2; ++k) {
          Subspace inter =
              subspace_intersection(level(2, k + 1), level(0, n - k), tol.angle);
          if (inter.dim() != 1) {
            tuple_margin = 0.0;
            r.note = "forced intersection has dim " + std::to_string(inter.dim());
            break;
          }
          SumResult s =
              subspace_sum({level(1, k + 1), inter, level(0, n - k - 2)}, margin_tol);
          tuple_margin = std::min(tuple_margin, s.margin);
        }
        break;
      }
      case PositivityCheck::HyperconvexN: {
        std::vector<Subspace> parts;
        for (int i = 0; i < n; ++i) parts.push_back(level(i, 1));
        SumResult s = subspace_sum(parts, margin_tol);
        tuple_margin = s.margin;
        break;
      }
    }
    r.worst_margin = std::min(r.worst_margin, tuple_margin);
  }
  r.tuples = collected;
  if (collected == 0) {
    r.worst_margin = 0.0;
    r.pass = false;
    r.note = "no admissible tuples (all filtered by separation)";
  } else {
    r.pass = r.worst_margin > margin_tol;
  }
  return r;
}

OneSidedResult one_sided_limits(const std::vector<CurveSample>& samples,
                                CirclePoint anchor, int p,
                                const std::vector<double>& schedule,
                                const Tolerances& tol) {
  if (samples.empty()) throw InsufficientSamples("no samples");
  const int n = samples[0].flag.ambient_dim();
  if (p >= n) throw Error("one_sided_limits: p must be < n");
  const CurveSample& anchor_sample = sample_at(samples, anchor, tol.theta_dedupe);
  const Subspace target = flag_level(anchor_sample.flag, p);

  OneSidedResult result{Subspace::zero(n), Subspace::zero(n), 0.0, {}, {}};
  for (int side : {+1, -1}) {
    std::vector<double>& dists = side > 0 ? result.dist_plus : result.dist_minus;
    Subspace latest = Subspace::zero(n);
    for (double eps : schedule) {
      auto pts =
          window_points(samples, anchor, eps, side, tol.theta_dedupe, eps / (2.0 * p));
      if (static_cast<int>(pts.size()) < p)
        throw InsufficientSamples("side " + std::to_string(side) + " window eps=" +
                                  std::to_string(eps) + " holds " +
                                  std::to_string(pts.size()) + " samples, need " +
                                  std::to_string(p));
      std::vector<Subspace> lines;
      for (int i = 0; i < p; ++i) lines.push_back(pts[i]->flag.level(1));
      latest = subspace_span(lines);
      if (latest.dim() != p)
        throw DimensionMismatch("one-sided span collapsed to dim " +
                                std::to_string(latest.dim()));
      dists.push_back(subspace_distance(latest, target));
    }
    (side > 0 ? result.plus : result.minus) = latest;
  }
  result.agreement = subspace_distance(result.plus, result.minus);
  return result;
}

CheckReport monotone_trace(const FlagSource& flags,
                           std::pair<CirclePoint, CirclePoint> W,
                           const std::vector<CirclePoint>& grid, MonotoneMode mode,
                           int p, const Tolerances& tol) {
  const int n = flags.ambient_dim();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j)
      if (circle_distance(grid[i], grid[j]) <= tol.theta_dedupe)
        throw ConfigError("monotone_trace: grid points must be distinct");
    if (circle_distance(grid[i], W.first) <= tol.theta_dedupe ||
        circle_distance(grid[i], W.second) <= tol.theta_dedupe)
      throw ConfigError("monotone_trace: grid meets the base pair");
  }

  FlagChain fw1 = flags.flag_at(W.first);
  FlagChain fw2 = flags.flag_at(W.second);
  Subspace plane = Subspace::zero(n);
  int level_y = 0;       // flag level evaluated along the grid
  Subspace extra = Subspace::zero(n);  // added before intersecting (map_Y only)
  if (mode == MonotoneMode::FW) {
    plane = subspace_span({fw1.level(1), fw2.level(1)});
    level_y = n - 1;
  } else {
    if (p < 2 || p > n) throw Error("monotone_trace: need 2 <= p <= n");
    plane = subspace_intersection(flag_level(fw2, n - p + 2), flag_level(fw1, p), tol.angle);
    extra = flag_level(fw1, p - 2);
    level_y = n - p + 1;
  }
  if (plane.dim() != 2)
    throw DimensionMismatch("trace plane has dim " + std::to_string(plane.dim()));

  std::vector<double> angles;
  for (const auto& y : grid) {
    FlagChain fy = flags.flag_at(y);
    Subspace big = extra.dim() > 0 ? subspace_span({flag_level(fy, level_y), extra})
                                   : flag_level(fy, level_y);
    if (big.dim() != level_y + extra.dim())
      throw DimensionMismatch("degenerate sum at grid point (2-hyperconvexity failure)");
    Subspace val = subspace_intersection(big, plane, tol.angle);
    if (val.dim() != 1)
      throw DimensionMismatch("trace value has dim " + std::to_string(val.dim()));
    Eigen::Vector2d coords(plane.basis().col(0).dot(val.basis().col(0)),
                           plane.basis().col(1).dot(val.basis().col(0)));
    double a = std::atan2(coords(1), coords(0));
    if (a < 0) a += M_PI;
    if (a >= M_PI) a -= M_PI;
    angles.push_back(a);
  }

  CheckReport r;
  r.check = mode == MonotoneMode::FW ? "monotone_f_W" : "map_Y_injective";
  r.n = n;
  r.tuples = static_cast<int>(grid.size());
  r.tolerance = 1e-9;
  r.pass = true;
  if (mode == MonotoneMode::FW) {
    double worst = std::numeric_limits<double>::infinity();
    int sign = 0;
    for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
      double d = std::remainder(angles[i + 1] - angles[i], M_PI);
      worst = std::min(worst, std::abs(d));
      int s = d > 0 ? 1 : -1;
      if (std::abs(d) <= r.tolerance) {
        r.pass = false;
        r.note = "stationary step at index " + std::to_string(i);
      } else if (sign == 0) {
        sign = s;
      } else if (s != sign) {
        r.pass = false;
        r.note = "direction reversal at index " + std::to_string(i);
      }
    }
    r.worst_margin = angles.size() > 1 ? worst : M_PI;
  } else {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < angles.size(); ++i)
      for (std::size_t j = i + 1; j < angles.size(); ++j) {
        double d = std::abs(std::remainder(angles[i] - angles[j], M_PI));
        worst = std::min(worst, d);
      }
    r.worst_margin = angles.size() > 1 ? worst : M_PI;
    if (r.worst_margin <= r.tolerance) {
      r.pass = false;
      r.note = "two grid points map to the same line";
    }
  }
  return r;
}

}  // namespace hitchin
