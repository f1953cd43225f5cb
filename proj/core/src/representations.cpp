#include "hitchin/representations.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <random>

namespace hitchin {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long double binomial_l(int n, int k) {
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

using ExtMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using ExtMat2 = Eigen::Matrix<long double, 2, 2>;

ExtMat sym_power_ext(int n, const ExtMat2& m) {
  const int d = n - 1;
  const long double a = m(0, 0), b = m(0, 1), c = m(1, 0), dd = m(1, 1);
  ExtMat plain = ExtMat::Zero(n, n);
  for (int k = 0; k <= d; ++k) {
    std::vector<long double> poly(n, 0.0L);
    for (int i = 0; i <= d - k; ++i)
      for (int j = 0; j <= k; ++j) {
        const long double coef = binomial_l(d - k, i) * std::pow(a, d - k - i) *
                                 std::pow(c, i) * binomial_l(k, j) *
                                 std::pow(b, k - j) * std::pow(dd, j);
        poly[i + j] += coef;
      }
    for (int r = 0; r <= d; ++r) plain(r, k) = poly[r];
  }
  Eigen::Matrix<long double, Eigen::Dynamic, 1> scale(n);
  for (int k = 0; k <= d; ++k) scale(k) = 1.0L / std::sqrt(binomial_l(d, k));
  return scale.asDiagonal() * plain * scale.cwiseInverse().asDiagonal();
}

std::vector<ExtMat2> octagon_axis_generators_ext() {
  const long double half = 1.0L + std::sqrt(2.0L);
  const long double l = 2.0L * std::acosh(half);
  ExtMat2 t = ExtMat2::Zero();
  t(0, 0) = std::exp(l / 2);
  t(1, 1) = std::exp(-l / 2);
  std::vector<ExtMat2> xs;
  for (int k = 0; k < 4; ++k) {
    const long double th = k * std::acos(-1.0L) / 4;
    const long double cth = std::cos(th / 2), sth = std::sin(th / 2);
    ExtMat2 r;
    r << cth, sth, -sth, cth;
    xs.push_back(r * t * r.transpose());
  }
  return xs;
}

Eigen::Matrix2d rotation_about_i(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::Matrix2d r;
  r << c, s, -s, c;
  return r;
}

// Real eigen-decomposition sorted by |lambda| descending. Throws when the
// spectrum is complex or a gap degenerates.
void real_sorted_eigen(const Eigen::MatrixXd& m, double gap_tol,
                       Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
  const int n = static_cast<int>(m.rows());
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  const auto ev = es.eigenvalues();
  const double rho = ev.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i)
    if (std::abs(ev(i).imag()) >= 1e-8 * rho)
      throw ComplexSpectrum("eigenvalue " + std::to_string(i) + " has imaginary part " +
                            std::to_string(ev(i).imag()));
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(ev(a).real()) > std::abs(ev(b).real());
  });
  values.resize(n);
  vectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    values(i) = ev(order[i]).real();
    // phase-fix the complex column and keep the real part
    Eigen::VectorXcd col = es.eigenvectors().col(order[i]);
    int imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    col *= std::conj(col(imax)) / std::abs(col(imax));
    Eigen::VectorXd v = col.real();
    vectors.col(i) = v / v.norm();
  }
  for (int i = 0; i + 1 < n; ++i) {
    const double ratio = std::abs(values(i)) / std::abs(values(i + 1));
    if (ratio < 1.0 + gap_tol)
      throw DegenerateGap("|l_" + std::to_string(i) + "|/|l_" + std::to_string(i + 1) +
                          "| = " + std::to_string(ratio));
  }
}

FlagChain flag_from_columns(const Eigen::MatrixXd& cols) {
  const int n = static_cast<int>(cols.rows());
  // incremental Gram-Schmidt so nesting is exact
  Eigen::MatrixXd q(n, n - 1);
  std::vector<Subspace> levels;
  for (int k = 0; k < n - 1; ++k) {
    Eigen::VectorXd v = cols.col(k);
    for (int j = 0; j < k; ++j) v -= q.col(j).dot(v) * q.col(j);
    const double nv = v.norm();
    if (nv < 1e-12) throw RankDeficient("flag columns numerically dependent");
    q.col(k) = v / nv;
    levels.emplace_back(n, q.leftCols(k + 1));
  }
  return FlagChain(n, std::move(levels));
}

}  // namespace

double projective_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd an = a / a.norm();
  Eigen::MatrixXd bn = b / b.norm();
  const double dplus = (an - bn).cwiseAbs().maxCoeff();
  const double dminus = (an + bn).cwiseAbs().maxCoeff();
  return std::min(dplus, dminus);
}

double relation_residual(const SurfaceRep& rep) {
  // The commutator product passes through intermediates whose norms reach the
  // square of the largest generator norm; the extra digits of the extended
  // generators are what make the residual meaningful for larger n.
  if (rep.generators_ext.size() == rep.generators.size() && !rep.generators.empty()) {
    using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    LMat prod = LMat::Identity(rep.n, rep.n);
    for (int i = 0; i < rep.genus; ++i) {
      const LMat& a = rep.generators_ext[2 * i];
      const LMat& b = rep.generators_ext[2 * i + 1];
      prod = prod * a * b * a.inverse() * b.inverse();
    }
    return projective_distance(prod.cast<double>(),
                               Eigen::MatrixXd::Identity(rep.n, rep.n));
  }
  Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(rep.n, rep.n);
  for (int i = 0; i < rep.genus; ++i) {
    const Eigen::MatrixXd& a = rep.generators[2 * i];
    const Eigen::MatrixXd& b = rep.generators[2 * i + 1];
    prod = prod * a * b * a.inverse() * b.inverse();
  }
  return projective_distance(prod, Eigen::MatrixXd::Identity(rep.n, rep.n));
}

Eigen::MatrixXd sym_power(int n, const Eigen::Matrix2d& m) {
  if (n < 2) throw Error("sym_power: n must be >= 2");
  if (std::abs(m.determinant() - 1.0) >= 1e-10)
    throw NotUnimodular("det = " + std::to_string(m.determinant()));
  const int d = n - 1;
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), dd = m(1, 1);
  // substitution s -> a s + c t, t -> b s + d t on basis s^{d-k} t^k
  Eigen::MatrixXd plain = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k <= d; ++k) {
    std::vector<double> poly(n, 0.0);
    for (int i = 0; i <= d - k; ++i)
      for (int j = 0; j <= k; ++j) {
        const double coef = binomial(d - k, i) * std::pow(a, d - k - i) * std::pow(c, i) *
                            binomial(k, j) * std::pow(b, k - j) * std::pow(dd, j);
        poly[i + j] += coef;
      }
    for (int r = 0; r <= d; ++r) plain(r, k) = poly[r];
  }
  // invariant normalization: hat c_k = c_k / sqrt(C(d,k))
  Eigen::VectorXd scale(n);
  for (int k = 0; k <= d; ++k) scale(k) = 1.0 / std::sqrt(binomial(d, k));
  return scale.asDiagonal() * plain * scale.cwiseInverse().asDiagonal();
}

std::vector<Eigen::Matrix2d> octagon_axis_generators() {
  // vertex angle 2*pi/8 forces cosh(l/2) = 1 + sqrt(2)
  const double half = 1.0 + std::sqrt(2.0);
  const double l = 2.0 * std::acosh(half);
  Eigen::Matrix2d t = Eigen::Matrix2d::Zero();
  t(0, 0) = std::exp(l / 2);
  t(1, 1) = std::exp(-l / 2);
  std::vector<Eigen::Matrix2d> xs;
  for (int k = 0; k < 4; ++k) {
    const double th = k * M_PI / 4;
    xs.push_back(rotation_about_i(th) * t * rotation_about_i(-th));
  }
  return xs;
}

SurfaceRep fuchsian_genus2() {
  auto xs = octagon_axis_generators();
  // The axis translates satisfy X0 X1^-1 X2 X3^-1 X0^-1 X1 X2^-1 X3 = 1
  // (opposite-side pairing). Change of free basis to commutator form:
  //   a1 = X0, b1 = X1, a2 = X1 X3^-1 X0^-1, b2 = X0 X2 X1^-1.
  SurfaceRep rep;
  rep.genus = 2;
  rep.n = 2;
  auto xl = octagon_axis_generators_ext();
  rep.generators_ext.resize(4);
  rep.generators_ext[0] = xl[0];
  rep.generators_ext[1] = xl[1];
  rep.generators_ext[2] = xl[1] * xl[3].inverse() * xl[0].inverse();
  rep.generators_ext[3] = xl[0] * xl[2] * xl[1].inverse();
  rep.generators.resize(4);
  for (int i = 0; i < 4; ++i)
    rep.generators[i] = rep.generators_ext[i].cast<double>();
  (void)xs;
  rep.relation_residual = relation_residual(rep);
  return rep;
}

SurfaceRep compose_irreducible(int n, const SurfaceRep& base) {
  if (base.n != 2) throw Error("compose_irreducible: base must have n=2");
  SurfaceRep out;
  out.genus = base.genus;
  out.n = n;
  out.generators.reserve(base.generators.size());
  const bool have_ext = base.generators_ext.size() == base.generators.size();
  for (std::size_t i = 0; i < base.generators.size(); ++i) {
    // validate through the public double path, but build from the
    // extended-precision base when available
    Eigen::MatrixXd gd = sym_power(n, Eigen::Matrix2d(base.generators[i]));
    if (have_ext) {
      ExtMat2 m2 = base.generators_ext[i];
      out.generators_ext.push_back(sym_power_ext(n, m2));
      out.generators.push_back(out.generators_ext.back().cast<double>());
    } else {
      out.generators.push_back(gd);
    }
  }
  out.relation_residual = relation_residual(out);
  return out;
}

SurfaceRep bend(const SurfaceRep& rep, const std::vector<double>& tau) {
  const int n = rep.n;
  if (static_cast<int>(tau.size()) != n - 1)
    throw Error("bend: tau must have n-1 entries");
  Word comm = Word::from_text("a1 b1 A1 B1", rep.genus);
  Eigen::MatrixXd vectors;
  try {
    vectors = word_eigen(comm, rep).vectors;
  } catch (const Error& e) {
    throw NotLoxodromic(std::string("[a1,b1] fails the eigen-gap check: ") + e.what());
  }
  Eigen::VectorXd expd(n);
  double sum = 0;
  for (int i = 0; i < n - 1; ++i) {
    expd(i) = std::exp(tau[i]);
    sum += tau[i];
  }
  expd(n - 1) = std::exp(-sum);
  Eigen::MatrixXd ctau = vectors * expd.asDiagonal() * vectors.inverse();
  SurfaceRep out = rep;
  if (rep.generators_ext.size() == rep.generators.size()) {
    // keep the extended copies consistent with the double ones by doing the
    // conjugation once, in extended precision, and casting down
    ExtMat ctau_l = ctau.cast<long double>();
    ExtMat ctau_inv = ctau_l.inverse();
    for (int i : {2, 3}) {
      out.generators_ext[i] = ctau_l * rep.generators_ext[i] * ctau_inv;
      out.generators[i] = out.generators_ext[i].cast<double>();
    }
  } else {
    out.generators[2] = ctau * rep.generators[2] * ctau.inverse();
    out.generators[3] = ctau * rep.generators[3] * ctau.inverse();
  }
  out.relation_residual = relation_residual(out);
  return out;
}

LoxodromicData check_purely_loxodromic(const Eigen::MatrixXd& m, double gap_tol) {
  // direct determinants cancel catastrophically for matrices with a large
  // dynamic range; the singular-value product is stable
  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double logdet = 0.0;
    for (int i = 0; i < m.rows(); ++i) logdet += std::log(svd.singularValues()(i));
    if (std::abs(logdet) / m.rows() >= 1e-5)
      throw NotUnimodular("|det| = " + std::to_string(std::exp(logdet)));
  }
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  real_sorted_eigen(m, gap_tol, values, vectors);
  const int n = static_cast<int>(m.rows());
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < n; ++i)
    min_gap = std::min(min_gap, std::abs(values(i)) / std::abs(values(i + 1)) - 1.0);
  return LoxodromicData{values, min_gap, flag_from_columns(vectors)};
}

std::vector<Eigen::MatrixXd> word_factors(const Word& w, const SurfaceRep& rep) {
  std::vector<Eigen::MatrixXd> fs;
  fs.reserve(w.length());
  for (const auto& l : w.letters()) {
    if (l.gen < 0 || l.gen >= 2 * rep.genus)
      throw Error("word_factors: generator index out of range for genus");
    const Eigen::MatrixXd& g = rep.generators.at(l.gen);
    fs.push_back(l.exp == 1 ? g : g.inverse());
  }
  return fs;
}

namespace {

// The periodic QR iteration below runs in extended precision. The small
// eigenvalues and singular values of long words are sensitive to factor
// perturbations roughly in proportion to the conditioning of the partial
// products (up to ~1e13 on radius-5 balls for n=5), so double round-off
// alone can wipe out several digits; 80-bit arithmetic keeps the intrinsic
// error near 1e-6 in the worst case and far smaller typically.
using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// One factored QR sweep: q <- Q with (f_0...f_{L-1}) q_in = Q * (R_0...R_{L-1});
// returns the triangular cycle product.
LMat qr_sweep(const std::vector<LMat>& fs, LMat& q) {
  const int n = static_cast<int>(q.rows());
  LMat t = LMat::Identity(n, n);
  for (auto it = fs.rbegin(); it != fs.rend(); ++it) {
    Eigen::HouseholderQR<LMat> qr(*it * q);
    q = qr.householderQ();
    LMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    t = r * t;
  }
  return t;
}

struct PeriodicSchur {
  LMat q;      // converged orthogonal basis (flag levels = leading columns)
  LMat t;      // triangular cycle product, diag = |eigenvalue| estimates
  LVec signs;  // eigenvalue signs (diag of q_prev^T q at convergence)
  bool converged = false;
};

PeriodicSchur periodic_schur(const std::vector<LMat>& fs, int n, int max_cycles) {
  PeriodicSchur out;
  // fixed generic orthogonal start: the identity has structural zeros
  // against axis-aligned eigenbases and can converge mis-ordered
  {
    std::mt19937_64 rng(0x5eed0f1a6u);
    std::normal_distribution<double> gauss;
    LMat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
    out.q = Eigen::HouseholderQR<LMat>(g).householderQ();
  }
  out.signs = LVec::Ones(n);
  std::vector<long double> history;
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    LMat q_prev = out.q;
    out.t = qr_sweep(fs, out.q);
    LMat c = q_prev.transpose() * out.q;
    long double off = 0.0L;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        off = std::max(off, std::abs(std::abs(c(i, j)) - (i == j ? 1.0L : 0.0L)));
    history.push_back(off);
    // converged outright, or stalled at the round-off floor (the floor
    // depends on the factor conditioning, so it cannot be a fixed cut)
    const bool stalled =
        cycle >= 3 && off < 1e-6L && off > 0.3L * history[cycle - 3];
    if (off < 1e-13L || stalled) {
      // m q_prev = q t and q ~ q_prev * diag(signs)
      for (int i = 0; i < n; ++i) out.signs(i) = c(i, i) >= 0 ? 1.0L : -1.0L;
      out.q = q_prev;
      out.converged = true;
      break;
    }
  }
  return out;
}

// Letter factors at the working precision of the iteration: the rep's
// extended-precision generators when present, otherwise the double ones.
std::vector<LMat> word_factors_ext(const Word& w, const SurfaceRep& rep) {
  const bool have_ext = rep.generators_ext.size() == rep.generators.size();
  std::vector<LMat> fs;
  fs.reserve(w.length());
  for (const auto& l : w.letters()) {
    if (l.gen < 0 || l.gen >= 2 * rep.genus)
      throw Error("word_factors: generator index out of range for genus");
    LMat g = have_ext ? rep.generators_ext[l.gen]
                      : LMat(rep.generators.at(l.gen).cast<long double>());
    fs.push_back(l.exp == 1 ? g : LMat(g.inverse()));
  }
  return fs;
}

}  // namespace

WordEigen word_eigen(const Word& w, const SurfaceRep& rep, double gap_tol) {
  const int n = rep.n;
  if (w.empty()) throw DegenerateGap("word_eigen: empty word");
  std::vector<LMat> fs = word_factors_ext(w, rep);
  PeriodicSchur ps = periodic_schur(fs, n, 600);
  const LMat& t = ps.t;
  if (!ps.converged) {
    // distinguish a rotating pair from a merged modulus
    for (int i = 0; i + 1 < n; ++i) {
      const double ratio =
          static_cast<double>(std::abs(t(i, i)) / std::abs(t(i + 1, i + 1)));
      if (ratio < 1.0 + gap_tol)
        throw DegenerateGap("QR iteration stalls: |l_" + std::to_string(i) + "|/|l_" +
                            std::to_string(i + 1) + "| ~ " + std::to_string(ratio));
    }
    throw ComplexSpectrum("QR iteration does not converge for word '" + w.to_text() +
                          "'");
  }

  Eigen::VectorXd eigenvalues(n);
  for (int i = 0; i < n; ++i)
    eigenvalues(i) = static_cast<double>(ps.signs(i) * t(i, i));
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < n; ++i) {
    const double ratio = std::abs(eigenvalues(i)) / std::abs(eigenvalues(i + 1));
    if (ratio < 1.0 + gap_tol)
      throw DegenerateGap("|l_" + std::to_string(i) + "|/|l_" + std::to_string(i + 1) +
                          "| = " + std::to_string(ratio));
    min_gap = std::min(min_gap, ratio - 1.0);
  }

  // eigenvectors of the triangular form by back substitution
  LMat tri = ps.signs.asDiagonal() * t;
  LMat x = LMat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    x(k, k) = 1.0L;
    for (int i = k - 1; i >= 0; --i) {
      long double s = 0.0L;
      for (int j = i + 1; j <= k; ++j) s += tri(i, j) * x(j, k);
      x(i, k) = -s / (tri(i, i) - tri(k, k));
    }
  }
  LMat vectors_ext = ps.q * x;
  for (int k = 0; k < n; ++k) vectors_ext.col(k).normalize();
  Eigen::MatrixXd vectors = vectors_ext.cast<double>();

  Eigen::MatrixXd qd = ps.q.cast<double>();
  std::vector<Subspace> levels;
  for (int k = 1; k <= n - 1; ++k) levels.emplace_back(n, qd.leftCols(k));
  return WordEigen{eigenvalues, vectors, min_gap, FlagChain(n, std::move(levels)),
                   std::move(vectors_ext)};
}

LoxodromicData word_loxodromic(const Word& w, const SurfaceRep& rep, double gap_tol) {
  WordEigen we = word_eigen(w, rep, gap_tol);
  return LoxodromicData{we.eigenvalues, we.min_gap, we.flag};
}

Eigen::VectorXd word_singular_values(const Word& w, const SurfaceRep& rep) {
  const int n = rep.n;
  if (w.empty()) return Eigen::VectorXd::Ones(n);
  // sigma_i^2 = eigenvalues of M^T M, computed from the factored symmetric
  // product (f_{L-1}^T ... f_0^T)(f_0 ... f_{L-1}); each factor is modestly
  // conditioned, and the spectrum is real positive, so the periodic QR
  // iteration recovers the small singular values that a direct SVD of the
  // assembled product would round away.
  std::vector<LMat> fs = word_factors_ext(w, rep);
  std::vector<LMat> sym;
  sym.reserve(2 * fs.size());
  for (auto it = fs.rbegin(); it != fs.rend(); ++it) sym.push_back(it->transpose());
  for (const auto& f : fs) sym.push_back(f);
  PeriodicSchur ps = periodic_schur(sym, n, 600);
  // clustered singular values stall the iteration without converging the
  // basis; the diagonal is still correct to within the cluster width
  Eigen::VectorXd sv(n);
  for (int i = 0; i < n; ++i)
    sv(i) = static_cast<double>(std::sqrt(std::abs(ps.t(i, i))));
  std::sort(sv.data(), sv.data() + n, std::greater<double>());
  return sv;
}

CheckReport check_irreducible(const SurfaceRep& rep, int depth) {
  if (depth < 2) throw Error("check_irreducible: depth must be >= 2");
  const int n = rep.n;
  Ball b = ball(rep.genus, depth);
  Eigen::MatrixXd rows(b.words.size() + 1, n * n);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  rows.row(0) = Eigen::Map<Eigen::VectorXd>(id.data(), n * n).transpose();
  rows.row(0).normalize();
  for (std::size_t i = 0; i < b.words.size(); ++i) {
    Eigen::MatrixXd m = evaluate(b.words[i], rep);
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(m.data(), n * n);
    rows.row(i + 1) = v.transpose() / v.norm();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  const auto& sv = svd.singularValues();
  const double tol = 1e-8;
  int rank = 0;
  while (rank < sv.size() && sv(rank) > tol * sv(0)) ++rank;
  CheckReport r;
  r.check = "irreducible";
  r.n = n;
  r.tuples = static_cast<int>(rows.rows());
  r.worst_margin = sv(std::min<int>(n * n, sv.size()) - 1) / sv(0);
  r.tolerance = tol;
  r.pass = rank == n * n;
  if (!r.pass)
    r.note = "matrix-algebra span has rank " + std::to_string(rank) + " < " +
             std::to_string(n * n);
  return r;
}

}  // namespace hitchin
