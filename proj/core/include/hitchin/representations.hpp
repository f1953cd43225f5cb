#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hitchin/flag_algebra.hpp"
#include "hitchin/report.hpp"
#include "hitchin/surface_group.hpp"

namespace hitchin {

// Generator-to-matrix assignment for the genus-g surface group. Matrices
// represent classes in PSL(n,R); equality checks are projective.
struct SurfaceRep {
  int genus = 2;
  int n = 2;
  std::vector<Eigen::MatrixXd> generators;  // a1,b1,a2,b2,... (2g matrices)
  double relation_residual = 0.0;
  // Extended-precision copies, populated when the construction is exact
  // enough to provide them (closed-form base groups and their symmetric
  // powers). The factored spectral routines use these when present: the
  // attracting flags of long, strongly non-normal words are sensitive to
  // generator round-off beyond double precision.
  std::vector<Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>>
      generators_ext;
};

// Sorted real spectrum with gaps and the attracting eigenflag.
struct LoxodromicData {
  Eigen::VectorXd eigenvalues;  // descending in |.|
  double min_gap = 0.0;         // min over i of |l_i|/|l_{i+1}| - 1
  FlagChain eigenflag;          // level k = span of top-k eigenvectors
};

// Projective distance: min over sign of max-abs entrywise difference
// after normalizing both to unit Frobenius norm.
double projective_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Residual of [a1,b1]...[ag,bg] against the identity, projectively.
double relation_residual(const SurfaceRep& rep);

// Irreducible representation of SL(2,R) on homogeneous polynomials of
// degree n-1, expressed in the invariantly normalized monomial basis
// (so rotations map to orthogonal matrices). Functorial with det 1.
Eigen::MatrixXd sym_power(int n, const Eigen::Matrix2d& m);

// The regular-octagon surface group in SL(2,R), genus 2, with generators
// arranged so that [a1,b1][a2,b2] = 1 exactly.
SurfaceRep fuchsian_genus2();

// Translates of the octagon axes: X_k = R(k*pi/4) T R(-k*pi/4).
std::vector<Eigen::Matrix2d> octagon_axis_generators();

SurfaceRep compose_irreducible(int n, const SurfaceRep& base);

// Conjugate a2,b2 by exp(D_tau), D_tau diagonal in the eigenbasis of
// [a1,b1] with entries tau padded by -sum(tau). Preserves the relation.
SurfaceRep bend(const SurfaceRep& rep, const std::vector<double>& tau);

LoxodromicData check_purely_loxodromic(const Eigen::MatrixXd& m,
                                       double gap_tol = 1e-6);

// Generator images of the letters, in product order:
// evaluate(w) = factors[0] * factors[1] * ...
std::vector<Eigen::MatrixXd> word_factors(const Word& w, const SurfaceRep& rep);

// Eigen data of evaluate(w, rep) computed from the factored product by
// periodic QR iteration. Direct decompositions of the assembled product
// lose the small eigenvalues (condition numbers reach 1e29 on radius-6
// balls); iterating over the modestly conditioned factors keeps every
// eigenvalue and flag level accurate.
struct WordEigen {
  Eigen::VectorXd eigenvalues;  // signed, descending in |.|
  Eigen::MatrixXd vectors;      // unit right eigenvectors, matching columns
  double min_gap = 0.0;
  FlagChain flag;               // level k = span of top-k eigenvectors
  // extended-precision eigenvectors: pairing chains that multiply the
  // eigenbasis against its inverse lose cond(V) digits, which double-rounded
  // vectors cannot afford for strongly non-normal words
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> vectors_ext;
};

WordEigen word_eigen(const Word& w, const SurfaceRep& rep, double gap_tol = 1e-6);
LoxodromicData word_loxodromic(const Word& w, const SurfaceRep& rep,
                               double gap_tol = 1e-6);

// Singular values of evaluate(w, rep) via a factored QR pass (stable for
// the same reason as word_eigen).
Eigen::VectorXd word_singular_values(const Word& w, const SurfaceRep& rep);

// Numerical Burnside proxy: passes iff span{rho(ball(depth))} + I has
// full rank n*n in matrix space.
CheckReport check_irreducible(const SurfaceRep& rep, int depth);

}  // namespace hitchin
