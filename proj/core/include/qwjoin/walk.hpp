#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "qwjoin/graph.hpp"
#include "qwjoin/spectral.hpp"

namespace qwjoin {

using cplx = std::complex<double>;

/// U(t) = sum_j exp(i t lambda_j) E_j
Eigen::MatrixXcd transition_matrix(const SpectralDecomposition& d, double t);
cplx transition_entry(const SpectralDecomposition& d, std::size_t u, std::size_t v, double t);

/// Scalars of X v Y that enter the closed forms.
struct JoinParams {
  MatrixKind kind = MatrixKind::Laplacian;
  std::size_t m = 0;  // |X|
  std::size_t n = 0;  // |Y|
  double k = 0.0;     // regular degree of X (adjacency only)
  double ell = 0.0;   // regular degree of Y (adjacency only)
  double D = 0.0;     // (k - ell)^2 + 4mn
  double root_D = 0.0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;

  /// Same scalars with the roles of X and Y exchanged.
  JoinParams swapped() const;
};

/// Laplacian: both graphs loopless. Adjacency: both weighted-regular. Throws PreconditionError otherwise.
JoinParams join_params(const WeightedGraph& x, const WeightedGraph& y, MatrixKind kind);

/// Correction term with U(X v Y)_uv = e^{itn}(U_L(X)_uv + alpha) or U_A(X)_uv + alpha.
cplx alpha(const JoinParams& p, double t);

/// alpha(t) = 0 exactly on this lattice.
bool in_T(const JoinParams& p, double t, double tol = tol::lattice);

/// Lattice spacing of T_M when it is a lattice {2 j pi / g}; returns g.
std::optional<i64> lattice_generator(const JoinParams& p);

/// Closed-form entries of U(X v Y, t) from the spectra of X and Y alone.
class JoinWalk {
 public:
  JoinWalk(const WeightedGraph& x, const WeightedGraph& y, MatrixKind kind);

  const JoinParams& params() const { return params_; }
  const SpectralDecomposition& left() const { return dx_; }
  const SpectralDecomposition& right() const { return dy_; }

  /// Entry (a, b) with a, b indices into X v Y (X first).
  cplx entry(std::size_t a, std::size_t b, double t) const;

 private:
  JoinParams params_;
  SpectralDecomposition dx_;
  SpectralDecomposition dy_;
};

cplx join_entry_L(const WeightedGraph& x, const WeightedGraph& y, std::size_t a, std::size_t b, double t);
cplx join_entry_A(const WeightedGraph& x, const WeightedGraph& y, std::size_t a, std::size_t b, double t);

}  // namespace qwjoin
