#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwjoin/exact_arith.hpp"
#include "qwjoin/graph.hpp"
#include "qwjoin/tolerances.hpp"

namespace qwjoin {

enum class MatrixKind { Adjacency, Laplacian };

std::string to_string(MatrixKind kind);
MatrixKind parse_matrix_kind(std::string_view s);

Eigen::MatrixXd matrix_of(const WeightedGraph& g, MatrixKind kind);

/// Sorted (ascending) set of reals with tolerance-based membership.
class EigenvalueSet {
 public:
  EigenvalueSet() = default;
  EigenvalueSet(std::initializer_list<double> values, double tol = tol::set_equal);
  explicit EigenvalueSet(const std::vector<double>& values, double tol = tol::set_equal);

  void insert(double x);
  void erase(double x);
  bool contains(double x) const;
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<double>& values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }
  double tolerance() const { return tol_; }

  EigenvalueSet shifted(double delta) const;
  EigenvalueSet without(double x) const;
  EigenvalueSet united(const EigenvalueSet& o) const;
  bool intersects(const EigenvalueSet& o) const;

  /// Same size and pairwise equal within tol.
  bool approx_equal(const EigenvalueSet& o, double tol = tol::set_equal) const;

  std::string str() const;

 private:
  std::vector<double> values_;
  double tol_ = tol::set_equal;
};

struct Eigenspace {
  double value = 0.0;
  Eigen::MatrixXd basis;      // orthonormal columns
  Eigen::MatrixXd projector;  // basis * basis^T
  std::optional<QuadraticEigenvalue> exact;
};

struct SpectralDecomposition {
  MatrixKind kind = MatrixKind::Adjacency;
  Eigen::MatrixXd matrix;
  std::vector<Eigenspace> spaces;  // ascending eigenvalues
  bool integral_matrix = false;
  int sweeps = 0;

  std::size_t order() const { return static_cast<std::size_t>(matrix.rows()); }
  std::vector<double> eigenvalues() const;
  /// Exact form of every eigenvalue, or nothing when any of them fails to classify.
  std::optional<std::vector<QuadraticEigenvalue>> classified() const;
  /// Index of the eigenspace whose value matches x within the grouping tolerance.
  std::optional<std::size_t> find(double x) const;
};

struct JacobiResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for a real symmetric matrix.
JacobiResult jacobi_eigen(const Eigen::MatrixXd& m, int max_sweeps = 100);

SpectralDecomposition decompose_matrix(const Eigen::MatrixXd& m, MatrixKind kind);
SpectralDecomposition decompose(const WeightedGraph& g, MatrixKind kind);

/// {lambda_j : ||E_j e_u|| > tol}
EigenvalueSet eigenvalue_support(const SpectralDecomposition& d, std::size_t u, double tol = tol::support);

struct SupportPartition {
  std::size_t u = 0;
  std::size_t v = 0;
  EigenvalueSet plus;
  EigenvalueSet minus;

  EigenvalueSet support() const { return plus.united(minus); }
};

/// E_j e_u = E_j e_v on plus, E_j e_u = -E_j e_v on minus; nothing when some projector matches neither.
std::optional<SupportPartition> strong_cospectral(const SpectralDecomposition& d, std::size_t u, std::size_t v,
                                                  double tol = tol::cospectral);

bool cospectral(const SpectralDecomposition& d, std::size_t u, std::size_t v, double tol = tol::cospectral);

}  // namespace qwjoin
