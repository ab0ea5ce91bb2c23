#include "qwjoin/walk.hpp"

#include <cmath>
#include <numbers>

#include "qwjoin/errors.hpp"

namespace qwjoin {

namespace {
cplx cis(double x) { return {std::cos(x), std::sin(x)}; }
}  // namespace

Eigen::MatrixXcd transition_matrix(const SpectralDecomposition& d, double t) {
  const Eigen::Index n = static_cast<Eigen::Index>(d.order());
  if (t == 0.0) return Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& sp : d.spaces) u += cis(t * sp.value) * sp.projector.cast<cplx>();
  return u;
}

cplx transition_entry(const SpectralDecomposition& d, std::size_t u, std::size_t v, double t) {
  if (u >= d.order() || v >= d.order()) throw PreconditionError("vertex out of range");
  if (t == 0.0) return u == v ? 1.0 : 0.0;
  cplx s = 0.0;
  for (const auto& sp : d.spaces)
    s += cis(t * sp.value) * sp.projector(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
  return s;
}

JoinParams JoinParams::swapped() const {
  JoinParams q = *this;
  std::swap(q.m, q.n);
  std::swap(q.k, q.ell);
  return q;
}

JoinParams join_params(const WeightedGraph& x, const WeightedGraph& y, MatrixKind kind) {
  if (x.order() == 0 || y.order() == 0) throw PreconditionError("join operands must be non-empty");
  JoinParams p;
  p.kind = kind;
  p.m = x.order();
  p.n = y.order();
  if (kind == MatrixKind::Laplacian) {
    if (!x.is_simple() || !y.is_simple())
      throw PreconditionError("the Laplacian join closed forms need loopless graphs");
    return p;
  }
  auto k = x.regular_degree();
  auto l = y.regular_degree();
  if (!k) throw PreconditionError("the adjacency join closed forms need a weighted-regular X");
  if (!l) throw PreconditionError("the adjacency join closed forms need a weighted-regular Y");
  p.k = *k;
  p.ell = *l;
  const double m = static_cast<double>(p.m), n = static_cast<double>(p.n);
  p.D = (p.k - p.ell) * (p.k - p.ell) + 4.0 * m * n;
  p.root_D = std::sqrt(p.D);
  p.lambda_plus = (p.k + p.ell + p.root_D) / 2.0;
  p.lambda_minus = (p.k + p.ell - p.root_D) / 2.0;
  return p;
}

cplx alpha(const JoinParams& p, double t) {
  const double m = static_cast<double>(p.m), n = static_cast<double>(p.n);
  if (p.kind == MatrixKind::Laplacian)
    return (m * cis(-t * n) + n * cis(t * m) - (m + n)) / (m * (m + n));
  return cis(t * p.lambda_plus) * (p.k - p.lambda_minus) / (m * p.root_D) -
         cis(t * p.lambda_minus) * (p.k - p.lambda_plus) / (m * p.root_D) - cis(t * p.k) / m;
}

std::optional<i64> lattice_generator(const JoinParams& p) {
  if (p.kind == MatrixKind::Laplacian) return gcd2(static_cast<i64>(p.m), static_cast<i64>(p.n));
  auto k = reconstruct_integer(p.k, 1e-9);
  auto lp = reconstruct_integer(p.lambda_plus, 1e-9);
  auto lm = reconstruct_integer(p.lambda_minus, 1e-9);
  if (!k || !lp || !lm) return std::nullopt;
  return gcd2(*lp - *k, *lm - *k);
}

bool in_T(const JoinParams& p, double t, double tol) {
  if (auto g = lattice_generator(p)) {
    double j = t * static_cast<double>(*g) / (2.0 * std::numbers::pi);
    return std::fabs(j - std::round(j)) <= tol * std::max(1.0, std::fabs(j));
  }
  cplx a = cis(t * p.k), b = cis(t * p.lambda_plus), c = cis(t * p.lambda_minus);
  return std::abs(a - b) <= tol && std::abs(a - c) <= tol;
}

JoinWalk::JoinWalk(const WeightedGraph& x, const WeightedGraph& y, MatrixKind kind)
    : params_(join_params(x, y, kind)), dx_(decompose(x, kind)), dy_(decompose(y, kind)) {}

cplx JoinWalk::entry(std::size_t a, std::size_t b, double t) const {
  const std::size_t m = params_.m, n = params_.n;
  if (a >= m + n || b >= m + n) throw PreconditionError("vertex out of range for the join");
  const bool a_left = a < m, b_left = b < m;
  const double md = static_cast<double>(m), nd = static_cast<double>(n);

  if (a_left != b_left) {
    if (params_.kind == MatrixKind::Laplacian) return (1.0 - cis(t * (md + nd))) / (md + nd);
    return (cis(t * params_.lambda_plus) - cis(t * params_.lambda_minus)) / params_.root_D;
  }
  const JoinParams p = a_left ? params_ : params_.swapped();
  const SpectralDecomposition& side = a_left ? dx_ : dy_;
  const std::size_t ia = a_left ? a : a - m;
  const std::size_t ib = a_left ? b : b - m;
  cplx base = transition_entry(side, ia, ib, t);
  if (params_.kind == MatrixKind::Laplacian) {
    const double mm = static_cast<double>(p.m), nn = static_cast<double>(p.n);
    return cis(t * nn) * base + 1.0 / (mm + nn) + nn * cis(t * (mm + nn)) / (mm * (mm + nn)) -
           cis(t * nn) / mm;
  }
  return base + alpha(p, t);
}

cplx join_entry_L(const WeightedGraph& x, const WeightedGraph& y, std::size_t a, std::size_t b, double t) {
  return JoinWalk(x, y, MatrixKind::Laplacian).entry(a, b, t);
}

cplx join_entry_A(const WeightedGraph& x, const WeightedGraph& y, std::size_t a, std::size_t b, double t) {
  return JoinWalk(x, y, MatrixKind::Adjacency).entry(a, b, t);
}

}  // namespace qwjoin
