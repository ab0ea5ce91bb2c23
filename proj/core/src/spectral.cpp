#include "qwjoin/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qwjoin/errors.hpp"

namespace qwjoin {

std::string to_string(MatrixKind kind) { return kind == MatrixKind::Laplacian ? "L" : "A"; }

MatrixKind parse_matrix_kind(std::string_view s) {
  if (s == "L" || s == "l" || s == "laplacian") return MatrixKind::Laplacian;
  if (s == "A" || s == "a" || s == "adjacency") return MatrixKind::Adjacency;
  throw PreconditionError("matrix kind must be A or L, got '" + std::string(s) + "'");
}

Eigen::MatrixXd matrix_of(const WeightedGraph& g, MatrixKind kind) {
  return kind == MatrixKind::Laplacian ? g.laplacian() : g.adjacency();
}

EigenvalueSet::EigenvalueSet(std::initializer_list<double> values, double tol) : tol_(tol) {
  for (double x : values) insert(x);
}

EigenvalueSet::EigenvalueSet(const std::vector<double>& values, double tol) : tol_(tol) {
  for (double x : values) insert(x);
}

void EigenvalueSet::insert(double x) {
  if (contains(x)) return;
  values_.insert(std::lower_bound(values_.begin(), values_.end(), x), x);
}

void EigenvalueSet::erase(double x) {
  auto it = std::find_if(values_.begin(), values_.end(), [&](double y) { return std::fabs(x - y) <= tol_; });
  if (it != values_.end()) values_.erase(it);
}

bool EigenvalueSet::contains(double x) const {
  return std::any_of(values_.begin(), values_.end(), [&](double y) { return std::fabs(x - y) <= tol_; });
}

EigenvalueSet EigenvalueSet::shifted(double delta) const {
  EigenvalueSet out;
  out.tol_ = tol_;
  for (double x : values_) out.values_.push_back(x + delta);
  return out;
}

EigenvalueSet EigenvalueSet::without(double x) const {
  EigenvalueSet out = *this;
  out.erase(x);
  return out;
}

EigenvalueSet EigenvalueSet::united(const EigenvalueSet& o) const {
  EigenvalueSet out = *this;
  for (double x : o.values_) out.insert(x);
  return out;
}

bool EigenvalueSet::intersects(const EigenvalueSet& o) const {
  return std::any_of(o.values_.begin(), o.values_.end(), [&](double x) { return contains(x); });
}

bool EigenvalueSet::approx_equal(const EigenvalueSet& o, double tol) const {
  if (values_.size() != o.values_.size()) return false;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (std::fabs(values_[i] - o.values_[i]) > tol) return false;
  return true;
}

std::string EigenvalueSet::str() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < values_.size(); ++i) os << (i ? ", " : "") << values_[i];
  os << "}";
  return os.str();
}

JacobiResult jacobi_eigen(const Eigen::MatrixXd& m, int max_sweeps) {
  if (m.rows() != m.cols()) throw PreconditionError("jacobi_eigen needs a square matrix");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw PreconditionError("jacobi_eigen needs a symmetric matrix");
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd a = m;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double threshold = tol::jacobi_offdiag * m.norm();

  auto off = [&]() {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off() > threshold) {
    if (sweep >= max_sweeps) {
      std::ostringstream os;
      os << "Jacobi eigensolver did not converge after " << max_sweeps << " sweeps for matrix\n" << m;
      throw NumericError(os.str());
    }
    ++sweep;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  JacobiResult r;
  r.values = a.diagonal();
  r.vectors = v;
  r.sweeps = sweep;
  return r;
}

SpectralDecomposition decompose_matrix(const Eigen::MatrixXd& m, MatrixKind kind) {
  SpectralDecomposition d;
  d.kind = kind;
  d.matrix = m;
  const Eigen::Index n = m.rows();
  if (n == 0) return d;

  JacobiResult jr = jacobi_eigen(m);
  d.sweeps = jr.sweeps;
  std::vector<Eigen::Index> idx(n);
  for (Eigen::Index i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return jr.values(i) < jr.values(j); });

  const double gtol = tol::group * std::max(1.0, m.cwiseAbs().maxCoeff());
  std::size_t start = 0;
  while (start < idx.size()) {
    std::size_t end = start + 1;
    while (end < idx.size() && jr.values(idx[end]) - jr.values(idx[end - 1]) <= gtol) ++end;
    Eigenspace sp;
    sp.basis.resize(n, static_cast<Eigen::Index>(end - start));
    double sum = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      sp.basis.col(static_cast<Eigen::Index>(k - start)) = jr.vectors.col(idx[k]);
      sum += jr.values(idx[k]);
    }
    sp.value = sum / static_cast<double>(end - start);
    sp.projector = sp.basis * sp.basis.transpose();
    d.spaces.push_back(std::move(sp));
    start = end;
  }

  d.integral_matrix = ((m.array() - m.array().round()).abs() < 1e-12).all();
  std::vector<double> values = d.eigenvalues();
  for (auto& sp : d.spaces) {
    sp.exact = classify_with_partners(sp.value, values);
    if (d.integral_matrix && sp.exact && std::fabs(sp.exact->value() - sp.value) < 1e-9) sp.value = sp.exact->value();
  }
  return d;
}

SpectralDecomposition decompose(const WeightedGraph& g, MatrixKind kind) {
  return decompose_matrix(matrix_of(g, kind), kind);
}

std::vector<double> SpectralDecomposition::eigenvalues() const {
  std::vector<double> out;
  for (const auto& sp : spaces) out.push_back(sp.value);
  return out;
}

std::optional<std::vector<QuadraticEigenvalue>> SpectralDecomposition::classified() const {
  std::vector<QuadraticEigenvalue> out;
  for (const auto& sp : spaces) {
    if (!sp.exact) return std::nullopt;
    out.push_back(*sp.exact);
  }
  return out;
}

std::optional<std::size_t> SpectralDecomposition::find(double x) const {
  const double gtol = tol::group * std::max(1.0, matrix.size() ? matrix.cwiseAbs().maxCoeff() : 1.0);
  for (std::size_t j = 0; j < spaces.size(); ++j)
    if (std::fabs(spaces[j].value - x) <= gtol) return j;
  return std::nullopt;
}

EigenvalueSet eigenvalue_support(const SpectralDecomposition& d, std::size_t u, double tol) {
  if (u >= d.order()) throw PreconditionError("vertex " + std::to_string(u) + " out of range");
  EigenvalueSet s;
  for (const auto& sp : d.spaces)
    if (sp.projector.col(static_cast<Eigen::Index>(u)).norm() > tol) s.insert(sp.value);
  return s;
}

std::optional<SupportPartition> strong_cospectral(const SpectralDecomposition& d, std::size_t u, std::size_t v,
                                                  double tol) {
  if (u >= d.order() || v >= d.order()) throw PreconditionError("vertex out of range");
  if (u == v) return std::nullopt;
  SupportPartition p;
  p.u = u;
  p.v = v;
  for (const auto& sp : d.spaces) {
    auto eu = sp.projector.col(static_cast<Eigen::Index>(u));
    auto ev = sp.projector.col(static_cast<Eigen::Index>(v));
    bool in_u = eu.norm() > tol::support;
    bool in_v = ev.norm() > tol::support;
    if (!in_u && !in_v) continue;
    if (in_u != in_v) return std::nullopt;
    if ((eu - ev).norm() <= tol)
      p.plus.insert(sp.value);
    else if ((eu + ev).norm() <= tol)
      p.minus.insert(sp.value);
    else
      return std::nullopt;
  }
  return p;
}

bool cospectral(const SpectralDecomposition& d, std::size_t u, std::size_t v, double tol) {
  for (const auto& sp : d.spaces)
    if (std::fabs(sp.projector(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u)) -
                  sp.projector(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v))) > tol)
      return false;
  return true;
}

}  // namespace qwjoin
