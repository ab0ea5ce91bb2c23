#include "qwjoin/state_transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qwjoin/errors.hpp"

namespace qwjoin {

namespace {
constexpr double kPi = std::numbers::pi;
}

AngleSymbol AngleSymbol::make(i64 pi_multiple, i64 denominator, i64 sqrt_of) {
  if (denominator == 0) throw DomainError("angle with zero denominator");
  if (sqrt_of <= 0) throw DomainError("angle with non-positive radicand");
  auto split = squarefree_part(sqrt_of);
  denominator = checked_mul(denominator, split.f);
  if (denominator < 0) {
    denominator = -denominator;
    pi_multiple = -pi_multiple;
  }
  i64 g = gcd2(pi_multiple, denominator);
  if (g == 0) g = 1;
  return {pi_multiple / g, denominator / g, split.s};
}

double AngleSymbol::value() const {
  return static_cast<double>(pi_multiple) * kPi /
         (static_cast<double>(denominator) * std::sqrt(static_cast<double>(sqrt_of)));
}

std::string AngleSymbol::str() const {
  std::ostringstream os;
  if (pi_multiple != 1) os << pi_multiple << "*";
  os << "pi";
  if (denominator != 1 || sqrt_of != 1) {
    os << "/";
    if (sqrt_of != 1 && denominator != 1) os << "(" << denominator << "*sqrt(" << sqrt_of << "))";
    else if (sqrt_of != 1) os << "sqrt(" << sqrt_of << ")";
    else os << denominator;
  }
  return os.str();
}

std::string to_string(SupportType t) {
  switch (t) {
    case SupportType::Integer: return "integer";
    case SupportType::Quadratic: return "quadratic";
    case SupportType::Numeric: return "numeric";
    case SupportType::Trivial: return "trivial";
  }
  return "numeric";
}

// ---------------------------------------------------------------- periodicity

bool is_periodic(const EigenvalueSet& support) {
  const auto& v = support.values();
  if (v.size() <= 1) return true;
  if (classify_values(v)) return true;
  const double l1 = v.back(), l2 = v[v.size() - 2];
  for (std::size_t j = 0; j + 2 < v.size(); ++j)
    if (!reconstruct_rational((l1 - v[j]) / (l1 - l2), tol::ratio_max_den, tol::ratio)) return false;
  return true;
}

PeriodCertificate minimum_period(const EigenvalueSet& support) {
  PeriodCertificate c;
  const auto& v = support.values();
  if (v.empty()) throw DomainError("empty eigenvalue support");
  if (v.size() == 1) {
    c.periodic = true;
    c.trivial = true;
    c.type = SupportType::Trivial;
    c.rho = 0.0;
    c.lambda1 = c.lambda2 = v[0];
    return c;
  }
  if (!is_periodic(support)) throw DomainError("support " + support.str() + " is not periodic");
  c.periodic = true;
  const std::size_t n = v.size();
  c.lambda1 = v[n - 1];
  c.lambda2 = v[n - 2];

  std::vector<i64> dens;
  if (auto form = classify_values(v)) {
    c.type = form->integral() ? SupportType::Integer : SupportType::Quadratic;
    const i64 b1 = form->b[n - 1], b2 = form->b[n - 2];
    for (std::size_t j = 0; j < n; ++j) {
      Rational r(checked_sub(b1, form->b[j]), checked_sub(b1, b2));
      c.ratios.push_back({v[j], r});
      dens.push_back(r.den());
    }
    c.q = lcm_all(dens);
    c.rho_symbolic = AngleSymbol::make(checked_mul(4, c.q), checked_sub(b1, b2), form->delta);
    c.rho = c.rho_symbolic->value();
  } else {
    c.type = SupportType::Numeric;
    for (std::size_t j = 0; j < n; ++j) {
      auto r = reconstruct_rational((c.lambda1 - v[j]) / (c.lambda1 - c.lambda2), tol::ratio_max_den, tol::ratio);
      if (!r) throw DomainError("ratio reconstruction failed");
      c.ratios.push_back({v[j], *r});
      dens.push_back(r->den());
    }
    c.q = lcm_all(dens);
    c.rho = 2.0 * kPi * static_cast<double>(c.q) / (c.lambda1 - c.lambda2);
  }
  return c;
}

PeriodCertificate vertex_period(const SpectralDecomposition& d, std::size_t u) {
  PeriodCertificate c = minimum_period(eigenvalue_support(d, u));
  c.u = u;
  if (c.trivial) {
    c.numeric_check = 1.0;
    return c;
  }
  c.numeric_check = std::abs(transition_entry(d, u, u, *c.rho));
  if (c.numeric_check < 1.0 - tol::pst) {
    std::ostringstream os;
    os << "vertex " << u << ": |U(rho)_uu| = " << c.numeric_check << " at claimed period " << *c.rho;
    throw InconsistencyError(os.str());
  }
  for (int i = 1; i < tol::minimality_grid; ++i) {
    double t = *c.rho * i / tol::minimality_grid;
    if (std::abs(transition_entry(d, u, u, t)) >= 1.0 - 1e-10) {
      std::ostringstream os;
      os << "vertex " << u << " returns at t = " << t << " before the claimed minimum period " << *c.rho;
      throw InconsistencyError(os.str());
    }
  }
  return c;
}

bool graph_periodic(const WeightedGraph& g, MatrixKind kind) {
  SpectralDecomposition d = decompose(g, kind);
  if (kind == MatrixKind::Laplacian && d.integral_matrix) {
    return std::all_of(d.spaces.begin(), d.spaces.end(),
                       [](const Eigenspace& sp) { return reconstruct_integer(sp.value).has_value(); });
  }
  std::vector<double> periods;
  for (std::size_t u = 0; u < g.order(); ++u) {
    EigenvalueSet s = eigenvalue_support(d, u);
    if (!is_periodic(s)) return false;
    auto c = minimum_period(s);
    if (!c.trivial) periods.push_back(*c.rho);
  }
  for (std::size_t i = 1; i < periods.size(); ++i)
    if (!reconstruct_rational(periods[i] / periods[0], tol::ratio_max_den, tol::ratio)) return false;
  return true;
}

// ---------------------------------------------------------------- perfect state transfer

PSTCertificate pst_from_partition(const SupportPartition& p, bool integral_polynomial) {
  PSTCertificate c;
  c.u = p.u;
  c.v = p.v;
  c.partition = p;
  c.source = "arithmetic criterion";
  if (p.minus.empty()) {
    c.reason = "sigma- is empty";
    return c;
  }
  if (p.plus.empty()) {
    c.reason = "sigma+ is empty";
    return c;
  }
  std::vector<double> values = p.plus.values();
  values.insert(values.end(), p.minus.values().begin(), p.minus.values().end());
  auto form = classify_values(values);
  if (!form) {
    c.reason = "support is neither integral nor quadratic of a common form";
    return c;
  }
  if (!form->integral() && !integral_polynomial) {
    c.reason = "quadratic support without an integer characteristic polynomial";
    return c;
  }
  c.delta = form->delta;
  const std::size_t np = p.plus.size();
  std::vector<i64> bp(form->b.begin(), form->b.begin() + static_cast<std::ptrdiff_t>(np));
  std::vector<i64> bm(form->b.begin() + static_cast<std::ptrdiff_t>(np), form->b.end());

  // differences in half units: (lambda - eta)/sqrt(delta) = (b_lambda - b_eta)/2
  std::optional<int> cross;
  bool cross_equal = true;
  for (i64 x : bp)
    for (i64 y : bm) {
      i64 diff = checked_sub(x, y);
      int e = nu2(diff) - 1;
      c.nu2_ledger.push_back({Rational(diff, 2), e, false});
      if (!cross) cross = e;
      else if (*cross != e) cross_equal = false;
    }
  bool plus_higher = true;
  for (std::size_t i = 0; i < bp.size(); ++i)
    for (std::size_t j = i + 1; j < bp.size(); ++j) {
      i64 diff = checked_sub(bp[i], bp[j]);
      int e = nu2(diff) - 1;
      c.nu2_ledger.push_back({Rational(diff, 2), e, true});
      if (e <= *cross) plus_higher = false;
    }
  if (!cross_equal) {
    c.reason = "2-adic valuations between sigma+ and sigma- are not all equal";
    return c;
  }
  if (!plus_higher) {
    c.reason = "a difference inside sigma+ has 2-adic valuation not above the sigma+/sigma- level";
    return c;
  }
  std::vector<i64> diffs;
  for (i64 x : form->b) diffs.push_back(checked_sub(bp[0], x));
  const i64 G = gcd_all(diffs);
  c.g = Rational(G, 2);
  c.tau_symbolic = AngleSymbol::make(2, G, form->delta);
  c.tau = c.tau_symbolic->value();
  c.pst = true;
  c.reason = "all conditions hold";
  return c;
}

PSTCertificate pst_certificate(const SpectralDecomposition& d, std::size_t u, std::size_t v) {
  PSTCertificate c;
  auto sc = strong_cospectral(d, u, v);
  if (!sc) {
    c.u = u;
    c.v = v;
    c.source = "spectral decomposition";
    c.reason = "not strongly cospectral";
    return c;
  }
  c = pst_from_partition(*sc, d.integral_matrix);
  c.source = "spectral decomposition";
  if (c.pst) {
    c.numeric_check = std::abs(transition_entry(d, u, v, *c.tau));
    if (*c.numeric_check < 1.0 - tol::pst) {
      std::ostringstream os;
      os << "certificate claims PST between " << u << " and " << v << " at " << *c.tau << " but |U(tau)_uv| = "
         << *c.numeric_check;
      throw InconsistencyError(os.str());
    }
  }
  return c;
}

std::vector<PSTCertificate> pst_pairs(const SpectralDecomposition& d) {
  std::vector<PSTCertificate> out;
  for (std::size_t u = 0; u < d.order(); ++u)
    for (std::size_t v = u + 1; v < d.order(); ++v) {
      auto c = pst_certificate(d, u, v);
      if (c.pst) out.push_back(std::move(c));
    }
  return out;
}

}  // namespace qwjoin
