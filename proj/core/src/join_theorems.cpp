#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qwjoin/errors.hpp"
#include "qwjoin/state_transfer.hpp"
#include "detail.hpp"

namespace qwjoin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kValTol = tol::set_equal;

bool near(double a, double b) { return std::fabs(a - b) <= kValTol; }

i64 as_int(double x, const char* what) {
  auto r = reconstruct_integer(x, 1e-7);
  if (!r) throw PreconditionError(std::string(what) + " is not an integer");
  return *r;
}

std::vector<i64> as_ints(const EigenvalueSet& s, const char* what) {
  std::vector<i64> out;
  for (double x : s) out.push_back(as_int(x, what));
  return out;
}

std::string set_mismatch(const char* what, const EigenvalueSet& closed, const EigenvalueSet& brute) {
  std::ostringstream os;
  os << what << ": closed form " << closed.str() << " but spectral decomposition gives " << brute.str();
  return os.str();
}

// Pair placement inside X v Y.
struct Placement {
  bool cross = false;
  bool swapped = false;  // both vertices in Y; roles of X and Y exchanged
  std::size_t u = 0, v = 0;
};

Placement place(std::size_t m, std::size_t total, std::size_t u, std::size_t v) {
  if (u >= total || v >= total) throw PreconditionError("vertex out of range for the join");
  Placement p;
  bool ul = u < m, vl = v < m;
  if (ul != vl) {
    p.cross = true;
    p.u = u;
    p.v = v;
    return p;
  }
  p.swapped = !ul;
  p.u = ul ? u : u - m;
  p.v = vl ? v : v - m;
  return p;
}

// Closed-form machinery over the spectrum of the left operand.
struct JoinContext {
  const WeightedGraph& x;
  JoinParams p;
  SpectralDecomposition dx;
  bool connected;

  JoinContext(const WeightedGraph& x_, const WeightedGraph& y_, MatrixKind kind)
      : x(x_), p(join_params(x_, y_, kind)), dx(decompose(x_, kind)), connected(x_.is_connected()) {}

  JoinContext(const WeightedGraph& x_, JoinParams params)
      : x(x_), p(params), dx(decompose(x_, params.kind)), connected(x_.is_connected()) {}

  double md() const { return static_cast<double>(p.m); }
  double nd() const { return static_cast<double>(p.n); }

  EigenvalueSet support(std::size_t u) const {
    EigenvalueSet sx = eigenvalue_support(dx, u);
    EigenvalueSet out;
    if (p.kind == MatrixKind::Laplacian) {
      for (double l : sx)
        if (!near(l, 0.0)) out.insert(l + nd());
      out.insert(0.0);
      out.insert(md() + nd());
      if (!connected) out.insert(nd());
    } else {
      for (double l : sx)
        if (!near(l, p.k)) out.insert(l);
      out.insert(p.lambda_plus);
      out.insert(p.lambda_minus);
      if (!connected) out.insert(p.k);
    }
    return out;
  }

  std::optional<SupportPartition> partition(std::size_t u, std::size_t v) const {
    SupportPartition out;
    out.u = u;
    out.v = v;
    if (p.kind == MatrixKind::Laplacian) {
      if (x.is_empty_pair(0.0)) {
        out.plus = EigenvalueSet{0.0, nd() + 2.0};
        out.minus = EigenvalueSet{nd()};
        return out;
      }
      auto sc = strong_cospectral(dx, u, v);
      if (!sc || sc->minus.contains(md())) return std::nullopt;
      for (double l : sc->plus)
        if (!near(l, 0.0)) out.plus.insert(l + nd());
      out.plus.insert(0.0);
      out.plus.insert(md() + nd());
      if (!connected) out.plus.insert(nd());
      for (double mu : sc->minus) out.minus.insert(mu + nd());
      return out;
    }
    if (x.is_empty_pair(p.k)) {
      out.plus = EigenvalueSet{p.lambda_minus, p.lambda_plus};
      out.minus = EigenvalueSet{p.k};
      return out;
    }
    auto sc = strong_cospectral(dx, u, v);
    if (!sc || sc->minus.contains(p.lambda_minus) || sc->minus.contains(p.lambda_plus)) return std::nullopt;
    for (double l : sc->plus)
      if (!near(l, p.k)) out.plus.insert(l);
    out.plus.insert(p.lambda_plus);
    out.plus.insert(p.lambda_minus);
    if (!connected) out.plus.insert(p.k);
    out.minus = sc->minus;
    return out;
  }
};

const WeightedGraph& left_of(const Placement& pl, const WeightedGraph& x, const WeightedGraph& y) {
  return pl.swapped ? y : x;
}
const WeightedGraph& right_of(const Placement& pl, const WeightedGraph& x, const WeightedGraph& y) {
  return pl.swapped ? x : y;
}

Rational rational_of(double x, const char* what) {
  auto r = reconstruct_rational(x, 1000000, 1e-9);
  if (!r) throw DomainError(std::string(what) + " is not rational");
  return *r;
}

i64 den_of(double x, const char* what) { return rational_of(x, what).den(); }

int nu2i(i64 x) { return nu2_or_inf(x); }

}  // namespace

namespace detail {

std::string set_mismatch_d(const char* what, const EigenvalueSet& closed, const EigenvalueSet& brute) {
  return set_mismatch(what, closed, brute);
}

void check_partitions(const char* what, const std::optional<SupportPartition>& closed,
                      const std::optional<SupportPartition>& brute) {
  if (closed.has_value() != brute.has_value()) {
    std::ostringstream os;
    os << what << ": closed form says " << (closed ? "strongly cospectral" : "not strongly cospectral")
       << " but the spectral decomposition says " << (brute ? "strongly cospectral" : "not strongly cospectral");
    if (closed) os << " (closed plus " << closed->plus.str() << ", minus " << closed->minus.str() << ")";
    if (brute) os << " (brute plus " << brute->plus.str() << ", minus " << brute->minus.str() << ")";
    throw InconsistencyError(os.str());
  }
  if (!closed) return;
  if (!closed->plus.approx_equal(brute->plus)) throw InconsistencyError(set_mismatch_d(what, closed->plus, brute->plus));
  if (!closed->minus.approx_equal(brute->minus))
    throw InconsistencyError(set_mismatch_d(what, closed->minus, brute->minus));
}

void check_certificates(const char* what, PSTCertificate& closed, const PSTCertificate& brute) {
  if (closed.pst != brute.pst) {
    std::ostringstream os;
    os << what << ": closed form says " << (closed.pst ? "PST" : "no PST") << " (" << closed.reason
       << ") but the spectral decomposition says " << (brute.pst ? "PST" : "no PST") << " (" << brute.reason << ")";
    throw InconsistencyError(os.str());
  }
  if (closed.pst) {
    if (std::fabs(*closed.tau - *brute.tau) > 1e-9 * std::max(1.0, *brute.tau)) {
      std::ostringstream os;
      os << what << ": closed-form PST time " << *closed.tau << " differs from " << *brute.tau;
      throw InconsistencyError(os.str());
    }
    closed.numeric_check = brute.numeric_check;
  }
}

}  // namespace detail

using detail::check_certificates;
using detail::check_partitions;

// ---------------------------------------------------------------- supports and strong cospectrality

EigenvalueSet join_support(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, MatrixKind kind,
                           CheckMode mode) {
  auto pl = place(x.order(), x.order() + y.order(), u, u);
  JoinContext ctx(left_of(pl, x, y), right_of(pl, x, y), kind);
  EigenvalueSet closed = ctx.support(pl.u);
  if (mode == CheckMode::Verify) {
    EigenvalueSet brute = eigenvalue_support(decompose(join(x, y), kind), u);
    if (!closed.approx_equal(brute)) throw InconsistencyError(set_mismatch("join support", closed, brute));
  }
  return closed;
}

std::optional<SupportPartition> join_strong_cospectral(const WeightedGraph& x, const WeightedGraph& y,
                                                       std::size_t u, std::size_t v, MatrixKind kind,
                                                       CheckMode mode) {
  const std::size_t m = x.order();
  auto pl = place(m, m + y.order(), u, v);
  if (u == v) throw PreconditionError("strong cospectrality needs two distinct vertices");
  std::optional<SupportPartition> closed;
  if (!pl.cross) {
    const WeightedGraph& lx = left_of(pl, x, y);
    if (lx.order() < 2) throw PreconditionError("the side holding u and v needs at least two vertices");
    JoinContext ctx(lx, right_of(pl, x, y), kind);
    closed = ctx.partition(pl.u, pl.v);
    if (closed) {
      closed->u = u;
      closed->v = v;
    }
  } else {
    join_params(x, y, kind);
  }
  if (mode == CheckMode::Verify)
    check_partitions("join strong cospectrality", closed, strong_cospectral(decompose(join(x, y), kind), u, v));
  return closed;
}

// ---------------------------------------------------------------- periodicity

bool join_periodic(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, MatrixKind kind, CheckMode mode) {
  auto pl = place(x.order(), x.order() + y.order(), u, u);
  JoinContext ctx(left_of(pl, x, y), right_of(pl, x, y), kind);
  EigenvalueSet sx = eigenvalue_support(ctx.dx, pl.u);
  bool closed = true;
  if (kind == MatrixKind::Laplacian) {
    for (double l : sx)
      if (!reconstruct_rational(l, tol::ratio_max_den, tol::ratio)) closed = false;
  } else {
    for (double l : sx) {
      if (ctx.connected && near(l, ctx.p.k)) continue;
      if (!reconstruct_rational((ctx.p.lambda_plus - l) / ctx.p.root_D, tol::ratio_max_den, tol::ratio))
        closed = false;
    }
  }
  bool generic = is_periodic(ctx.support(pl.u));
  if (closed != generic)
    throw InconsistencyError("join periodicity: rationality test and ratio condition disagree");
  if (mode == CheckMode::Verify) {
    bool brute = is_periodic(eigenvalue_support(decompose(join(x, y), kind), u));
    if (brute != closed) throw InconsistencyError("join periodicity: closed form and spectral decomposition disagree");
  }
  return closed;
}

JoinPeriodRatio join_period_ratio(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, MatrixKind kind,
                                  CheckMode mode) {
  auto pl = place(x.order(), x.order() + y.order(), u, u);
  JoinContext ctx(left_of(pl, x, y), right_of(pl, x, y), kind);
  EigenvalueSet sx = eigenvalue_support(ctx.dx, pl.u);
  if (sx.size() < 2) throw DomainError("u has a one-element support in X; the period ratio is undefined");
  if (!is_periodic(sx)) throw DomainError("u is not periodic in X");
  EigenvalueSet sj = ctx.support(pl.u);
  if (!join_periodic(x, y, u, kind, mode)) throw DomainError("u is not periodic in X v Y");

  const JoinParams& p = ctx.p;
  // role values: pivot p0 (0 or k), special s (m or lambda-), far f (-n or lambda+), all in X coordinates
  double p0, s, f;
  if (kind == MatrixKind::Laplacian) {
    p0 = 0.0;
    s = ctx.md();
    f = -ctx.nd();
  } else {
    p0 = p.k;
    s = p.lambda_minus;
    f = p.lambda_plus;
  }
  std::vector<double> lam;
  for (double l : sx)
    if (!near(l, p0)) lam.push_back(l);
  std::sort(lam.rbegin(), lam.rend());
  bool s_in = false;
  if (auto it = std::find_if(lam.begin(), lam.end(), [&](double l) { return near(l, s); }); it != lam.end()) {
    s_in = true;
    if (lam.size() >= 2) {
      double sv = *it;
      lam.erase(it);
      lam.push_back(sv);
    }
  }
  const std::size_t r = lam.size();
  JoinPeriodRatio out;
  double c = 0.0;
  std::optional<Rational> c_exact;
  auto led = [&](const std::string& name, const Rational& q) { out.ledger.emplace_back(name, q); };

  auto generic_block = [&](bool disconnected) {
    // lam[0] > lam[1]; the special value sits last when present
    const std::size_t rr = s_in ? r - 1 : r;  // entries of lam other than s
    const double l1 = lam[0], l2 = lam[1];
    const double b = l1 - l2;
    std::vector<i64> qs;  // q_3 .. q_rr
    for (std::size_t j = 2; j < rr; ++j) {
      i64 q = den_of((l1 - lam[j]) / b, "eigenvalue ratio");
      qs.push_back(q);
      led("q_" + std::to_string(j + 1), Rational(q));
    }
    const i64 q_p0 = den_of((l1 - p0) / b, "pivot ratio");
    const i64 q_s = den_of((l1 - s) / b, "special ratio");
    const i64 q_f = den_of((l1 - f) / b, "far ratio");
    led("q_pivot", Rational(q_p0));
    led("q_special", Rational(q_s));
    led("q_far", Rational(q_f));
    const i64 R1 = lcm_all(qs);
    if (!disconnected && !s_in) {
      out.case_id = "1c";
      const i64 R2 = lcm2(R1, q_s);
      c_exact = Rational(checked_mul(checked_mul(q_s, q_f), gcd2(R1, q_p0)),
                         checked_mul(checked_mul(q_p0, gcd2(R1, q_s)), gcd2(R2, q_f)));
    } else if (!disconnected) {
      out.case_id = "1d";
      const i64 qx = lcm2(lcm2(R1, q_s), q_p0);
      const i64 qj = lcm2(lcm2(R1, q_s), q_f);
      c_exact = Rational(qj, qx);
    } else if (!s_in) {
      out.case_id = "2c";
      const i64 q = lcm2(R1, q_p0);
      const i64 R = lcm2(q, q_s);
      c_exact = Rational(checked_mul(q_s, q_f), checked_mul(gcd2(q, q_s), gcd2(R, q_f)));
    } else {
      out.case_id = "2d";
      const i64 qx = lcm2(lcm2(R1, q_s), q_p0);
      c_exact = Rational(q_f, gcd2(qx, q_f));
    }
    c = c_exact->value();
  };

  if (ctx.connected) {
    if (r == 1) {
      out.case_id = "1a";
      const double l1 = lam[0];
      if (kind == MatrixKind::Laplacian) {
        Rational pq = rational_of((s - f) / (l1 - f), "(m+n)/(lambda_1+n)");
        led("(m+n)/(lambda_1+n)", pq);
        c = (l1 - p0) * static_cast<double>(pq.den()) / (l1 - f);
      } else {
        Rational pq = rational_of((p.lambda_plus - l1) / p.root_D, "(lambda+ - lambda_1)/sqrt(D)");
        led("(lambda+ - lambda_1)/sqrt(D)", pq);
        c = static_cast<double>(pq.den()) * (p.k - l1) / p.root_D;
      }
    } else if (r == 2 && s_in) {
      out.case_id = "1b";
      const double l1 = lam[0];
      if (kind == MatrixKind::Laplacian) {
        Rational pq = rational_of((s - f) / (l1 - f), "(m+n)/(lambda_1+n)");
        Rational pq2 = rational_of((s - p0) / (l1 - p0), "m/lambda_1");
        led("(m+n)/(lambda_1+n)", pq);
        led("m/lambda_1", pq2);
        c = (l1 - p0) * static_cast<double>(pq.den()) / (static_cast<double>(pq2.den()) * (l1 - f));
      } else {
        Rational pq = rational_of((p.lambda_plus - l1) / p.root_D, "(lambda+ - lambda_1)/sqrt(D)");
        Rational pq2 = rational_of((l1 - p.k) / (l1 - p.lambda_minus), "(lambda_1 - k)/(lambda_1 - lambda-)");
        led("(lambda+ - lambda_1)/sqrt(D)", pq);
        led("(lambda_1 - k)/(lambda_1 - lambda-)", pq2);
        c = std::fabs(l1 - p.lambda_minus) * static_cast<double>(pq.den()) /
            (static_cast<double>(pq2.den()) * p.root_D);
      }
    } else {
      generic_block(false);
    }
  } else {
    if (r == 1) {
      out.case_id = "2a";
      const double l1 = lam[0];
      i64 q3 = den_of((l1 - s) / (l1 - p0), "special ratio");
      i64 q4 = den_of((l1 - f) / (l1 - p0), "far ratio");
      led("q_special", Rational(q3));
      led("q_far", Rational(q4));
      c_exact = Rational(lcm2(q3, q4));
      c = c_exact->value();
    } else if (r == 2 && s_in) {
      out.case_id = "2b";
      const double l1 = lam[0];
      i64 q4 = den_of((l1 - s) / (l1 - p0), "special ratio");
      i64 q5 = den_of((l1 - f) / (l1 - p0), "far ratio");
      led("q_special", Rational(q4));
      led("q_far", Rational(q5));
      c_exact = Rational(lcm2(q4, q5), q4);
      c = c_exact->value();
    } else {
      generic_block(true);
    }
  }
  if (!c_exact) c_exact = reconstruct_rational(c, 1000000, 1e-10);
  out.c = c_exact ? *c_exact : Rational(0);
  out.c_value = c;

  out.rho_x = *minimum_period(sx).rho;
  out.rho_join = c * out.rho_x;
  const double rho_generic = *minimum_period(sj).rho;
  if (std::fabs(out.rho_join - rho_generic) > 1e-9 * rho_generic) {
    std::ostringstream os;
    os << "period ratio case " << out.case_id << ": c * rho_X = " << out.rho_join
       << " but the minimum period of the join support is " << rho_generic;
    throw InconsistencyError(os.str());
  }
  return out;
}

// ---------------------------------------------------------------- PST in joins

namespace {

PSTCertificate laplacian_join_pst(const JoinContext& ctx, std::size_t u, std::size_t v) {
  const JoinParams& p = ctx.p;
  const i64 m = static_cast<i64>(p.m), n = static_cast<i64>(p.n);
  PSTCertificate c;
  c.u = u;
  c.v = v;
  c.source = "Laplacian join theorem";
  auto part = ctx.partition(u, v);
  c.partition = part;

  bool verdict = false;
  if (ctx.x.is_empty_pair(0.0)) {
    verdict = n % 4 == 2;
    c.reason = verdict ? "double cone with n = 2 mod 4" : "double cone needs n = 2 mod 4";
  } else {
    auto sc = strong_cospectral(ctx.dx, u, v);
    if (!sc) {
      c.reason = "u and v are not strongly cospectral in X";
      return c;
    }
    if (sc->minus.contains(static_cast<double>(m))) {
      c.reason = "m lies in sigma-(L(X))";
      return c;
    }
    EigenvalueSet sx = eigenvalue_support(ctx.dx, u);
    if (!classify_values(sx.values()) || !classify_values(sx.values())->integral()) {
      c.reason = "sigma_u(L(X)) is not integral";
      return c;
    }
    std::vector<i64> lams;
    for (double l : sc->plus)
      if (!near(l, 0.0)) lams.push_back(as_int(l, "eigenvalue"));
    if (std::find(lams.begin(), lams.end(), m) == lams.end()) lams.push_back(m);
    std::vector<i64> mus = as_ints(sc->minus, "eigenvalue");

    auto cond_i = [&]() {
      const int e = nu2(mus[0]);
      for (i64 mu : mus)
        if (nu2(mu) != e) return false;
      for (i64 l : lams)
        if (nu2(l) <= e) return false;
      return nu2(n) > e;
    };
    auto cond_ii = [&]() {
      for (i64 l : lams) {
        if (nu2(l) != nu2(n)) return false;
        for (i64 mu : mus)
          if (nu2(mu) <= nu2(l)) return false;
      }
      return true;
    };
    auto cond_iii = [&]() {
      const int a = nu2(n);
      for (i64 l : lams)
        if (nu2(l) != a) return false;
      for (i64 mu : mus)
        if (nu2(mu) != a) return false;
      const i64 scale = i64{1} << a;
      const int e = nu2((mus[0] + n) / scale);
      for (i64 mu : mus)
        if (nu2((mu + n) / scale) != e) return false;
      for (i64 l : lams)
        if (nu2((l + n) / scale) <= e) return false;
      return true;
    };

    if (ctx.connected) {
      if (cond_i()) {
        verdict = true;
        c.reason = "connected X, 2-adic case (i)";
      } else if (cond_ii()) {
        verdict = true;
        c.reason = "connected X, 2-adic case (ii)";
      } else if (cond_iii()) {
        verdict = true;
        c.reason = "connected X, 2-adic case (iii)";
      } else {
        c.reason = "connected X, none of the 2-adic cases holds";
      }
    } else {
      if (!ctx.x.same_component(u, v)) {
        c.reason = "u and v lie in different components of X";
      } else if (cond_i()) {
        verdict = true;
        c.reason = "disconnected X, 2-adic case (i)";
      } else {
        c.reason = "disconnected X, 2-adic case (i) fails";
      }
    }
  }

  if (!part) {
    if (verdict) throw InconsistencyError("Laplacian join theorem grants PST without strong cospectrality");
    return c;
  }
  PSTCertificate arith = pst_from_partition(*part, true);
  c.nu2_ledger = arith.nu2_ledger;
  c.delta = 1;
  if (arith.pst != verdict) {
    std::ostringstream os;
    os << "Laplacian join theorem (" << c.reason << ") and the arithmetic criterion on the closed-form partition ("
       << arith.reason << ") disagree";
    throw InconsistencyError(os.str());
  }
  if (verdict) {
    std::vector<i64> T;
    for (double t : part->plus) T.push_back(as_int(t, "eigenvalue"));
    for (double t : part->minus) T.push_back(as_int(t, "eigenvalue"));
    const i64 g = gcd_all(T);
    c.g = Rational(g);
    c.tau_symbolic = AngleSymbol::make(1, g);
    c.tau = c.tau_symbolic->value();
    c.pst = true;
    if (std::fabs(*c.tau - *arith.tau) > 1e-12) throw InconsistencyError("Laplacian join PST time mismatch");
  }
  return c;
}

PSTCertificate adjacency_join_pst(const JoinContext& ctx, std::size_t u, std::size_t v) {
  const JoinParams& p = ctx.p;
  PSTCertificate c;
  c.u = u;
  c.v = v;
  c.source = "adjacency join theorem";
  const i64 k = as_int(p.k, "k"), l = as_int(p.ell, "ell");
  const auto Dint = reconstruct_integer(p.D, 1e-7);
  const bool d_square = Dint && is_perfect_square(*Dint);
  auto part = ctx.partition(u, v);
  c.partition = part;

  // periodicity of u in the join: integral support with D square, or one quadratic form with a = k + ell
  auto quadratic_join_support = [&]() {
    std::vector<double> vals;
    for (double x : ctx.support(u)) vals.push_back(x);
    auto f = classify_values(vals);
    return f && !f->integral() && f->a == k + l;
  };
  bool c1 = false, c2 = false;
  if (ctx.x.is_empty_pair(p.k)) {
    c1 = true;
    c2 = d_square || quadratic_join_support();
    c.reason = d_square ? "X = O_2(k), D a perfect square"
               : c2     ? "X = O_2(k), k = ell, quadratic support"
                        : "X = O_2(k), D not a perfect square and k != ell";
  } else {
    auto sc = strong_cospectral(ctx.dx, u, v);
    if (!sc) {
      c.reason = "u and v are not strongly cospectral in X";
      return c;
    }
    if (sc->minus.contains(p.lambda_minus)) {
      c.reason = "lambda- lies in sigma-(A(X))";
      return c;
    }
    c1 = true;
    EigenvalueSet sx = eigenvalue_support(ctx.dx, u);
    auto fx = classify_values(sx.values());
    c2 = (fx && fx->integral() && d_square) || quadratic_join_support();
    if (!c2) c.reason = "support is neither integral with D square nor quadratic of the required form";
  }
  if (!c1 || !c2) {
    if (!part && c1) throw InconsistencyError("adjacency join: condition (1) holds without strong cospectrality");
    return c;
  }
  PSTCertificate arith = pst_from_partition(*part, true);
  c.nu2_ledger = arith.nu2_ledger;
  c.delta = arith.delta;
  c.pst = arith.pst;
  c.reason = arith.pst ? "all conditions hold" : arith.reason;
  if (arith.pst) {
    c.g = arith.g;
    c.tau = arith.tau;
    c.tau_symbolic = arith.tau_symbolic;
  }
  return c;
}

PSTCertificate join_pst_in_context(const JoinContext& ctx, std::size_t u, std::size_t v) {
  if (ctx.p.m < 2) throw PreconditionError("PST in a join needs |X| >= 2");
  if (!ctx.x.has_integer_weights())
    throw PreconditionError("the join PST criterion needs an integer characteristic polynomial for X");
  return ctx.p.kind == MatrixKind::Laplacian ? laplacian_join_pst(ctx, u, v) : adjacency_join_pst(ctx, u, v);
}

void relabel(PSTCertificate& c, std::size_t u, std::size_t v) {
  c.u = u;
  c.v = v;
  if (c.partition) {
    c.partition->u = u;
    c.partition->v = v;
  }
}

}  // namespace

PSTCertificate join_pst(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, std::size_t v, MatrixKind kind,
                        CheckMode mode) {
  const std::size_t m = x.order();
  if (u == v) throw PreconditionError("PST needs two distinct vertices");
  auto pl = place(m, m + y.order(), u, v);
  PSTCertificate c;
  if (pl.cross) {
    join_params(x, y, kind);
    c.u = u;
    c.v = v;
    c.source = "join theorem";
    c.reason = "a vertex of X and a vertex of Y are never strongly cospectral";
  } else {
    JoinContext ctx(left_of(pl, x, y), right_of(pl, x, y), kind);
    c = join_pst_in_context(ctx, pl.u, pl.v);
    relabel(c, u, v);
  }
  if (mode == CheckMode::Verify) {
    auto brute = pst_certificate(decompose(join(x, y), kind), u, v);
    check_certificates("join PST", c, brute);
  }
  return c;
}

PSTCertificate double_cone_pst(const WeightedGraph& y, MatrixKind kind, double loop_k, CheckMode mode) {
  WeightedGraph x = kind == MatrixKind::Laplacian ? family::empty(2) : family::empty_with_loops(2, loop_k);
  if (kind == MatrixKind::Laplacian && loop_k != 0.0) throw PreconditionError("Laplacian double cones have no loops");
  PSTCertificate c = join_pst(x, y, 0, 1, kind, mode);
  bool rule;
  const JoinParams p = join_params(x, y, kind);
  if (kind == MatrixKind::Laplacian) {
    rule = p.n % 4 == 2;
  } else {
    auto Dint = reconstruct_integer(p.D, 1e-7);
    rule = false;
    if (Dint && is_perfect_square(*Dint)) {
      const i64 k = as_int(p.k, "k");
      const i64 lp = as_int(p.lambda_plus, "lambda+"), lm = as_int(p.lambda_minus, "lambda-");
      rule = nu2_or_inf(lp - k) == nu2_or_inf(lm - k);
    } else {
      rule = std::fabs(p.k - p.ell) < 1e-9;  // k = ell puts k on the quadratic form of lambda+-
    }
  }
  if (rule != c.pst) throw InconsistencyError("double cone rule and the join theorem disagree");
  c.source = "double cone rule";
  return c;
}

// ---------------------------------------------------------------- preservation

PreservationReport pst_preserved(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, std::size_t v,
                                 MatrixKind kind, CheckMode mode) {
  const std::size_t m = x.order();
  if (u >= m || v >= m) throw PreconditionError("u and v must be vertices of X");
  JoinContext ctx(x, y, kind);
  PSTCertificate cx = pst_certificate(ctx.dx, u, v);
  if (!cx.pst) throw DomainError("X has no PST between u and v");

  PreservationReport r;
  r.tau_x = cx.tau;
  r.join_certificate = join_pst(x, y, u, v, kind, mode);
  const PSTCertificate& cj = r.join_certificate;
  const SupportPartition& sc = *cx.partition;

  if (cx.delta != 1) {
    r.rule = "general join criterion";
    r.preserved = cj.pst;
    r.detail = "quadratic support in X; verdict from the join criterion";
  } else if (kind == MatrixKind::Laplacian) {
    const i64 h = cx.g->num();  // integer support: tau_X = pi/h
    const i64 mi = static_cast<i64>(ctx.p.m), ni = static_cast<i64>(ctx.p.n);
    r.nu2_h = nu2(h);
    r.alpha_needed = *r.nu2_h + 1;
    const bool m_minus = sc.minus.contains(static_cast<double>(mi));
    r.preserved = !m_minus && nu2(mi) > *r.nu2_h && nu2(ni) > *r.nu2_h;
    std::ostringstream os;
    if (m_minus) {
      os << "m = " << mi << " lies in sigma-; no Y keeps PST (augment X with a disjoint Z instead)";
      r.rule = "m in sigma- obstruction";
    } else if (x.is_unweighted() && (mi & (mi - 1)) == 0) {
      r.rule = "power-of-two order rule";
      os << "m = 2^" << nu2(mi) << "; need n = 0 mod 2^" << *r.alpha_needed;
    } else {
      r.rule = "2-adic preservation rule";
      os << "need m, n = 0 mod 2^" << *r.alpha_needed << " (nu2(h) = " << *r.nu2_h << ")";
    }
    r.detail = os.str();
  } else {
    const i64 k = as_int(ctx.p.k, "k"), l = as_int(ctx.p.ell, "ell");
    auto Dint = reconstruct_integer(ctx.p.D, 1e-7);
    r.rule = "adjacency preservation rule";
    r.nu2_h = nu2(cx.g->num());
    if (!Dint || !is_perfect_square(*Dint)) {
      r.preserved = false;
      r.detail = "D is not a perfect square";
    } else {
      const i64 s = (isqrt(*Dint) - (k - l)) / 2;
      r.s = s;
      bool ok = !sc.minus.contains(static_cast<double>(l - s));
      for (double mu_d : sc.minus) {
        const i64 mu = as_int(mu_d, "eigenvalue");
        const int e = nu2(k - mu);
        if (!(nu2(s) > e && nu2i(l - k) > e)) ok = false;
      }
      r.preserved = ok;
      std::ostringstream os;
      os << "s = " << s << ", lambda- = ell - s = " << l - s;
      r.detail = os.str();
    }
  }
  if (r.preserved != cj.pst) {
    std::ostringstream os;
    os << "preservation rule (" << r.rule << ": " << r.detail << ") says " << (r.preserved ? "kept" : "lost")
       << " but the join criterion says " << (cj.pst ? "PST" : "no PST") << " (" << cj.reason << ")";
    throw InconsistencyError(os.str());
  }
  if (cj.pst) {
    r.tau_join = cj.tau;
    r.ratio = rational_of(*r.tau_x / *cj.tau, "tau_X/tau_join");
    if (nu2(*cj.g) != nu2(*cx.g)) throw InconsistencyError("PST time 2-adic valuations differ after preservation");
  }
  return r;
}

PreservationReport pst_disconnected_augmentation(const WeightedGraph& x, const WeightedGraph& z, const WeightedGraph& y,
                                                 std::size_t u, std::size_t v, CheckMode mode) {
  if (u >= x.order() || v >= x.order()) throw PreconditionError("u and v must be vertices of X");
  SpectralDecomposition dx = decompose(x, MatrixKind::Laplacian);
  PSTCertificate cx = pst_certificate(dx, u, v);
  if (!cx.pst) throw DomainError("X has no PST between u and v");
  if (cx.delta != 1) throw PreconditionError("augmentation rule needs an integral support");
  const i64 m = static_cast<i64>(x.order()), r_sz = static_cast<i64>(z.order()), n = static_cast<i64>(y.order());
  const SupportPartition& sc = *cx.partition;
  if (sc.minus.contains(static_cast<double>(m + r_sz)))
    throw PreconditionError("m + r lies in sigma-(L(X)); the augmentation rule does not apply");
  PreservationReport rep;
  rep.rule = "disconnected augmentation rule";
  rep.tau_x = cx.tau;
  const i64 h = cx.g->num();
  rep.nu2_h = nu2(h);
  rep.alpha_needed = *rep.nu2_h + 1;
  rep.preserved = nu2(m + r_sz) > *rep.nu2_h && nu2(n) > *rep.nu2_h;
  std::ostringstream os;
  os << "need nu2(m + r) > " << *rep.nu2_h << " and nu2(n) > " << *rep.nu2_h;
  if (sc.minus.contains(static_cast<double>(m))) os << " (m in sigma-: equivalently nu2(n) > nu2(m) = nu2(r))";
  rep.detail = os.str();
  rep.join_certificate = join_pst(disjoint_union(x, z), y, u, v, MatrixKind::Laplacian, mode);
  if (rep.join_certificate.pst != rep.preserved)
    throw InconsistencyError("augmentation rule and the join criterion disagree");
  if (rep.preserved) {
    rep.tau_join = rep.join_certificate.tau;
    rep.ratio = rational_of(*rep.tau_x / *rep.tau_join, "tau_X/tau_join");
  }
  return rep;
}

// ---------------------------------------------------------------- induced PST

InducedReport pst_induced(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, std::size_t v, MatrixKind kind,
                          CheckMode mode) {
  const std::size_t mz = x.order();
  if (u >= mz || v >= mz) throw PreconditionError("u and v must be vertices of X");
  JoinContext ctx(x, y, kind);
  InducedReport rep;
  const bool empty_pair = x.is_empty_pair(kind == MatrixKind::Laplacian ? 0.0 : ctx.p.k);
  std::optional<SupportPartition> sc;
  if (!empty_pair) {
    sc = strong_cospectral(ctx.dx, u, v);
    if (!sc) throw DomainError("u and v are not strongly cospectral in X");
    if (pst_certificate(ctx.dx, u, v).pst) throw DomainError("X already has PST between u and v");
  }
  rep.join_certificate = join_pst(x, y, u, v, kind, mode);
  const bool join_verdict = rep.join_certificate.pst;

  const i64 m = static_cast<i64>(ctx.p.m), n = static_cast<i64>(ctx.p.n);
  if (kind == MatrixKind::Laplacian) {
    if (empty_pair) {
      rep.rule = "double cone rule";
      rep.induced = n % 4 == 2;
      rep.detail = "n = 2 mod 4";
    } else {
      auto fx = classify_values(eigenvalue_support(ctx.dx, u).values());
      if (!fx || !fx->integral()) throw PreconditionError("sigma_u(L(X)) must be integral");
      std::vector<i64> lams, mus = as_ints(sc->minus, "eigenvalue");
      for (double l : sc->plus)
        if (!near(l, 0.0)) lams.push_back(as_int(l, "eigenvalue"));
      const bool m_minus = sc->minus.contains(static_cast<double>(m));
      bool minus_higher = !lams.empty();
      for (i64 l : lams)
        for (i64 mu : mus)
          if (nu2(mu) <= nu2(l)) minus_higher = false;
      std::optional<int> common;
      bool all_equal = true;
      for (i64 val : lams) {
        if (!common) common = nu2(val);
        else if (*common != nu2(val)) all_equal = false;
      }
      for (i64 val : mus) {
        if (!common) common = nu2(val);
        else if (*common != nu2(val)) all_equal = false;
      }
      if (minus_higher) {
        rep.rule = "odd-excess rule";
        bool ok = !m_minus && ctx.connected;
        for (i64 l : lams)
          if (!(nu2(l) == nu2(m) && nu2(m) == nu2(n))) ok = false;
        rep.induced = ok;
        rep.detail = "nu2(lambda) = nu2(m) = nu2(n) for every nonzero lambda in sigma+, X connected, m not in sigma-";
      } else if (all_equal && common) {
        rep.rule = "equal-valuation rule";
        const int a = *common;
        rep.alpha = a;
        const i64 scale = i64{1} << a;
        for (i64 l : lams) rep.p.push_back((l / scale + 1) / 2);
        for (i64 mu : mus) rep.q.push_back((mu / scale + 1) / 2);
        bool ok = ctx.connected && !m_minus && nu2(m) == a && nu2(n) == a;
        if (ok) {
          rep.y = (m / scale + 1) / 2;
          rep.z = (n / scale - 1) / 2;
          const i64 yv = *rep.y, zv = *rep.z;
          const int e = nu2(rep.q[0] + zv);
          for (i64 qs : rep.q)
            if (nu2(qs + zv) != e) ok = false;
          for (i64 pr : rep.p)
            if (nu2i(pr + zv) <= e) ok = false;
          if (nu2i(yv + zv) <= e) ok = false;

          // printed case labels, reported only
          auto v2 = [](i64 t) { return nu2_or_inf(t); };
          bool q_eq = true, p_eq = true;
          for (i64 qs : rep.q) q_eq = q_eq && v2(qs) == v2(rep.q[0]);
          for (i64 pr : rep.p) p_eq = p_eq && v2(pr) == v2(rep.p[0]);
          bool case1 = q_eq, case2 = p_eq, case3 = true;
          for (i64 pr : rep.p)
            for (i64 qs : rep.q) {
              case1 = case1 && v2(pr) > v2(qs) && v2(yv) >= v2(zv) && v2(zv) >= v2(qs) + 1;
              case2 = case2 && v2(pr) == v2(yv) && v2(yv) == v2(zv) && v2(zv) < v2(qs);
              case3 = case3 && v2(pr) == v2(qs) && v2(qs) == v2(yv) && v2(yv) == v2(zv);
            }
          if (case3 && zv != 0) {
            const i64 sz = i64{1} << v2(zv);
            const int e3 = v2((rep.q[0] + zv) / sz);
            for (i64 qs : rep.q) case3 = case3 && v2((qs + zv) / sz) == e3;
            for (i64 pr : rep.p) case3 = case3 && v2((pr + zv) / sz) > e3;
            case3 = case3 && v2((yv + zv) / sz) > e3;
          } else {
            case3 = false;
          }
          if (case1) rep.stated_case = "1";
          else if (case2) rep.stated_case = "2";
          else if (case3) rep.stated_case = "3";
        }
        rep.induced = ok;
        rep.detail = "nu2(p_r + z) > nu2(q_s + z) = nu2(q_t + z) and nu2(y + z) > nu2(q_s + z)";
      } else {
        rep.rule = "general join criterion";
        rep.induced = join_verdict;
        rep.detail = "mixed 2-adic valuations; verdict from the join criterion";
      }
    }
  } else {
    rep.rule = "adjacency induced rule";
    auto Dint = reconstruct_integer(ctx.p.D, 1e-7);
    if (Dint && is_perfect_square(*Dint)) rep.s = as_int(ctx.p.lambda_plus - ctx.p.k, "s");
    if (empty_pair) {
      bool ok = false;
      if (rep.s) {
        const i64 k = as_int(ctx.p.k, "k");
        ok = nu2_or_inf(as_int(ctx.p.lambda_plus, "l+") - k) == nu2_or_inf(as_int(ctx.p.lambda_minus, "l-") - k);
      } else {
        ok = std::fabs(ctx.p.k - ctx.p.ell) < 1e-9;
      }
      rep.induced = ok;
      rep.detail = "D a perfect square and nu2(lambda+ - k) = nu2(lambda- - k), or k = ell";
    } else {
      auto part = ctx.partition(u, v);
      bool ok = ctx.connected && part && rep.s.has_value() && !sc->minus.contains(ctx.p.lambda_minus);
      if (ok) ok = pst_from_partition(*part, true).pst;
      rep.induced = ok;
      rep.detail = "lambda- not in sigma-, D a perfect square, 2-adic condition with lambda+ and lambda- in sigma+";
    }
  }
  if (rep.induced != join_verdict) {
    std::ostringstream os;
    os << "induced rule (" << rep.rule << ") says " << (rep.induced ? "PST" : "no PST")
       << " but the join criterion says " << (join_verdict ? "PST" : "no PST");
    throw InconsistencyError(os.str());
  }
  return rep;
}

// ---------------------------------------------------------------- self joins

SelfJoinReport self_join_analysis(const WeightedGraph& x, int r, std::size_t u, std::size_t v, MatrixKind kind,
                                  CheckMode mode) {
  if (r < 2) throw PreconditionError("self_join_analysis needs r >= 2");
  const std::size_t mz = x.order();
  if (u >= mz || v >= mz || u == v) throw PreconditionError("u and v must be distinct vertices of X");
  if (!x.is_simple()) throw PreconditionError("self joins are analysed for loopless X");
  if (!x.has_integer_weights()) throw PreconditionError("self join PST needs an integer characteristic polynomial");
  const i64 m = static_cast<i64>(mz);

  JoinParams p;
  p.kind = kind;
  p.m = mz;
  p.n = mz * static_cast<std::size_t>(r - 1);
  if (kind == MatrixKind::Adjacency) {
    auto k = x.regular_degree();
    if (!k) throw PreconditionError("adjacency self joins need a weighted-regular X");
    p.k = *k;
    p.ell = *k + static_cast<double>((r - 2) * m);
    p.D = static_cast<double>(r) * r * static_cast<double>(m) * static_cast<double>(m);
    p.root_D = static_cast<double>(r) * static_cast<double>(m);
    p.lambda_plus = p.k + static_cast<double>((r - 1) * m);
    p.lambda_minus = p.k - static_cast<double>(m);
  }
  JoinContext ctx(x, p);
  SelfJoinReport rep;
  rep.partition = ctx.partition(u, v);
  if (rep.partition) {
    rep.partition->u = u;
    rep.partition->v = v;
  }

  PSTCertificate& c = rep.certificate;
  c.u = u;
  c.v = v;
  c.source = "self join theorem";
  c.partition = rep.partition;
  bool verdict = false;
  if (x.is_empty_pair(0.0)) {
    rep.case_id = "1";
    verdict = r % 2 == 0;
    c.reason = verdict ? "X = O_2 with r even" : "X = O_2 needs r even";
  } else {
    auto sc = strong_cospectral(ctx.dx, u, v);
    const double special = kind == MatrixKind::Laplacian ? static_cast<double>(m) : p.k - static_cast<double>(m);
    auto fx = classify_values(eigenvalue_support(ctx.dx, u).values());
    if (!x.same_component(u, v)) {
      c.reason = "u and v lie in different components";
    } else if (!sc) {
      c.reason = "u and v are not strongly cospectral in X";
    } else if (sc->minus.contains(special)) {
      c.reason = kind == MatrixKind::Laplacian ? "m lies in sigma-" : "k - m lies in sigma-";
    } else if (!fx || !fx->integral()) {
      c.reason = "sigma_u(X) is not integral";
    } else {
      std::vector<i64> lams, mus = as_ints(sc->minus, "eigenvalue");
      const bool lap = kind == MatrixKind::Laplacian;
      const i64 k = lap ? 0 : as_int(p.k, "k");
      for (double l : sc->plus) {
        if (lap && near(l, 0.0)) continue;
        if (!lap && near(l, p.k)) continue;
        lams.push_back(as_int(l, "eigenvalue"));
      }
      if (lap && std::find(lams.begin(), lams.end(), m) == lams.end()) lams.push_back(m);
      // Laplacian case works with lambda, mu; adjacency case with k - lambda, k - mu and m
      auto lam_val = [&](i64 l) { return lap ? l : k - l; };
      auto mu_val = [&](i64 mu) { return lap ? mu : k - mu; };
      bool A = true, B = r % 2 == 0, C = r % 2 == 0;
      const int e0 = nu2(mu_val(mus[0]));
      for (i64 mu : mus) A = A && nu2(mu_val(mu)) == e0;
      if (lap) {
        for (i64 l : lams) A = A && nu2(l) > e0;
      } else {
        A = A && nu2(m) > e0;
        for (i64 l : lams) A = A && nu2i(lam_val(l)) > e0;
      }
      for (i64 mu : mus) {
        if (lap) {
          for (i64 l : lams) B = B && nu2(mu) > nu2(l);
        } else {
          B = B && nu2(mu_val(mu)) > nu2(m);
          for (i64 l : lams) B = B && nu2i(lam_val(l)) == nu2(m);
        }
      }
      if (lap) {
        for (i64 l : lams) B = B && nu2(l) == nu2(lams[0]);
      }
      const int am = nu2(m);
      for (i64 l : lams) C = C && nu2i(lam_val(l)) == (lap ? nu2(mus[0]) : am);
      for (i64 mu : mus) C = C && nu2(mu_val(mu)) == (lap ? nu2(mus[0]) : am);
      if (C) {
        const i64 sc_ = i64{1} << am;
        if (lap) {
          const i64 shift = (r - 1) * m;
          C = C && nu2(mus[0]) == am;
          if (C) {
            const int e = nu2((mus[0] + shift) / sc_);
            for (i64 mu : mus) C = C && nu2((mu + shift) / sc_) == e;
            for (i64 l : lams) C = C && nu2((l + shift) / sc_) > e;
          }
        } else {
          const int e = nu2i((k - m - mus[0]) / sc_);
          for (i64 mu : mus) C = C && nu2i((k - m - mu) / sc_) == e;
          for (i64 l : lams) C = C && nu2i((k - m - l) / sc_) > e;
          C = C && nu2(r) > e;
        }
      }
      if (x.is_connected()) {
        rep.case_id = A ? "2ciA" : B ? "2ciB" : C ? "2ciC" : "2ci";
        verdict = A || B || C;
      } else {
        rep.case_id = "2cii";
        verdict = A;
      }
      c.reason = verdict ? "2-adic case " + rep.case_id + " holds" : "no 2-adic case holds";
    }
  }
  if (!rep.partition && verdict) throw InconsistencyError("self join theorem grants PST without strong cospectrality");
  if (rep.partition) {
    PSTCertificate arith = pst_from_partition(*rep.partition, true);
    c.nu2_ledger = arith.nu2_ledger;
    if (arith.pst != verdict) {
      std::ostringstream os;
      os << "self join theorem (" << c.reason << ") and the arithmetic criterion (" << arith.reason << ") disagree";
      throw InconsistencyError(os.str());
    }
    if (verdict) {
      c.pst = true;
      c.g = arith.g;
      c.tau = arith.tau;
      c.tau_symbolic = arith.tau_symbolic;
      c.delta = arith.delta;
    }
  }
  if (mode == CheckMode::Verify) {
    WeightedGraph g = self_join(x, r);
    auto dg = decompose(g, kind);
    check_partitions("self join strong cospectrality", rep.partition, strong_cospectral(dg, u, v));
    check_certificates("self join PST", c, pst_certificate(dg, u, v));
  }
  return rep;
}

}  // namespace qwjoin
