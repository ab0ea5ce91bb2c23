#include "qwjoin/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qwjoin/errors.hpp"

namespace qwjoin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEnvelopeSlack = 1e-9;

BoundSample sample_at(const SpectralDecomposition& dj, const SpectralDecomposition& dx, const JoinParams& p,
                      std::size_t u, std::size_t v, double t) {
  BoundSample s;
  s.t = t;
  const cplx uj = transition_entry(dj, u, v, t);
  const cplx ux = transition_entry(dx, u, v, t);
  s.mag_join = std::abs(uj);
  s.mag_base = std::abs(ux);
  s.F = s.mag_join - s.mag_base;
  const cplx phase = p.kind == MatrixKind::Laplacian ? std::polar(1.0, t * static_cast<double>(p.n)) : cplx(1.0);
  s.pre_triangle = std::abs(uj - phase * ux);
  return s;
}

}  // namespace

EqualityDiagnosis equality_condition(const WeightedGraph& x, const WeightedGraph& y, MatrixKind kind) {
  EqualityDiagnosis d;
  const JoinParams p = join_params(x, y, kind);
  std::ostringstream os;
  if (kind == MatrixKind::Laplacian) {
    const i64 m = static_cast<i64>(p.m), n = static_cast<i64>(p.n);
    d.possible = nu2(m) == nu2(n);
    d.g = gcd2(m, n);
    os << "nu2(m) = " << nu2(m) << ", nu2(n) = " << nu2(n);
  } else {
    auto k = reconstruct_integer(p.k, 1e-9), l = reconstruct_integer(p.ell, 1e-9), D = reconstruct_integer(p.D, 1e-9);
    if (!k || !l || !D || !is_perfect_square(*D)) {
      d.decided = false;
      d.times = "undecided (irrational spectrum)";
      d.detail = "k, ell integral and D a perfect square are needed";
      return d;
    }
    const i64 r = isqrt(*D);
    const i64 a = (*l - *k + r) / 2;  // lambda+ - k
    const i64 b = (*l - *k - r) / 2;  // lambda- - k
    d.possible = nu2_or_inf(a) == nu2_or_inf(b);
    d.g = gcd2(a, b);
    os << "nu2(lambda+ - k) = " << nu2_or_inf(a) << ", nu2(lambda- - k) = " << nu2_or_inf(b);
  }
  d.detail = os.str();
  std::ostringstream ts;
  if (d.possible) ts << "j pi / " << *d.g << ", j odd";
  else ts << "none";
  d.times = ts.str();
  return d;
}

BoundReport bound_sweep(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, std::size_t v,
                        MatrixKind kind, double t_max, std::size_t samples) {
  if (samples < 2) throw PreconditionError("bound_sweep needs at least two samples");
  if (!(t_max > 0.0)) throw PreconditionError("bound_sweep needs t_max > 0");
  if (u >= x.order() || v >= x.order()) throw PreconditionError("u and v must be vertices of X");
  const JoinParams p = join_params(x, y, kind);
  BoundReport r;
  r.u = u;
  r.v = v;
  r.kind = kind;
  r.envelope = 2.0 / static_cast<double>(p.m);
  r.equality = equality_condition(x, y, kind);

  std::vector<double> times;
  times.reserve(samples + 64);
  for (std::size_t j = 0; j < samples; ++j)
    times.push_back(t_max * static_cast<double>(j) / static_cast<double>(samples - 1));
  if (auto g = lattice_generator(p); g && *g > 0)
    for (i64 j = 1; 2.0 * kPi * static_cast<double>(j) / static_cast<double>(*g) <= t_max; ++j)
      times.push_back(2.0 * kPi * static_cast<double>(j) / static_cast<double>(*g));
  if (r.equality.possible && r.equality.g)
    for (i64 j = 1; kPi * static_cast<double>(j) / static_cast<double>(*r.equality.g) <= t_max; j += 2)
      times.push_back(kPi * static_cast<double>(j) / static_cast<double>(*r.equality.g));
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  const SpectralDecomposition dj = decompose(join(x, y), kind);
  const SpectralDecomposition dx = decompose(x, kind);
  double best = -1.0;
  for (double t : times) {
    BoundSample s = sample_at(dj, dx, p, u, v, t);
    if (std::fabs(s.F) > r.envelope + kEnvelopeSlack || s.pre_triangle > r.envelope + kEnvelopeSlack) {
      std::ostringstream os;
      os << "bound violated at t = " << t << ": |F| = " << std::fabs(s.F) << ", pre-triangle "
         << s.pre_triangle << ", envelope " << r.envelope;
      throw InconsistencyError(os.str());
    }
    if (in_T(p, t) && std::fabs(s.F) > 1e-9) {
      std::ostringstream os;
      os << "F(" << t << ") = " << s.F << " on the zero lattice T";
      throw InconsistencyError(os.str());
    }
    if (std::fabs(s.F) > best) {
      best = std::fabs(s.F);
      r.witness_t = t;
    }
    r.max_pre_triangle = std::max(r.max_pre_triangle, s.pre_triangle);
    r.samples.push_back(s);
  }
  r.max_abs_F = best;
  r.tight = r.max_abs_F >= r.envelope - 1e-6;
  if (!r.tight) r.witness_t.reset();
  return r;
}

SweepGrid default_grid(const WeightedGraph& x, const WeightedGraph& y, MatrixKind kind) {
  SweepGrid g;
  auto d = decompose(join(x, y), kind);
  auto c = d.classified();
  bool integral = c.has_value();
  if (c)
    for (const auto& e : *c) integral = integral && e.is_integer();
  g.t_max = integral ? 4.0 * kPi : 20.0;
  g.samples = tol::sweep_samples;
  return g;
}

std::vector<MimicryEntry> mimicry_sweep(const std::function<WeightedGraph(std::size_t)>& family,
                                        const std::vector<std::size_t>& sizes, const WeightedGraph& y,
                                        std::size_t u, std::size_t v, MatrixKind kind,
                                        const std::vector<double>& times) {
  std::vector<MimicryEntry> out;
  for (std::size_t size : sizes) {
    WeightedGraph x = family(size);
    if (u >= x.order() || v >= x.order()) throw PreconditionError("family member lacks the designated pair");
    const JoinParams p = join_params(x, y, kind);
    const SpectralDecomposition dj = decompose(join(x, y), kind);
    const SpectralDecomposition dx = decompose(x, kind);
    MimicryEntry e;
    e.m = x.order();
    e.envelope = 2.0 / static_cast<double>(e.m);
    for (double t : times) {
      const BoundSample s = sample_at(dj, dx, p, u, v, t);
      e.max_abs_F = std::max(e.max_abs_F, std::fabs(s.F));
    }
    if (e.max_abs_F > e.envelope + kEnvelopeSlack) throw InconsistencyError("mimicry sweep left the 2/m envelope");
    out.push_back(e);
  }
  return out;
}

}  // namespace qwjoin
