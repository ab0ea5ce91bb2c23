#include <cmath>
#include <sstream>

#include "detail.hpp"
#include "qwjoin/errors.hpp"
#include "qwjoin/state_transfer.hpp"

namespace qwjoin {

namespace {

bool is_zero(double x) { return std::fabs(x) <= tol::set_equal; }

// 1-based step h >= 2 joins part h onto the graph built so far.
bool join_step(std::size_t p, std::size_t h) { return h >= 2 && (p - h) % 2 == 0; }

bool left_disconnected(const IteratedJoinSpec& spec, std::size_t h) {
  // G_{h-1} before join step h
  return h - 1 >= 2 || !spec.parts[0].is_connected();
}

void check_spec(const IteratedJoinSpec& spec, std::size_t part) {
  try {
    spec.validate();
  } catch (const PreconditionError& e) {
    throw DomainError(std::string("not an iterated join: ") + e.what());
  }
  if (part >= spec.size()) throw PreconditionError("part index out of range");
  for (const auto& g : spec.parts)
    if (!g.is_simple()) throw PreconditionError("iterated join parts must be loopless");
}

}  // namespace

IteratedJoinParams IteratedJoinParams::from(const IteratedJoinSpec& spec) {
  IteratedJoinParams out;
  out.parts = spec.size();
  out.even_shape = spec.even_shape();
  const std::size_t p = out.parts;
  out.m.assign(p + 1, 0);
  out.alpha.assign(p + 1, 0);
  out.beta.assign(p + 1, 0);
  for (std::size_t h = 1; h <= p; ++h) {
    out.m[h] = static_cast<i64>(spec.parts[h - 1].order());
    out.alpha[h] = out.alpha[h - 1] + out.m[h];
  }
  for (std::size_t h = 0; h <= p; ++h)
    for (std::size_t l = h + 2; l <= p; l += 2) out.beta[h] += out.m[l];
  return out;
}

i64 IteratedJoinParams::beta_at(std::size_t h) const { return h < beta.size() ? beta[h] : 0; }

EigenvalueSet iterated_join_support(const IteratedJoinSpec& spec, std::size_t part, std::size_t local,
                                    CheckMode mode) {
  check_spec(spec, part);
  const auto& xj = spec.parts[part];
  if (local >= xj.order()) throw PreconditionError("vertex out of range for the part");
  const auto P = IteratedJoinParams::from(spec);
  const std::size_t p = P.parts, j = part + 1;

  EigenvalueSet sx = eigenvalue_support(decompose(xj, MatrixKind::Laplacian), local);
  EigenvalueSet s;
  if (join_step(p, j)) {
    const double a = static_cast<double>(P.alpha[j - 1]);
    for (double l : sx)
      if (!is_zero(l)) s.insert(l + a);
    s.insert(0.0);
    s.insert(static_cast<double>(P.alpha[j]));
    if (!xj.is_connected()) s.insert(a);
  } else {
    s = sx;
  }
  for (std::size_t h = j + 1; h <= p; ++h) {
    if (!join_step(p, h)) continue;
    const double n = static_cast<double>(P.m[h]);
    EigenvalueSet next;
    for (double l : s)
      if (!is_zero(l)) next.insert(l + n);
    next.insert(0.0);
    next.insert(static_cast<double>(P.alpha[h]));
    if (left_disconnected(spec, h)) next.insert(n);
    s = std::move(next);
  }
  if (mode == CheckMode::Verify) {
    EigenvalueSet brute = eigenvalue_support(decompose(spec.build(), MatrixKind::Laplacian), spec.offset(part) + local);
    if (!s.approx_equal(brute)) {
      std::ostringstream os;
      os << "iterated join support: closed form " << s.str() << " but spectral decomposition gives " << brute.str();
      throw InconsistencyError(os.str());
    }
  }
  return s;
}

std::optional<SupportPartition> iterated_join_strong_cospectral(const IteratedJoinSpec& spec, std::size_t part,
                                                                std::size_t u_local, std::size_t v_local,
                                                                CheckMode mode) {
  check_spec(spec, part);
  const auto& xj = spec.parts[part];
  if (u_local >= xj.order() || v_local >= xj.order() || u_local == v_local)
    throw PreconditionError("u and v must be distinct vertices of the part");
  const auto P = IteratedJoinParams::from(spec);
  const std::size_t p = P.parts, j = part + 1;
  const std::size_t gu = spec.offset(part) + u_local, gv = spec.offset(part) + v_local;

  auto compute = [&]() -> std::optional<SupportPartition> {
    SupportPartition cur;
    cur.u = gu;
    cur.v = gv;
    bool empty_pair = false;  // the pair is the whole graph O_2 so far
    const bool xj_empty_pair = xj.is_empty_pair(0.0);
    if (join_step(p, j)) {
      const double a = static_cast<double>(P.alpha[j - 1]);
      if (xj_empty_pair) {
        cur.plus = EigenvalueSet{0.0, static_cast<double>(P.alpha[j])};
        cur.minus = EigenvalueSet{a};
      } else {
        auto sc = strong_cospectral(decompose(xj, MatrixKind::Laplacian), u_local, v_local);
        if (!sc || sc->minus.contains(static_cast<double>(P.m[j]))) return std::nullopt;
        for (double l : sc->plus)
          if (!is_zero(l)) cur.plus.insert(l + a);
        cur.plus.insert(0.0);
        cur.plus.insert(static_cast<double>(P.alpha[j]));
        if (!xj.is_connected()) cur.plus.insert(a);
        for (double mu : sc->minus) cur.minus.insert(mu + a);
      }
    } else if (j == 1 && xj_empty_pair) {
      empty_pair = true;
    } else {
      auto sc = strong_cospectral(decompose(xj, MatrixKind::Laplacian), u_local, v_local);
      if (!sc) return std::nullopt;
      cur.plus = sc->plus;
      cur.minus = sc->minus;
    }
    for (std::size_t h = j + 1; h <= p; ++h) {
      if (!join_step(p, h)) {
        if (empty_pair) return std::nullopt;
        continue;
      }
      const double n = static_cast<double>(P.m[h]);
      if (empty_pair) {
        cur.plus = EigenvalueSet{0.0, n + 2.0};
        cur.minus = EigenvalueSet{n};
        empty_pair = false;
        continue;
      }
      if (cur.minus.contains(static_cast<double>(P.alpha[h - 1]))) return std::nullopt;
      SupportPartition next;
      next.u = gu;
      next.v = gv;
      for (double l : cur.plus)
        if (!is_zero(l)) next.plus.insert(l + n);
      next.plus.insert(0.0);
      next.plus.insert(static_cast<double>(P.alpha[h]));
      if (left_disconnected(spec, h)) next.plus.insert(n);
      for (double mu : cur.minus) next.minus.insert(mu + n);
      cur = std::move(next);
    }
    if (empty_pair) return std::nullopt;
    return cur;
  };
  auto closed = compute();
  if (mode == CheckMode::Verify)
    detail::check_partitions("iterated join strong cospectrality", closed,
                             strong_cospectral(decompose(spec.build(), MatrixKind::Laplacian), gu, gv));
  return closed;
}

bool threshold_congruence_rule(const std::vector<std::size_t>& raw) {
  const auto sizes = canonical_threshold_sizes(raw);
  if (sizes.empty() || sizes[0] != 2) return false;
  if (sizes.size() == 1) return true;  // K_2
  if (sizes[1] % 4 != 2) return false;
  for (std::size_t j = 2; j < sizes.size(); ++j)
    if (sizes[j] % 4 != 0) return false;
  return true;
}

namespace {

bool printed_variant(const std::vector<std::size_t>& raw) {
  const auto sizes = canonical_threshold_sizes(raw);
  if (sizes.empty() || sizes[0] != 2) return false;
  for (std::size_t j = 1; j < sizes.size(); ++j)
    if (sizes[j] % 4 != 2) return false;
  return true;
}

}  // namespace

IteratedReport iterated_join_analysis(const IteratedJoinSpec& spec, std::size_t part, std::size_t u_local,
                                      std::size_t v_local, CheckMode mode) {
  check_spec(spec, part);
  for (const auto& g : spec.parts)
    if (!g.has_integer_weights()) throw PreconditionError("iterated join parts need integer weights");
  IteratedReport rep;
  auto partition = iterated_join_strong_cospectral(spec, part, u_local, v_local, CheckMode::ClosedFormOnly);
  const std::size_t gu = spec.offset(part) + u_local, gv = spec.offset(part) + v_local;
  PSTCertificate& c = rep.certificate;
  if (partition) {
    c = pst_from_partition(*partition, true);
  } else {
    c.reason = "u and v are not strongly cospectral in the iterated join";
  }
  c.u = gu;
  c.v = gv;
  c.partition = partition;
  c.source = "iterated join criterion";

  rep.threshold = is_threshold_spec(spec);
  if (rep.threshold && part == 0) {
    const auto sizes = spec.part_sizes();
    rep.congruence_rule = threshold_congruence_rule(sizes);
    rep.printed_variant_rule = printed_variant(sizes);
    rep.variants_disagree = *rep.congruence_rule != *rep.printed_variant_rule;
  }
  if (mode == CheckMode::Verify) {
    auto dg = decompose(spec.build(), MatrixKind::Laplacian);
    detail::check_partitions("iterated join strong cospectrality", partition, strong_cospectral(dg, gu, gv));
    detail::check_certificates("iterated join PST", c, pst_certificate(dg, gu, gv));
  }
  return rep;
}

}  // namespace qwjoin
