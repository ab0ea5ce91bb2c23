#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwjoin/exact_arith.hpp"
#include "qwjoin/graph.hpp"
#include "qwjoin/spectral.hpp"
#include "qwjoin/walk.hpp"

namespace qwjoin {

/// pi_multiple * pi / (denominator * sqrt(sqrt_of))
struct AngleSymbol {
  i64 pi_multiple = 0;
  i64 denominator = 1;
  i64 sqrt_of = 1;

  double value() const;
  std::string str() const;
  static AngleSymbol make(i64 pi_multiple, i64 denominator, i64 sqrt_of = 1);
};

// ---------------------------------------------------------------- periodicity

enum class SupportType { Integer, Quadratic, Numeric, Trivial };
std::string to_string(SupportType t);

struct RatioEntry {
  double lambda = 0.0;
  Rational ratio;  // (lambda_1 - lambda) / (lambda_1 - lambda_2)
};

struct PeriodCertificate {
  std::size_t u = 0;
  bool periodic = false;
  bool trivial = false;  // one-element support: periodic at every t
  SupportType type = SupportType::Numeric;
  std::optional<double> rho;
  std::optional<AngleSymbol> rho_symbolic;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::vector<RatioEntry> ratios;
  i64 q = 1;
  double numeric_check = 0.0;  // |U(rho)_uu| when a decomposition was supplied
};

/// Ratio condition on the support; exact when the values classify, numeric otherwise.
bool is_periodic(const EigenvalueSet& support);

/// rho = 2 pi q / (lambda_1 - lambda_2) with q the lcm of the ratio denominators. Throws DomainError when
/// the support is not periodic.
PeriodCertificate minimum_period(const EigenvalueSet& support);

/// minimum_period on sigma_u plus the numeric confirmation and the minimality grid.
PeriodCertificate vertex_period(const SpectralDecomposition& d, std::size_t u);

/// Laplacian: integrality of the spectrum. Adjacency: every vertex periodic.
bool graph_periodic(const WeightedGraph& g, MatrixKind kind);

// ---------------------------------------------------------------- perfect state transfer

struct Nu2Entry {
  Rational difference;  // (lambda - eta) / sqrt(delta)
  int nu2 = 0;
  bool plus_plus = false;  // both in sigma+; otherwise sigma+ against sigma-
};

struct PSTCertificate {
  std::size_t u = 0;
  std::size_t v = 0;
  bool pst = false;
  std::optional<double> tau;
  std::optional<AngleSymbol> tau_symbolic;
  i64 delta = 1;
  std::optional<Rational> g;
  std::vector<Nu2Entry> nu2_ledger;
  std::optional<SupportPartition> partition;
  std::optional<double> numeric_check;  // |U(tau)_uv|
  std::string reason;
  std::string source;
};

/// Evaluates the arithmetic PST criterion on a sigma+/sigma- partition without any matrix.
/// `integral_polynomial` states whether the characteristic polynomial is known to have integer
/// coefficients; quadratic supports need it.
PSTCertificate pst_from_partition(const SupportPartition& p, bool integral_polynomial);

/// Generic certificate: strong cospectrality, support arithmetic, 2-adic pattern, numeric confirmation.
PSTCertificate pst_certificate(const SpectralDecomposition& d, std::size_t u, std::size_t v);

/// Generic PST search over every pair of a graph.
std::vector<PSTCertificate> pst_pairs(const SpectralDecomposition& d);

// ---------------------------------------------------------------- join closed forms

enum class CheckMode { Verify, ClosedFormOnly };

/// Support of u in X v Y from sigma_u(M(X)); u indexes X v Y (u >= |X| is handled by symmetry).
EigenvalueSet join_support(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, MatrixKind kind,
                           CheckMode mode = CheckMode::Verify);

/// sigma+/sigma- of u, v in X v Y; u, v index X v Y.
std::optional<SupportPartition> join_strong_cospectral(const WeightedGraph& x, const WeightedGraph& y,
                                                       std::size_t u, std::size_t v, MatrixKind kind,
                                                       CheckMode mode = CheckMode::Verify);

/// Periodicity of u (in X) in X v Y from the spectrum of X.
bool join_periodic(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, MatrixKind kind,
                   CheckMode mode = CheckMode::Verify);

struct JoinPeriodRatio {
  std::string case_id;  // "1a" .. "2d"
  Rational c;           // rho_join = c * rho_X; zero when c is irrational
  double c_value = 0.0;
  double rho_x = 0.0;
  double rho_join = 0.0;
  std::vector<std::pair<std::string, Rational>> ledger;  // named ratios and denominators
};

JoinPeriodRatio join_period_ratio(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, MatrixKind kind,
                                  CheckMode mode = CheckMode::Verify);

/// Closed-form PST verdict for u, v in X inside X v Y.
PSTCertificate join_pst(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, std::size_t v,
                        MatrixKind kind, CheckMode mode = CheckMode::Verify);

struct PreservationReport {
  bool preserved = false;
  std::string rule;
  std::optional<double> tau_x;
  std::optional<double> tau_join;
  std::optional<Rational> ratio;  // tau_X / tau_join
  std::optional<int> nu2_h;
  std::optional<int> alpha_needed;  // smallest alpha with m, n = 0 mod 2^alpha (Laplacian rule)
  std::optional<i64> s;             // lambda+ = k + s (adjacency rule)
  std::string detail;
  PSTCertificate join_certificate;
};

/// PST in X between u, v kept in X v Y. Throws DomainError when X has no PST between u and v.
PreservationReport pst_preserved(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, std::size_t v,
                                 MatrixKind kind, CheckMode mode = CheckMode::Verify);

/// Laplacian PST in (X u Z) v Y between u, v in X.
PreservationReport pst_disconnected_augmentation(const WeightedGraph& x, const WeightedGraph& z,
                                                 const WeightedGraph& y, std::size_t u, std::size_t v,
                                                 CheckMode mode = CheckMode::Verify);

struct InducedReport {
  bool induced = false;
  std::string rule;
  std::optional<int> alpha;  // common 2-adic valuation of the nonzero Laplacian support
  std::optional<i64> y;      // m = 2^alpha (2y - 1)
  std::optional<i64> z;      // n = 2^alpha (2z + 1)
  std::vector<i64> p;        // lambda_r = 2^alpha (2 p_r - 1), lambda_r in sigma+
  std::vector<i64> q;        // mu_s = 2^alpha (2 q_s - 1), mu_s in sigma-
  std::optional<std::string> stated_case;  // which printed case label matches, if any
  std::optional<i64> s;      // adjacency: lambda+ = k + s
  std::string detail;
  PSTCertificate join_certificate;
};

/// PST in X v Y between u, v that are strongly cospectral but without PST in X.
InducedReport pst_induced(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, std::size_t v,
                          MatrixKind kind, CheckMode mode = CheckMode::Verify);

/// O_2 v Y (Laplacian) or O_2(k) v Y (adjacency) between the two apexes 0, 1.
PSTCertificate double_cone_pst(const WeightedGraph& y, MatrixKind kind, double loop_k = 0.0,
                               CheckMode mode = CheckMode::Verify);

struct SelfJoinReport {
  std::string case_id;
  std::optional<SupportPartition> partition;
  PSTCertificate certificate;
};

/// Strong cospectrality and PST of u, v (in the first copy) in X v X v ... v X (r copies).
SelfJoinReport self_join_analysis(const WeightedGraph& x, int r, std::size_t u, std::size_t v, MatrixKind kind,
                                  CheckMode mode = CheckMode::Verify);

// ---------------------------------------------------------------- iterated joins (Laplacian)

/// Prefix sums and alternating tail sums of the part sizes, 1-based (index 0 unused).
struct IteratedJoinParams {
  std::vector<i64> m;      // m[1..p]
  std::vector<i64> alpha;  // alpha[h] = m_1 + ... + m_h
  std::vector<i64> beta;   // beta[h] = m_{h+2} + m_{h+4} + ... up to the last part; beta[p] = beta[p-1] = 0 as needed
  bool even_shape = true;
  std::size_t parts = 0;

  static IteratedJoinParams from(const IteratedJoinSpec& spec);
  i64 beta_at(std::size_t h) const;
};

/// Laplacian support of vertex `local` of part `part` (0-based) from the spectrum of that part alone.
EigenvalueSet iterated_join_support(const IteratedJoinSpec& spec, std::size_t part, std::size_t local,
                                    CheckMode mode = CheckMode::Verify);

std::optional<SupportPartition> iterated_join_strong_cospectral(const IteratedJoinSpec& spec, std::size_t part,
                                                                std::size_t u_local, std::size_t v_local,
                                                                CheckMode mode = CheckMode::Verify);

struct IteratedReport {
  PSTCertificate certificate;   // vertex indices of the built graph
  bool threshold = false;
  std::optional<bool> congruence_rule;       // m_1 = 2, m_2 = 2 mod 4, m_j = 0 mod 4 (j >= 3)
  std::optional<bool> printed_variant_rule;  // m_1 = 2, m_j = 2 mod 4 (j >= 2)
  bool variants_disagree = false;
};

IteratedReport iterated_join_analysis(const IteratedJoinSpec& spec, std::size_t part, std::size_t u_local,
                                      std::size_t v_local, CheckMode mode = CheckMode::Verify);

/// Threshold verdict on the canonical sizes: m_1 = 2, m_2 = 2 mod 4, m_j = 0 mod 4 for j >= 3.
bool threshold_congruence_rule(const std::vector<std::size_t>& sizes);

}  // namespace qwjoin
