#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qwjoin/graph.hpp"
#include "qwjoin/spectral.hpp"
#include "qwjoin/walk.hpp"

namespace qwjoin {

struct EqualityDiagnosis {
  bool decided = true;
  bool possible = false;
  std::optional<i64> g;  // equality times j pi / g, j odd
  std::string times;
  std::string detail;
};

/// Laplacian: nu2(m) = nu2(n), g = gcd(m, n). Adjacency: nu2(lambda+ - k) = nu2(lambda- - k), h = gcd of the two.
EqualityDiagnosis equality_condition(const WeightedGraph& x, const WeightedGraph& y, MatrixKind kind);

struct BoundSample {
  double t = 0.0;
  double mag_join = 0.0;
  double mag_base = 0.0;
  double F = 0.0;
  double pre_triangle = 0.0;  // |U(X v Y)_uv - e^{itn} U(X)_uv| (L) or |U(X v Y)_uv - U(X)_uv| (A)
};

struct BoundReport {
  std::size_t u = 0;
  std::size_t v = 0;
  MatrixKind kind = MatrixKind::Laplacian;
  std::vector<BoundSample> samples;
  double max_abs_F = 0.0;
  double max_pre_triangle = 0.0;
  double envelope = 0.0;  // 2/m
  bool tight = false;
  std::optional<double> witness_t;
  EqualityDiagnosis equality;
};

/// Uniform grid on [0, t_max] plus the T_M lattice and the odd-multiple equality times. Throws
/// InconsistencyError when a sample leaves the 2/m envelope or F is nonzero on T_M.
BoundReport bound_sweep(const WeightedGraph& x, const WeightedGraph& y, std::size_t u, std::size_t v,
                        MatrixKind kind, double t_max, std::size_t samples);

struct SweepGrid {
  double t_max = 20.0;
  std::size_t samples = 4096;
};

/// 4 pi when X v Y has an integral spectrum, else 20; 4096 samples.
SweepGrid default_grid(const WeightedGraph& x, const WeightedGraph& y, MatrixKind kind);

struct MimicryEntry {
  std::size_t m = 0;
  double max_abs_F = 0.0;
  double envelope = 0.0;
};

/// max |F| over `times` for each member of a growing family.
std::vector<MimicryEntry> mimicry_sweep(const std::function<WeightedGraph(std::size_t)>& family,
                                        const std::vector<std::size_t>& sizes, const WeightedGraph& y,
                                        std::size_t u, std::size_t v, MatrixKind kind,
                                        const std::vector<double>& times);

}  // namespace qwjoin
