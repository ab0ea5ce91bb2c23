#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qwjoin/bounds.hpp"
#include "qwjoin/errors.hpp"

using namespace qwjoin;

namespace {

constexpr double kPi = std::numbers::pi;
const auto L = MatrixKind::Laplacian;
const auto A = MatrixKind::Adjacency;

// C_4 on 0..3 plus two isolated vertices 4, 5
WeightedGraph c4_plus_two() { return disjoint_union(family::cycle(4), family::empty(2)); }

// |U(X v Y, t)_uv| - |U(X, t)_uv| straight from the dense exponential
double F_oracle(const WeightedGraph& x, const WeightedGraph& y, MatrixKind kind, std::size_t u, std::size_t v,
                double t) {
  auto uj = oracle::walk(join(x, y), kind, t);
  auto ux = oracle::walk(x, kind, t);
  return std::abs(uj(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v))) -
         std::abs(ux(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)));
}

}  // namespace

TEST_CASE("equality condition") {
  auto e62 = equality_condition(family::empty(6), family::empty(2), L);
  CHECK(e62.possible);
  REQUIRE(e62.g);
  CHECK(*e62.g == 2);
  CHECK_FALSE(equality_condition(family::empty(4), family::empty(2), L).possible);
  CHECK_FALSE(equality_condition(family::empty(6), family::empty(4), L).possible);

  auto a = equality_condition(disjoint_union(family::complete(2), family::complete(2)), family::empty_with_loops(1, 1.0), A);
  CHECK(a.decided);
  CHECK(a.possible);
  auto und = equality_condition(family::complete(2), family::empty(1), A);  // D = 1 + 8
  CHECK(und.decided);
  auto irr = equality_condition(family::complete(2), family::empty(2), A);  // D = 1 + 16
  CHECK_FALSE(irr.decided);
}

TEST_CASE("tight Laplacian configuration: C4 plus two isolated vertices joined to O2") {
  auto x = c4_plus_two();
  auto y = family::empty(2);
  const double t = kPi / 2;
  CHECK(F_oracle(x, y, L, 0, 0, t) == doctest::Approx(1.0 / 3).epsilon(1e-9));
  CHECK(F_oracle(x, y, L, 0, 2, t) == doctest::Approx(-1.0 / 3).epsilon(1e-9));

  auto r = bound_sweep(x, y, 0, 2, L, 4 * kPi, 1024);
  CHECK(r.envelope == doctest::Approx(1.0 / 3));
  CHECK(r.max_abs_F == doctest::Approx(1.0 / 3).epsilon(1e-6));
  CHECK(r.tight);
  REQUIRE(r.witness_t);
  CHECK(std::abs(F_oracle(x, y, L, 0, 2, *r.witness_t)) >= r.envelope - 1e-6);

  auto ru = bound_sweep(x, y, 0, 0, L, 4 * kPi, 1024);
  CHECK(ru.tight);
}

TEST_CASE("tight adjacency configuration: two copies of K2 joined to a looped vertex") {
  auto x = disjoint_union(family::complete(2), family::complete(2));
  auto y = family::empty_with_loops(1, 1.0);
  const double t = kPi / 2;
  CHECK(F_oracle(x, y, A, 0, 0, t) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(F_oracle(x, y, A, 0, 1, t) == doctest::Approx(-0.5).epsilon(1e-9));
  auto r = bound_sweep(x, y, 0, 1, A, 4 * kPi, 1024);
  CHECK(r.envelope == doctest::Approx(0.5));
  CHECK(r.tight);
  CHECK(r.max_abs_F == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("F vanishes on the lattice T and at t = 0") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 2 + trial % 5, n = 1 + trial % 4;
    auto x = oracle::random_simple(rng, m, 0.5);
    auto y = oracle::random_simple(rng, n, 0.5);
    auto p = join_params(x, y, L);
    auto g = lattice_generator(p);
    REQUIRE(g);
    for (int j = 0; j < 4; ++j) {
      const double t = 2 * kPi * j / static_cast<double>(*g);
      CHECK(in_T(p, t));
      CHECK(std::abs(F_oracle(x, y, L, 0, m - 1, t)) < 1e-9);
    }
  }
}

TEST_CASE("isolated vertex and cross-component pairs off T") {
  auto x = c4_plus_two();
  auto y = family::empty(2);
  auto p = join_params(x, y, L);
  for (double t : {0.3, 0.7, 1.1, 2.9, 5.0}) {
    REQUIRE_FALSE(in_T(p, t));
    CHECK(F_oracle(x, y, L, 4, 4, t) < 0.0);
    const double cross = F_oracle(x, y, L, 0, 4, t);
    CHECK(cross > 0.0);
    CHECK(cross == doctest::Approx(std::abs(alpha(p, t))).epsilon(1e-9));
  }
}

TEST_CASE("pre-triangle form reaches 2/m at pi/g when equality is possible") {
  for (auto [m, n] : {std::pair{6, 2}, {2, 6}, {10, 6}, {3, 5}}) {
    auto x = family::cycle(static_cast<std::size_t>(m) < 3 ? 3 : static_cast<std::size_t>(m));
    if (m == 2) x = family::complete(2);
    auto y = family::empty(static_cast<std::size_t>(n));
    auto e = equality_condition(x, y, L);
    REQUIRE(e.possible);
    auto r = bound_sweep(x, y, 0, 0, L, kPi / static_cast<double>(*e.g), 2);
    CHECK(r.max_pre_triangle == doctest::Approx(2.0 / x.order()).epsilon(1e-9));
  }
}

TEST_CASE("envelope on random joins, both kinds") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 1 + trial % 7, n = 1 + trial % 5;
    const bool lap = trial % 2 == 0;
    auto x = lap ? oracle::random_simple(rng, m, 0.5, trial % 3 == 0) : oracle::random_regular(rng, m);
    auto y = lap ? oracle::random_simple(rng, n, 0.5) : oracle::random_regular(rng, n);
    const std::size_t u = trial % m, v = (trial / 2) % m;
    auto r = bound_sweep(x, y, u, v, lap ? L : A, 4 * kPi, 400);
    CHECK(r.max_abs_F <= r.envelope + 1e-9);
    CHECK(r.max_pre_triangle <= r.envelope + 1e-9);
    CHECK(r.samples.front().t == 0.0);
    CHECK(std::abs(r.samples.front().F) < 1e-12);
  }
}

TEST_CASE("mimicry: K_m joined to K_2") {
  std::vector<double> times;
  for (int i = 0; i <= 400; ++i) times.push_back(4 * kPi * i / 400.0);
  auto rows = mimicry_sweep([](std::size_t m) { return family::complete(m); }, {4, 8, 16, 32}, family::complete(2),
                            0, 1, A, times);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) CHECK(r.max_abs_F <= r.envelope + 1e-9);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].envelope < rows[i - 1].envelope);

  // cocktail party family at the pairing time
  auto cp = mimicry_sweep([](std::size_t m) { return family::cocktail_party(m); }, {6, 10, 14}, family::empty(2), 0,
                          1, L, {0.0, kPi / 2});
  for (const auto& r : cp) CHECK(r.max_abs_F <= r.envelope + 1e-9);
}

TEST_CASE("bound sweep preconditions") {
  CHECK_THROWS_AS(bound_sweep(family::path(3), family::empty(1), 0, 1, L, 1.0, 1), PreconditionError);
  CHECK_THROWS_AS(bound_sweep(family::path(3), family::empty(1), 0, 5, L, 1.0, 10), PreconditionError);
  CHECK_THROWS_AS(bound_sweep(family::path(3), family::empty(1), 0, 1, A, 1.0, 10), PreconditionError);
  auto g = default_grid(family::cycle(4), family::empty(2), L);
  CHECK(g.t_max == doctest::Approx(4 * kPi));
  CHECK(g.samples == 4096);
}
