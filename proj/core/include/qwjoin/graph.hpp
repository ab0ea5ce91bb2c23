#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qwjoin {

/// Undirected graph with positive edge weights and optional loops. Vertices are 0..order-1.
class WeightedGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t order) : order_(order) {}

  std::size_t order() const { return order_; }

  /// Sets the weight of {u,v}; weight 0 removes the edge.
  void set_edge(std::size_t u, std::size_t v, double w = 1.0);
  void set_loop(std::size_t u, double w);
  double weight(std::size_t u, std::size_t v) const;

  const std::map<Edge, double>& edges() const { return edges_; }
  const std::map<std::size_t, double>& loops() const { return loops_; }

  /// 2*w_uu + sum_{j != u} w_uj
  double degree(std::size_t u) const;
  /// Row sum of the adjacency matrix.
  double row_sum(std::size_t u) const;

  bool is_simple() const { return loops_.empty(); }
  bool is_unweighted() const;
  bool has_integer_weights() const;
  /// Common row sum of A when every row agrees within tol.
  std::optional<double> regular_degree(double tol = 1e-9) const;
  bool is_regular(double tol = 1e-9) const { return regular_degree(tol).has_value(); }

  std::vector<std::vector<std::size_t>> neighbours() const;
  std::vector<std::size_t> component_labels() const;
  std::size_t component_count() const;
  bool is_connected() const { return component_count() <= 1; }
  bool same_component(std::size_t u, std::size_t v) const;
  bool is_isolated(std::size_t u) const;

  Eigen::MatrixXd adjacency() const;
  /// D - A; requires a loopless graph.
  Eigen::MatrixXd laplacian() const;

  /// Two vertices, no edges, every loop weight equal to k (k = 0 gives the empty graph).
  bool is_empty_pair(double k = 0.0) const;

  bool operator==(const WeightedGraph& o) const = default;

 private:
  void check_vertex(std::size_t u) const;

  std::size_t order_ = 0;
  std::map<Edge, double> edges_;
  std::map<std::size_t, double> loops_;
};

/// X first, then Y; every cross pair joined with weight 1.
WeightedGraph join(const WeightedGraph& x, const WeightedGraph& y);
WeightedGraph disjoint_union(const WeightedGraph& x, const WeightedGraph& y);
/// X v X v ... v X with r copies; copy i occupies vertices i*m .. i*m+m-1.
WeightedGraph self_join(const WeightedGraph& x, int r);

namespace family {
WeightedGraph empty(std::size_t n);                    // O_n
WeightedGraph empty_with_loops(std::size_t n, double k);  // O_n(k)
WeightedGraph complete(std::size_t n);                 // K_n
WeightedGraph path(std::size_t n);                     // P_n
WeightedGraph cycle(std::size_t n);                    // C_n
WeightedGraph cocktail_party(std::size_t m);           // CP(m), non-adjacent pairs (2i, 2i+1)
WeightedGraph hypercube(int p);                        // Q_p
WeightedGraph complete_minus_edge(std::size_t d);      // O_2 v K_{d-2}
WeightedGraph complete_bipartite(std::size_t a, std::size_t b);
WeightedGraph star(std::size_t leaves);

/// Named family with numeric arguments, e.g. ("CP", {6}). Names: O, O_loops, K, P, C, CP, Q,
/// K_minus_e, K_bipartite, star.
WeightedGraph by_name(std::string_view name, const std::vector<double>& args);
}  // namespace family

enum class Connective { Join, Union };

/// Left fold of parts by alternating connectives ending in a join.
/// Even part counts start with a join, odd part counts start with a union.
struct IteratedJoinSpec {
  std::vector<WeightedGraph> parts;
  std::vector<Connective> connectives;

  std::size_t size() const { return parts.size(); }
  /// true for the even-length shape (join, union, ..., join)
  bool even_shape() const { return parts.size() % 2 == 0; }
  std::vector<std::size_t> part_sizes() const;
  /// first vertex index of part j (0-based)
  std::size_t offset(std::size_t j) const;

  /// Throws PreconditionError unless the connectives alternate and end in a join.
  void validate() const;
  WeightedGraph build() const;
  std::string describe() const;
};

IteratedJoinSpec make_iterated_spec(std::vector<WeightedGraph> parts);

/// Threshold spec: empty/complete parts placed so that joined parts are complete.
IteratedJoinSpec threshold_spec(const std::vector<std::size_t>& sizes);
bool is_threshold_spec(const IteratedJoinSpec& spec);
/// A leading part of size 1 merges into the next part (K_1 u O_a = O_{a+1}, K_1 v K_a = K_{a+1}), so every
/// connected threshold graph has exactly one size list with m_1 >= 2. A single entry means a complete graph.
std::vector<std::size_t> canonical_threshold_sizes(std::vector<std::size_t> sizes);

/// Parses a compact graph token such as "O2", "K3", "P4", "C6", "CP8", "Q3", "Kme5", "Kb3,3", "O2@1".
WeightedGraph parse_graph_token(std::string_view token);
/// Parses "O2 v K2 u O1 v K3" (also accepts the unicode connectives).
IteratedJoinSpec parse_iterated_spec(std::string_view text);
/// Parses a union/join expression into a single graph (left fold, no shape restriction).
WeightedGraph parse_graph_expression(std::string_view text);

}  // namespace qwjoin
