#include "qwjoin/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qwjoin/errors.hpp"

namespace qwjoin {

void WeightedGraph::check_vertex(std::size_t u) const {
  if (u >= order_)
    throw PreconditionError("vertex " + std::to_string(u) + " out of range for order " + std::to_string(order_));
}

void WeightedGraph::set_edge(std::size_t u, std::size_t v, double w) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) {
    set_loop(u, w);
    return;
  }
  if (!std::isfinite(w) || w < 0) throw PreconditionError("edge weights must be finite and non-negative");
  Edge e{std::min(u, v), std::max(u, v)};
  if (w == 0)
    edges_.erase(e);
  else
    edges_[e] = w;
}

void WeightedGraph::set_loop(std::size_t u, double w) {
  check_vertex(u);
  if (!std::isfinite(w) || w < 0) throw PreconditionError("loop weights must be finite and non-negative");
  if (w == 0)
    loops_.erase(u);
  else
    loops_[u] = w;
}

double WeightedGraph::weight(std::size_t u, std::size_t v) const {
  check_vertex(u);
  check_vertex(v);
  if (u == v) {
    auto it = loops_.find(u);
    return it == loops_.end() ? 0.0 : it->second;
  }
  auto it = edges_.find({std::min(u, v), std::max(u, v)});
  return it == edges_.end() ? 0.0 : it->second;
}

double WeightedGraph::degree(std::size_t u) const {
  check_vertex(u);
  double d = 2.0 * weight(u, u);
  for (const auto& [e, w] : edges_)
    if (e.first == u || e.second == u) d += w;
  return d;
}

double WeightedGraph::row_sum(std::size_t u) const {
  check_vertex(u);
  double d = weight(u, u);
  for (const auto& [e, w] : edges_)
    if (e.first == u || e.second == u) d += w;
  return d;
}

bool WeightedGraph::is_unweighted() const {
  if (!loops_.empty()) return false;
  return std::all_of(edges_.begin(), edges_.end(), [](const auto& kv) { return kv.second == 1.0; });
}

bool WeightedGraph::has_integer_weights() const {
  auto integral = [](double w) { return std::fabs(w - std::round(w)) < 1e-12; };
  return std::all_of(edges_.begin(), edges_.end(), [&](const auto& kv) { return integral(kv.second); }) &&
         std::all_of(loops_.begin(), loops_.end(), [&](const auto& kv) { return integral(kv.second); });
}

std::optional<double> WeightedGraph::regular_degree(double tol) const {
  if (order_ == 0) return std::nullopt;
  std::vector<double> sums(order_, 0.0);
  for (const auto& [u, w] : loops_) sums[u] += w;
  for (const auto& [e, w] : edges_) {
    sums[e.first] += w;
    sums[e.second] += w;
  }
  for (double s : sums)
    if (std::fabs(s - sums[0]) > tol * std::max(1.0, std::fabs(sums[0]))) return std::nullopt;
  return sums[0];
}

std::vector<std::vector<std::size_t>> WeightedGraph::neighbours() const {
  std::vector<std::vector<std::size_t>> nb(order_);
  for (const auto& [e, w] : edges_) {
    nb[e.first].push_back(e.second);
    nb[e.second].push_back(e.first);
  }
  return nb;
}

std::vector<std::size_t> WeightedGraph::component_labels() const {
  const std::size_t none = order_;
  std::vector<std::size_t> label(order_, none);
  auto nb = neighbours();
  std::size_t next = 0;
  for (std::size_t s = 0; s < order_; ++s) {
    if (label[s] != none) continue;
    std::vector<std::size_t> stack{s};
    label[s] = next;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y : nb[x]) {
        if (label[y] == none) {
          label[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  return label;
}

std::size_t WeightedGraph::component_count() const {
  auto label = component_labels();
  if (label.empty()) return 0;
  return *std::max_element(label.begin(), label.end()) + 1;
}

bool WeightedGraph::same_component(std::size_t u, std::size_t v) const {
  check_vertex(u);
  check_vertex(v);
  auto label = component_labels();
  return label[u] == label[v];
}

bool WeightedGraph::is_isolated(std::size_t u) const {
  check_vertex(u);
  return std::none_of(edges_.begin(), edges_.end(),
                      [u](const auto& kv) { return kv.first.first == u || kv.first.second == u; });
}

Eigen::MatrixXd WeightedGraph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(order_, order_);
  for (const auto& [e, w] : edges_) {
    a(e.first, e.second) = w;
    a(e.second, e.first) = w;
  }
  for (const auto& [u, w] : loops_) a(u, u) = w;
  return a;
}

Eigen::MatrixXd WeightedGraph::laplacian() const {
  if (!is_simple()) throw PreconditionError("the Laplacian is only defined here for loopless graphs");
  Eigen::MatrixXd a = adjacency();
  Eigen::MatrixXd l = -a;
  for (std::size_t u = 0; u < order_; ++u) l(u, u) = a.row(u).sum();
  return l;
}

bool WeightedGraph::is_empty_pair(double k) const {
  if (order_ != 2 || !edges_.empty()) return false;
  for (std::size_t u = 0; u < 2; ++u)
    if (std::fabs(weight(u, u) - k) > 1e-12) return false;
  return true;
}

WeightedGraph join(const WeightedGraph& x, const WeightedGraph& y) {
  WeightedGraph g = disjoint_union(x, y);
  const std::size_t m = x.order();
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t w = 0; w < y.order(); ++w) g.set_edge(u, m + w, 1.0);
  return g;
}

WeightedGraph disjoint_union(const WeightedGraph& x, const WeightedGraph& y) {
  const std::size_t m = x.order();
  WeightedGraph g(m + y.order());
  for (const auto& [e, w] : x.edges()) g.set_edge(e.first, e.second, w);
  for (const auto& [u, w] : x.loops()) g.set_loop(u, w);
  for (const auto& [e, w] : y.edges()) g.set_edge(m + e.first, m + e.second, w);
  for (const auto& [u, w] : y.loops()) g.set_loop(m + u, w);
  return g;
}

WeightedGraph self_join(const WeightedGraph& x, int r) {
  if (r < 1) throw PreconditionError("self_join needs r >= 1");
  WeightedGraph g = x;
  for (int i = 1; i < r; ++i) g = join(g, x);
  return g;
}

namespace family {

WeightedGraph empty(std::size_t n) { return WeightedGraph(n); }

WeightedGraph empty_with_loops(std::size_t n, double k) {
  WeightedGraph g(n);
  for (std::size_t u = 0; u < n; ++u) g.set_loop(u, k);
  return g;
}

WeightedGraph complete(std::size_t n) {
  WeightedGraph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) g.set_edge(u, v);
  return g;
}

WeightedGraph path(std::size_t n) {
  WeightedGraph g(n);
  for (std::size_t u = 0; u + 1 < n; ++u) g.set_edge(u, u + 1);
  return g;
}

WeightedGraph cycle(std::size_t n) {
  if (n < 3) throw PreconditionError("cycle needs at least 3 vertices");
  WeightedGraph g = path(n);
  g.set_edge(n - 1, 0);
  return g;
}

WeightedGraph cocktail_party(std::size_t m) {
  if (m % 2 != 0) throw PreconditionError("CP(m) needs an even m");
  WeightedGraph g = complete(m);
  for (std::size_t i = 0; i < m; i += 2) g.set_edge(i, i + 1, 0.0);
  return g;
}

WeightedGraph hypercube(int p) {
  if (p < 0 || p > 20) throw PreconditionError("hypercube dimension out of range");
  const std::size_t n = std::size_t{1} << p;
  WeightedGraph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (int b = 0; b < p; ++b) {
      std::size_t v = u ^ (std::size_t{1} << b);
      if (u < v) g.set_edge(u, v);
    }
  return g;
}

WeightedGraph complete_minus_edge(std::size_t d) {
  if (d < 3) throw PreconditionError("K_d minus an edge needs d >= 3");
  return join(empty(2), complete(d - 2));
}

WeightedGraph complete_bipartite(std::size_t a, std::size_t b) { return join(empty(a), empty(b)); }

WeightedGraph star(std::size_t leaves) { return join(empty(1), empty(leaves)); }

namespace {
std::size_t as_size(const std::vector<double>& args, std::size_t i, std::string_view name) {
  if (i >= args.size()) throw PreconditionError("family " + std::string(name) + " needs more arguments");
  double x = args[i];
  if (x < 0 || std::fabs(x - std::round(x)) > 1e-12)
    throw PreconditionError("family " + std::string(name) + " needs non-negative integer arguments");
  return static_cast<std::size_t>(std::llround(x));
}
}  // namespace

WeightedGraph by_name(std::string_view name, const std::vector<double>& args) {
  if (name == "O") return empty(as_size(args, 0, name));
  if (name == "O_loops") {
    if (args.size() < 2) throw PreconditionError("O_loops needs n and k");
    return empty_with_loops(as_size(args, 0, name), args[1]);
  }
  if (name == "K") return complete(as_size(args, 0, name));
  if (name == "P") return path(as_size(args, 0, name));
  if (name == "C") return cycle(as_size(args, 0, name));
  if (name == "CP") return cocktail_party(as_size(args, 0, name));
  if (name == "Q") return hypercube(static_cast<int>(as_size(args, 0, name)));
  if (name == "K_minus_e") return complete_minus_edge(as_size(args, 0, name));
  if (name == "K_bipartite") return complete_bipartite(as_size(args, 0, name), as_size(args, 1, name));
  if (name == "star") return star(as_size(args, 0, name));
  throw PreconditionError("unknown graph family '" + std::string(name) + "'");
}

}  // namespace family

std::vector<std::size_t> IteratedJoinSpec::part_sizes() const {
  std::vector<std::size_t> out;
  for (const auto& p : parts) out.push_back(p.order());
  return out;
}

std::size_t IteratedJoinSpec::offset(std::size_t j) const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < j && i < parts.size(); ++i) s += parts[i].order();
  return s;
}

void IteratedJoinSpec::validate() const {
  if (parts.size() < 2) throw PreconditionError("an iterated join needs at least two parts");
  if (connectives.size() + 1 != parts.size())
    throw PreconditionError("an iterated join needs one connective between consecutive parts");
  if (connectives.back() != Connective::Join) throw PreconditionError("the last connective must be a join");
  for (std::size_t i = 0; i + 1 < connectives.size(); ++i)
    if (connectives[i] == connectives[i + 1]) throw PreconditionError("connectives must alternate");
  for (const auto& p : parts)
    if (p.order() == 0) throw PreconditionError("iterated join parts must be non-empty");
}

WeightedGraph IteratedJoinSpec::build() const {
  validate();
  WeightedGraph g = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i)
    g = connectives[i - 1] == Connective::Join ? join(g, parts[i]) : disjoint_union(g, parts[i]);
  return g;
}

std::string IteratedJoinSpec::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) os << (connectives[i - 1] == Connective::Join ? " v " : " u ");
    os << "[" << parts[i].order() << "]";
  }
  return os.str();
}

IteratedJoinSpec make_iterated_spec(std::vector<WeightedGraph> parts) {
  IteratedJoinSpec spec;
  const std::size_t p = parts.size();
  spec.parts = std::move(parts);
  for (std::size_t i = 1; i < p; ++i) {
    // the connective before part i (0-based); the last one (i = p-1) is a join
    bool is_join = (p - 1 - i) % 2 == 0;
    spec.connectives.push_back(is_join ? Connective::Join : Connective::Union);
  }
  spec.validate();
  return spec;
}

IteratedJoinSpec threshold_spec(const std::vector<std::size_t>& sizes) {
  std::vector<WeightedGraph> parts;
  const std::size_t p = sizes.size();
  for (std::size_t i = 0; i < p; ++i) {
    // joined parts are complete, unioned parts and an even-shape first part are empty
    bool joined = i > 0 && (p - 1 - i) % 2 == 0;
    bool complete_first = i == 0 && p % 2 == 1;
    parts.push_back(joined || complete_first ? family::complete(sizes[i]) : family::empty(sizes[i]));
  }
  return make_iterated_spec(std::move(parts));
}

std::vector<std::size_t> canonical_threshold_sizes(std::vector<std::size_t> sizes) {
  while (sizes.size() >= 2 && sizes[0] == 1) {
    sizes[1] += 1;
    sizes.erase(sizes.begin());
  }
  return sizes;
}

bool is_threshold_spec(const IteratedJoinSpec& spec) {
  try {
    auto t = threshold_spec(spec.part_sizes());
    return t.parts == spec.parts && t.connectives == spec.connectives;
  } catch (const PreconditionError&) {
    return false;
  }
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::size_t parse_count(std::string_view digits, std::string_view token) {
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw PreconditionError("cannot parse graph token '" + std::string(token) + "'");
  return static_cast<std::size_t>(std::stoull(std::string(digits)));
}

// Splits on connective words; returns graph tokens and connectives.
void tokenize(std::string_view text, std::vector<std::string>& graphs, std::vector<Connective>& conns) {
  std::string s(text);
  const std::pair<std::string, std::string> unicode[] = {{"∨", " v "}, {"∪", " u "}};
  for (const auto& [from, to] : unicode) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
      s.replace(pos, from.size(), to);
  }
  std::istringstream is(s);
  std::string word;
  bool expect_graph = true;
  while (is >> word) {
    if (word == "v" || word == "join" || word == "u" || word == "union") {
      if (expect_graph) throw PreconditionError("misplaced connective in '" + std::string(text) + "'");
      conns.push_back(word == "v" || word == "join" ? Connective::Join : Connective::Union);
      expect_graph = true;
    } else {
      if (!expect_graph) throw PreconditionError("missing connective in '" + std::string(text) + "'");
      graphs.push_back(word);
      expect_graph = false;
    }
  }
  if (graphs.empty() || expect_graph) throw PreconditionError("incomplete expression '" + std::string(text) + "'");
}

}  // namespace

WeightedGraph parse_graph_token(std::string_view token_in) {
  std::string token = trim(token_in);
  std::string body = token;
  double loop = 0.0;
  if (auto at = token.find('@'); at != std::string::npos) {
    body = token.substr(0, at);
    try {
      loop = std::stod(token.substr(at + 1));
    } catch (const std::exception&) {
      throw PreconditionError("cannot parse loop weight in '" + token + "'");
    }
  }
  WeightedGraph g;
  auto starts = [&](std::string_view p) { return body.rfind(p, 0) == 0; };
  if (starts("CP")) {
    g = family::cocktail_party(parse_count(std::string_view(body).substr(2), token));
  } else if (starts("Kme")) {
    g = family::complete_minus_edge(parse_count(std::string_view(body).substr(3), token));
  } else if (starts("Kb")) {
    auto rest = body.substr(2);
    auto comma = rest.find(',');
    if (comma == std::string::npos) throw PreconditionError("Kb needs two sizes: '" + token + "'");
    g = family::complete_bipartite(parse_count(std::string_view(rest).substr(0, comma), token),
                                   parse_count(std::string_view(rest).substr(comma + 1), token));
  } else if (starts("O")) {
    g = family::empty(parse_count(std::string_view(body).substr(1), token));
  } else if (starts("K")) {
    g = family::complete(parse_count(std::string_view(body).substr(1), token));
  } else if (starts("P")) {
    g = family::path(parse_count(std::string_view(body).substr(1), token));
  } else if (starts("C")) {
    g = family::cycle(parse_count(std::string_view(body).substr(1), token));
  } else if (starts("Q")) {
    g = family::hypercube(static_cast<int>(parse_count(std::string_view(body).substr(1), token)));
  } else if (starts("S")) {
    g = family::star(parse_count(std::string_view(body).substr(1), token));
  } else {
    throw PreconditionError("unknown graph token '" + token + "'");
  }
  if (loop != 0.0)
    for (std::size_t u = 0; u < g.order(); ++u) g.set_loop(u, g.weight(u, u) + loop);
  return g;
}

IteratedJoinSpec parse_iterated_spec(std::string_view text) {
  std::vector<std::string> graphs;
  std::vector<Connective> conns;
  tokenize(text, graphs, conns);
  IteratedJoinSpec spec;
  for (const auto& t : graphs) spec.parts.push_back(parse_graph_token(t));
  spec.connectives = conns;
  spec.validate();
  return spec;
}

WeightedGraph parse_graph_expression(std::string_view text) {
  std::vector<std::string> graphs;
  std::vector<Connective> conns;
  tokenize(text, graphs, conns);
  WeightedGraph g = parse_graph_token(graphs[0]);
  for (std::size_t i = 1; i < graphs.size(); ++i) {
    WeightedGraph h = parse_graph_token(graphs[i]);
    g = conns[i - 1] == Connective::Join ? join(g, h) : disjoint_union(g, h);
  }
  return g;
}

}  // namespace qwjoin
