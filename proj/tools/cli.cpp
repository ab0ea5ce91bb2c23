#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "qwjoin/qwjoin.hpp"

namespace qwjoin::cli {

using nlohmann::json;

namespace {

struct GraphSource {
  std::string file;
  std::vector<std::string> family;

  bool given() const { return !file.empty() || !family.empty(); }

  WeightedGraph load() const {
    if (!file.empty() && !family.empty()) throw PreconditionError("give either a graph file or a family, not both");
    if (!file.empty()) return io::read_graph_file(file);
    if (family.empty()) throw PreconditionError("no graph given");
    if (family.size() >= 2) {
      std::vector<double> args;
      bool numeric = true;
      for (std::size_t i = 1; i < family.size() && numeric; ++i) {
        try {
          std::size_t pos = 0;
          args.push_back(std::stod(family[i], &pos));
          numeric = pos == family[i].size();
        } catch (const std::exception&) {
          numeric = false;
        }
      }
      if (numeric) return family::by_name(family[0], args);
    }
    std::string text;
    for (const auto& t : family) text += (text.empty() ? "" : " ") + t;
    return parse_graph_expression(text);
  }

  std::string describe() const {
    if (!file.empty()) return file;
    std::string text;
    for (const auto& t : family) text += (text.empty() ? "" : " ") + t;
    return text;
  }
};

std::size_t thread_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QWJOIN_THREADS")) {
    try {
      n = std::max<std::size_t>(1, std::stoul(env));
    } catch (const std::exception&) {
      throw PreconditionError("QWJOIN_THREADS must be a positive integer");
    }
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

// Evaluates jobs concurrently; results come back in job order.
std::vector<std::vector<std::string>> run_ordered(std::size_t jobs,
                                                  const std::function<std::vector<std::string>(std::size_t)>& fn) {
  std::vector<std::vector<std::string>> results(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < jobs; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t nt = thread_count(jobs);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::pair<long, long> parse_range(const std::string& text) {
  auto number = [&](std::string_view part) {
    long v = 0;
    auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || end != part.data() + part.size())
      throw PreconditionError("ranges look like 2..20, got '" + text + "'");
    return v;
  };
  const std::string_view t = text;
  const auto dots = t.find("..");
  const long lo = number(dots == std::string_view::npos ? t : t.substr(0, dots));
  const long hi = dots == std::string_view::npos ? lo : number(t.substr(dots + 2));
  if (lo > hi) throw PreconditionError("empty range '" + text + "'");
  return {lo, hi};
}

std::string residue_pattern(const std::vector<long>& hits, long limit) {
  if (hits.empty()) return "no n <= " + std::to_string(limit);
  for (long mod : {1L, 2L, 4L, 8L, 16L}) {
    std::vector<long> residues;
    for (long h : hits)
      if (std::find(residues.begin(), residues.end(), h % mod) == residues.end()) residues.push_back(h % mod);
    std::vector<long> all;
    for (long n = 1; n <= limit; ++n)
      if (std::find(residues.begin(), residues.end(), n % mod) != residues.end()) all.push_back(n);
    if (all == hits) {
      if (mod == 1) return "every n <= " + std::to_string(limit);
      std::sort(residues.begin(), residues.end());
      std::ostringstream os;
      os << "n ≡ ";
      for (std::size_t i = 0; i < residues.size(); ++i) os << (i ? ", " : "") << residues[i];
      os << " (mod " << mod << ")";
      return os.str();
    }
  }
  return "no residue pattern modulo 16";
}

json parsed(const std::string& s) { return json::parse(s); }

template <class F>
json attempt(F&& f) {
  try {
    return f();
  } catch (const PreconditionError& e) {
    return json{{"unavailable", e.what()}};
  } catch (const DomainError& e) {
    return json{{"unavailable", e.what()}};
  }
}

json induced_hint(const WeightedGraph& x, std::size_t u, std::size_t v, MatrixKind kind) {
  constexpr long limit = 32;
  std::vector<long> hits;
  for (long n = 1; n <= limit; ++n)
    if (join_pst(x, family::empty(static_cast<std::size_t>(n)), u, v, kind, CheckMode::ClosedFormOnly).pst)
      hits.push_back(n);
  return json{{"right", "O_n"}, {"tested_up_to", limit}, {"hits", hits}, {"pattern", residue_pattern(hits, limit)}};
}

json join_section(const WeightedGraph& x, const WeightedGraph& y, std::optional<std::pair<std::size_t, std::size_t>> pair,
                  MatrixKind kind, bool x_has_pst) {
  json j;
  j["order"] = x.order() + y.order();
  if (!pair) return j;
  const auto [u, v] = *pair;
  j["support_u"] = parsed(io::to_json(join_support(x, y, u, kind)));
  auto sc = join_strong_cospectral(x, y, u, v, kind);
  j["partition"] = sc ? parsed(io::to_json(*sc)) : json(nullptr);
  j["pst"] = parsed(io::to_json(join_pst(x, y, u, v, kind)));
  j["periodic_u"] = attempt([&] { return json(join_periodic(x, y, u, kind)); });
  j["period_ratio"] = attempt([&] { return parsed(io::to_json(join_period_ratio(x, y, u, kind))); });
  if (x_has_pst)
    j["preservation"] = attempt([&] { return parsed(io::to_json(pst_preserved(x, y, u, v, kind))); });
  else if (sc)
    j["induced"] = attempt([&] { return parsed(io::to_json(pst_induced(x, y, u, v, kind))); });
  j["equality_condition"] = parsed(io::to_json(equality_condition(x, y, kind)));
  return j;
}

void emit(const json& j, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw PreconditionError("cannot write " + out_path);
  f << j.dump(2) << '\n';
}

struct Options {
  GraphSource graph, right;
  std::string matrix = "L";
  std::vector<std::size_t> pair;
  std::string out;
  // join
  int self_r = 0;
  std::string iterated;
  // search
  std::string search_family;
  std::string range = "2..20";
  std::string range2 = "1..8";
  std::size_t max_parts = 4;
  std::size_t max_size = 6;
  double loop = 0.0;
  // sweep
  double t_max = 0.0;
  std::size_t samples = 0;
  std::string csv;
};

int analyze(const Options& o, std::ostream& out) {
  const MatrixKind kind = parse_matrix_kind(o.matrix);
  WeightedGraph x = o.graph.load();
  auto d = decompose(x, kind);
  json j;
  j["input"] = o.graph.describe();
  j["matrix"] = to_string(kind);
  j["order"] = x.order();
  j["eigenvalues"] = d.eigenvalues();
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  if (!o.pair.empty()) {
    if (o.pair.size() != 2) throw PreconditionError("--pair takes two vertices");
    if (o.pair[0] >= x.order() || o.pair[1] >= x.order()) throw PreconditionError("pair out of range");
    if (o.pair[0] == o.pair[1]) throw PreconditionError("--pair needs two distinct vertices");
    pair = std::make_pair(o.pair[0], o.pair[1]);
  }
  bool has_pst = false;
  if (pair) {
    const auto [u, v] = *pair;
    j["pair"] = {u, v};
    j["supports"] = {{"u", parsed(io::to_json(eigenvalue_support(d, u)))},
                     {"v", parsed(io::to_json(eigenvalue_support(d, v)))}};
    j["period_u"] = attempt([&] { return parsed(io::to_json(vertex_period(d, u))); });
    auto sc = strong_cospectral(d, u, v);
    j["strong_cospectral"] = sc.has_value();
    j["partition"] = sc ? parsed(io::to_json(*sc)) : json(nullptr);
    auto cert = pst_certificate(d, u, v);
    has_pst = cert.pst;
    j["pst"] = parsed(io::to_json(cert));
    json hints = json::object();
    if (sc && !cert.pst)
      hints["induced_pst"] = attempt([&] { return induced_hint(x, u, v, kind); });
    j["hints"] = hints;
  }
  if (o.right.given()) j["join"] = join_section(x, o.right.load(), pair, kind, has_pst);
  emit(j, o.out, out);
  return kOk;
}

int join_cmd(const Options& o, std::ostream& out) {
  WeightedGraph g;
  if (!o.iterated.empty()) {
    if (o.graph.given() || o.right.given() || o.self_r) throw PreconditionError("--iterated stands alone");
    g = parse_iterated_spec(o.iterated).build();
  } else if (o.self_r) {
    if (o.right.given()) throw PreconditionError("--self takes only a left graph");
    g = self_join(o.graph.load(), o.self_r);
  } else {
    g = join(o.graph.load(), o.right.load());
  }
  if (o.out.empty()) out << io::graph_to_json(g) << '\n';
  else io::write_graph_file(o.out, g);
  return kOk;
}

json hit_line(const std::string& family, json params, const PSTCertificate& c) {
  return json{{"family", family}, {"params", std::move(params)}, {"certificate", parsed(io::to_json(c))}};
}

int pst_search(const Options& o, std::ostream& out) {
  const MatrixKind kind = parse_matrix_kind(o.matrix);
  const std::string& fam = o.search_family;
  std::vector<std::function<std::vector<std::string>()>> jobs;

  if (fam == "double-cone") {
    auto [lo, hi] = parse_range(o.range);
    for (long n = std::max(1L, lo); n <= hi; ++n)
      jobs.push_back([=, &o] {
        WeightedGraph y = o.right.given() ? o.right.load() : family::empty(static_cast<std::size_t>(n));
        if (o.right.given() && n != lo) return std::vector<std::string>{};
        auto c = double_cone_pst(y, kind, o.loop);
        if (!c.pst) return std::vector<std::string>{};
        return std::vector<std::string>{hit_line(fam, {{"n", y.order()}, {"loop", o.loop}}, c).dump()};
      });
  } else if (fam == "k-minus-e") {
    auto [lo, hi] = parse_range(o.range);
    for (long dd = std::max(3L, lo); dd <= hi; ++dd)
      jobs.push_back([=] {
        const auto dsz = static_cast<std::size_t>(dd);
        auto c = join_pst(family::empty(2), family::complete(dsz - 2), 0, 1, kind);
        if (!c.pst) return std::vector<std::string>{};
        return std::vector<std::string>{hit_line(fam, {{"d", dd}}, c).dump()};
      });
  } else if (fam == "cp-join") {
    auto [lo, hi] = parse_range(o.range);
    auto [lo2, hi2] = parse_range(o.range2);
    for (long m = std::max(4L, lo); m <= hi; ++m) {
      if (m % 2) continue;
      for (long n = std::max(1L, lo2); n <= hi2; ++n)
        jobs.push_back([=] {
          auto c = join_pst(family::cocktail_party(static_cast<std::size_t>(m)), family::empty(static_cast<std::size_t>(n)),
                            0, 1, kind);
          if (!c.pst) return std::vector<std::string>{};
          return std::vector<std::string>{hit_line(fam, {{"m", m}, {"n", n}}, c).dump()};
        });
    }
  } else if (fam == "threshold") {
    if (kind != MatrixKind::Laplacian) throw PreconditionError("threshold search is Laplacian only");
    std::vector<std::vector<std::size_t>> specs;
    for (std::size_t parts = 2; parts <= o.max_parts; ++parts) {
      std::vector<std::size_t> sizes(parts, 1);
      while (true) {
        specs.push_back(sizes);
        std::size_t i = parts;
        while (i > 0 && sizes[i - 1] == o.max_size) sizes[--i] = 1;
        if (i == 0) break;
        ++sizes[i - 1];
      }
    }
    for (const auto& sizes : specs)
      jobs.push_back([=] {
        auto spec = threshold_spec(sizes);
        auto d = decompose(spec.build(), MatrixKind::Laplacian);
        std::vector<std::string> lines;
        for (const auto& c : pst_pairs(d)) {
          json params{{"sizes", sizes},
                      {"canonical_sizes", canonical_threshold_sizes(sizes)},
                      {"congruence_rule", threshold_congruence_rule(sizes)}};
          lines.push_back(hit_line(fam, params, c).dump());
        }
        return lines;
      });
  } else {
    throw PreconditionError("unknown search family '" + fam + "' (double-cone, cp-join, threshold, k-minus-e)");
  }
  auto results = run_ordered(jobs.size(), [&](std::size_t i) { return jobs[i](); });
  for (const auto& lines : results)
    for (const auto& l : lines) out << l << '\n';
  return kOk;
}

int bound_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  const MatrixKind kind = parse_matrix_kind(o.matrix);
  WeightedGraph x = o.graph.load(), y = o.right.load();
  if (o.pair.size() != 2) throw PreconditionError("--pair takes two vertices");
  SweepGrid grid = default_grid(x, y, kind);
  if (o.t_max > 0.0) grid.t_max = o.t_max;
  if (o.samples > 0) grid.samples = o.samples;
  auto r = bound_sweep(x, y, o.pair[0], o.pair[1], kind, grid.t_max, grid.samples);
  std::ostringstream summary;
  summary << std::setprecision(17) << "max|F| = " << r.max_abs_F << ", 2/m = " << r.envelope
          << ", tight = " << (r.tight ? "yes" : "no");
  if (r.witness_t) summary << ", witness t = " << *r.witness_t;
  if (o.csv.empty()) {
    io::write_bound_csv(out, r);
    err << summary.str() << '\n';
  } else {
    std::ofstream f(o.csv);
    if (!f) throw PreconditionError("cannot write " + o.csv);
    io::write_bound_csv(f, r);
    out << io::to_json(r) << '\n' << summary.str() << '\n';
  }
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum walks on join graphs"};
  app.require_subcommand(1);
  Options o;

  auto add_graph = [&](CLI::App* sub, bool with_right) {
    sub->add_option("--graph", o.graph.file, "GraphFile JSON");
    sub->add_option("--family", o.graph.family, "family name and arguments, or an expression like 'C4 u O2'")
        ->expected(1, -1);
    if (with_right) {
      sub->add_option("--right", o.right.family, "right operand (family or expression)")->expected(1, -1);
      sub->add_option("--right-graph", o.right.file, "right operand GraphFile");
    }
    sub->add_option("--matrix", o.matrix, "A or L")->check(CLI::IsMember({"A", "L"}));
  };

  auto* an = app.add_subcommand("analyze", "spectral, periodicity and PST report");
  add_graph(an, true);
  an->add_option("--pair", o.pair)->expected(2);
  an->add_option("--out", o.out);

  auto* jn = app.add_subcommand("join", "build a join, self-join or iterated join");
  jn->add_option("--left", o.graph.file, "left GraphFile");
  jn->add_option("--left-family", o.graph.family)->expected(1, -1);
  jn->add_option("--right", o.right.file, "right GraphFile");
  jn->add_option("--right-family", o.right.family)->expected(1, -1);
  jn->add_option("--self", o.self_r, "r copies of the left graph")->check(CLI::Range(2, 64));
  jn->add_option("--iterated", o.iterated, "e.g. 'O2 v K2 u O1 v K3'");
  jn->add_option("--out", o.out);

  auto* ps = app.add_subcommand("pst-search", "grid search emitting JSON lines per PST pair");
  ps->add_option("--family", o.search_family)->required();
  ps->add_option("--matrix", o.matrix)->check(CLI::IsMember({"A", "L"}));
  ps->add_option("--range", o.range, "primary parameter range lo..hi");
  ps->add_option("--range2", o.range2, "secondary parameter range (cp-join n)");
  ps->add_option("--parts", o.max_parts, "threshold: most parts")->check(CLI::Range(2, 8));
  ps->add_option("--sizes", o.max_size, "threshold: largest part")->check(CLI::Range(1, 16));
  ps->add_option("--loop", o.loop, "double-cone adjacency loop weight k");
  ps->add_option("--right", o.right.family, "double-cone: fixed Y instead of O_n")->expected(1, -1);

  auto* bs = app.add_subcommand("bound-sweep", "sample F(t) against the 2/m envelope");
  add_graph(bs, true);
  bs->add_option("--pair", o.pair)->expected(2)->required();
  bs->add_option("--tmax", o.t_max);
  bs->add_option("--samples", o.samples);
  bs->add_option("--csv", o.csv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kPrecondition;
  }

  try {
    if (*an) return analyze(o, out);
    if (*jn) return join_cmd(o, out);
    if (*ps) return pst_search(o, out);
    if (*bs) return bound_cmd(o, out, err);
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << '\n';
    return kPrecondition;
  } catch (const DomainError& e) {
    err << "domain: " << e.what() << '\n';
    return kPrecondition;
  } catch (const InconsistencyError& e) {
    err << "inconsistency: " << e.what() << '\n';
    return kInternal;
  } catch (const NumericError& e) {
    err << "numeric: " << e.what() << '\n';
    return kInternal;
  }
  return kPrecondition;
}

}  // namespace qwjoin::cli
