#include "qwjoin/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "qwjoin/errors.hpp"

namespace qwjoin::io {

using nlohmann::json;

namespace {

json rational_j(const Rational& r) { return json{{"num", r.num()}, {"den", r.den()}, {"text", r.str()}}; }

json set_j(const EigenvalueSet& s) { return json(s.values()); }

json angle_j(const AngleSymbol& a) {
  return json{{"pi_multiple", a.pi_multiple}, {"denominator", a.denominator}, {"sqrt_of", a.sqrt_of}, {"text", a.str()}};
}

json partition_j(const SupportPartition& p) {
  return json{{"u", p.u}, {"v", p.v}, {"plus", set_j(p.plus)}, {"minus", set_j(p.minus)}};
}

json pst_j(const PSTCertificate& c) {
  json j{{"u", c.u}, {"v", c.v}, {"pst", c.pst}, {"reason", c.reason}, {"source", c.source}, {"delta", c.delta}};
  j["tau"] = c.tau ? json(*c.tau) : json(nullptr);
  j["tau_symbolic"] = c.tau_symbolic ? angle_j(*c.tau_symbolic) : json(nullptr);
  j["g"] = c.g ? rational_j(*c.g) : json(nullptr);
  j["partition"] = c.partition ? partition_j(*c.partition) : json(nullptr);
  j["numeric_check"] = c.numeric_check ? json(*c.numeric_check) : json(nullptr);
  json ledger = json::array();
  for (const auto& e : c.nu2_ledger)
    ledger.push_back({{"difference", rational_j(e.difference)}, {"nu2", e.nu2}, {"plus_plus", e.plus_plus}});
  j["nu2_ledger"] = ledger;
  return j;
}

json period_j(const PeriodCertificate& c) {
  json j{{"u", c.u},
         {"periodic", c.periodic},
         {"trivial", c.trivial},
         {"type", to_string(c.type)},
         {"lambda1", c.lambda1},
         {"lambda2", c.lambda2},
         {"q", c.q},
         {"numeric_check", c.numeric_check}};
  j["rho"] = c.rho ? json(*c.rho) : json(nullptr);
  j["rho_symbolic"] = c.rho_symbolic ? angle_j(*c.rho_symbolic) : json(nullptr);
  json ratios = json::array();
  for (const auto& r : c.ratios) ratios.push_back({{"lambda", r.lambda}, {"ratio", rational_j(r.ratio)}});
  j["ratios"] = ratios;
  return j;
}

json equality_j(const EqualityDiagnosis& d) {
  json j{{"decided", d.decided}, {"possible", d.possible}, {"times", d.times}, {"detail", d.detail}};
  j["g"] = d.g ? json(*d.g) : json(nullptr);
  return j;
}

template <class T>
json opt(const std::optional<T>& x) {
  return x ? json(*x) : json(nullptr);
}

}  // namespace

std::string graph_to_json(const WeightedGraph& g) {
  json edges = json::array(), loops = json::array();
  for (const auto& [e, w] : g.edges()) edges.push_back(json::array({e.first, e.second, w}));
  for (const auto& [u, w] : g.loops()) loops.push_back(json::array({u, w}));
  json j{{"order", g.order()}, {"simple", g.is_simple()}, {"edges", edges}, {"loops", loops}};
  return j.dump(2);
}

WeightedGraph graph_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw PreconditionError(std::string("graph file is not valid JSON: ") + e.what());
  }
  try {
    const auto order = j.at("order").get<std::size_t>();
    const bool simple = j.value("simple", true);
    WeightedGraph g(order);
    for (const auto& e : j.value("edges", json::array())) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3) throw PreconditionError("edge entries are [u, v, w]");
      const auto u = e[0].get<std::size_t>(), v = e[1].get<std::size_t>();
      const double w = e.size() == 3 ? e[2].get<double>() : 1.0;
      if (u >= order || v >= order) throw PreconditionError("edge endpoint out of range");
      if (u == v) throw PreconditionError("edges need distinct endpoints; use loops");
      if (!(w > 0.0)) throw PreconditionError("edge weights must be positive");
      g.set_edge(u, v, w);
    }
    const json loops = j.value("loops", json::array());
    if (simple && !loops.empty()) throw PreconditionError("loops present in a graph marked simple");
    for (const auto& l : loops) {
      if (!l.is_array() || l.size() != 2) throw PreconditionError("loop entries are [u, w]");
      const auto u = l[0].get<std::size_t>();
      const double w = l[1].get<double>();
      if (u >= order) throw PreconditionError("loop vertex out of range");
      if (!(w > 0.0)) throw PreconditionError("loop weights must be positive");
      g.set_loop(u, w);
    }
    return g;
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("malformed graph file: ") + e.what());
  }
}

WeightedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open graph file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return graph_from_json(ss.str());
}

void write_graph_file(const std::string& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path);
  out << graph_to_json(g) << '\n';
}

std::string to_json(const EigenvalueSet& s) { return set_j(s).dump(); }
std::string to_json(const SupportPartition& p) { return partition_j(p).dump(); }
std::string to_json(const AngleSymbol& a) { return angle_j(a).dump(); }
std::string to_json(const PSTCertificate& c) { return pst_j(c).dump(); }
std::string to_json(const PeriodCertificate& c) { return period_j(c).dump(); }
std::string to_json(const EqualityDiagnosis& d) { return equality_j(d).dump(); }

std::string to_json(const JoinPeriodRatio& r) {
  json ledger = json::array();
  for (const auto& [name, q] : r.ledger) ledger.push_back({{"name", name}, {"value", rational_j(q)}});
  json j{{"case", r.case_id}, {"c_value", r.c_value}, {"rho_x", r.rho_x}, {"rho_join", r.rho_join}, {"ledger", ledger}};
  j["c"] = r.c == Rational(0) ? json(nullptr) : rational_j(r.c);
  return j.dump();
}

std::string to_json(const PreservationReport& r) {
  json j{{"preserved", r.preserved}, {"rule", r.rule}, {"detail", r.detail}};
  j["tau_x"] = opt(r.tau_x);
  j["tau_join"] = opt(r.tau_join);
  j["ratio"] = r.ratio ? rational_j(*r.ratio) : json(nullptr);
  j["nu2_h"] = opt(r.nu2_h);
  j["alpha_needed"] = opt(r.alpha_needed);
  j["s"] = opt(r.s);
  j["join_certificate"] = pst_j(r.join_certificate);
  return j.dump();
}

std::string to_json(const InducedReport& r) {
  json j{{"induced", r.induced}, {"rule", r.rule}, {"detail", r.detail}, {"p", r.p}, {"q", r.q}};
  j["alpha"] = opt(r.alpha);
  j["y"] = opt(r.y);
  j["z"] = opt(r.z);
  j["stated_case"] = opt(r.stated_case);
  j["s"] = opt(r.s);
  j["join_certificate"] = pst_j(r.join_certificate);
  return j.dump();
}

std::string to_json(const SelfJoinReport& r) {
  json j{{"case", r.case_id}, {"certificate", pst_j(r.certificate)}};
  j["partition"] = r.partition ? partition_j(*r.partition) : json(nullptr);
  return j.dump();
}

std::string to_json(const IteratedReport& r) {
  json j{{"certificate", pst_j(r.certificate)}, {"threshold", r.threshold}, {"variants_disagree", r.variants_disagree}};
  j["congruence_rule"] = opt(r.congruence_rule);
  j["printed_variant_rule"] = opt(r.printed_variant_rule);
  return j.dump();
}

std::string to_json(const BoundReport& r) {
  json j{{"u", r.u},
         {"v", r.v},
         {"matrix", to_string(r.kind)},
         {"samples", r.samples.size()},
         {"max_abs_F", r.max_abs_F},
         {"max_pre_triangle", r.max_pre_triangle},
         {"envelope", r.envelope},
         {"tight", r.tight},
         {"equality", equality_j(r.equality)}};
  j["witness_t"] = opt(r.witness_t);
  return j.dump();
}

void write_bound_csv(std::ostream& os, const BoundReport& r) {
  os << "t,mag_join,mag_base,F,envelope\n";
  os << std::setprecision(17);
  for (const auto& s : r.samples) os << s.t << ',' << s.mag_join << ',' << s.mag_base << ',' << s.F << ',' << r.envelope << '\n';
}

}  // namespace qwjoin::io
