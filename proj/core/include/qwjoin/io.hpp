#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "qwjoin/bounds.hpp"
#include "qwjoin/graph.hpp"
#include "qwjoin/spectral.hpp"
#include "qwjoin/state_transfer.hpp"

namespace qwjoin::io {

/// {"order", "simple", "edges": [[u, v, w]], "loops": [[u, w]]}
std::string graph_to_json(const WeightedGraph& g);
/// Throws PreconditionError on malformed input.
WeightedGraph graph_from_json(std::string_view text);

WeightedGraph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const WeightedGraph& g);

// Report records as compact JSON text.
std::string to_json(const EigenvalueSet& s);
std::string to_json(const SupportPartition& p);
std::string to_json(const AngleSymbol& a);
std::string to_json(const PSTCertificate& c);
std::string to_json(const PeriodCertificate& c);
std::string to_json(const JoinPeriodRatio& r);
std::string to_json(const PreservationReport& r);
std::string to_json(const InducedReport& r);
std::string to_json(const SelfJoinReport& r);
std::string to_json(const IteratedReport& r);
std::string to_json(const EqualityDiagnosis& d);
/// Summary only; samples go to CSV.
std::string to_json(const BoundReport& r);

/// Header t,mag_join,mag_base,F,envelope then one row per sample.
void write_bound_csv(std::ostream& os, const BoundReport& r);

}  // namespace qwjoin::io
