#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "chronorder/annealing.hpp"
#include "chronorder/bandwidth.hpp"
#include "chronorder/evaluation.hpp"

namespace chronorder {

/// Key/value pairs echoed at the top of every emitted file.
using Provenance = std::vector<std::pair<std::string, std::string>>;

/// `# key=value` comment lines followed by nothing else.
void write_csv_header_comment(std::ostream& out, const Provenance& provenance);

std::string csv_escape(const std::string& field);

void write_trace_csv(std::ostream& out, const OrderingResult& result, const Provenance& provenance);
void write_bandwidths_csv(std::ostream& out, const std::vector<BandwidthEstimate>& estimates,
                          const Provenance& provenance);
void write_words_csv(std::ostream& out, const InformativeWordReport& report,
                     const Provenance& provenance);

/// Serialises a report as one JSON document (with provenance under "meta").
std::string evaluation_report_json(const EvaluationReport& report, const Provenance& provenance,
                                   int indent = 2);
/// One JSON object per replication, newline separated.
std::string replications_jsonl(const EvaluationReport& report);

}  // namespace chronorder
