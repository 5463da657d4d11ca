#include "chronorder/report_io.hpp"

#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace chronorder {

using nlohmann::json;

void write_csv_header_comment(std::ostream& out, const Provenance& provenance) {
  for (const auto& [key, value] : provenance) out << "# " << key << '=' << value << '\n';
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_trace_csv(std::ostream& out, const OrderingResult& result, const Provenance& provenance) {
  write_csv_header_comment(out, provenance);
  out << "evaluation,temperature,H,accepted\n" << std::setprecision(17);
  for (const auto& p : result.trace) {
    out << p.evaluation << ',' << p.temperature << ',' << p.H << ',' << (p.accepted ? 1 : 0) << '\n';
  }
}

void write_bandwidths_csv(std::ostream& out, const std::vector<BandwidthEstimate>& estimates,
                          const Provenance& provenance) {
  write_csv_header_comment(out, provenance);
  out << "word,h_amise,A,B,curvature,degenerate,capped,pilot_converged\n" << std::setprecision(17);
  for (const auto& e : estimates) {
    out << csv_escape(e.word) << ',' << e.h_amise << ',' << e.A << ',' << e.B << ',' << e.curvature
        << ',' << e.degenerate << ',' << e.capped << ',' << e.pilot_converged << '\n';
  }
}

void write_words_csv(std::ostream& out, const InformativeWordReport& report,
                     const Provenance& provenance) {
  write_csv_header_comment(out, provenance);
  out << "word,frequency,h_amise,max_probability\n" << std::setprecision(17);
  for (const auto& w : report.words) {
    out << csv_escape(w.word) << ',' << w.frequency << ',' << w.h_amise << ',' << w.max_probability
        << '\n';
  }
}

namespace {

json replication_json(const Replication& r) {
  json j{{"index", r.index}, {"seed", r.seed}, {"ok", r.ok}};
  if (!r.ok) {
    j["error"] = r.error;
    return j;
  }
  j["doc_ids"] = r.doc_ids;
  j["years"] = r.years;
  j["true_order"] = r.true_order.order();
  j["estimated_order"] = r.estimated_order.order();
  j["abs_rho"] = r.abs_rho;
  j["H_est"] = r.H_est;
  j["H_true"] = r.H_true;
  j["n_words"] = r.n_words;
  j["evaluations"] = r.evaluations;
  return j;
}

}  // namespace

std::string evaluation_report_json(const EvaluationReport& report, const Provenance& provenance,
                                   int indent) {
  json meta = json::object();
  for (const auto& [k, v] : provenance) meta[k] = v;
  json reps = json::array();
  for (const auto& r : report.per_replication) reps.push_back(replication_json(r));
  json j{
      {"meta", meta},
      {"median_abs_rho", report.median_abs_rho},
      {"baseline_median_abs_rho", report.baseline_median},
      {"baseline_sample", report.baseline_sample},
      {"failures", report.failures},
      {"rank_sum",
       {{"U", report.test.U},
        {"p_value", report.test.p_value},
        {"p_value_text", format_p_value(report.test.p_value)},
        {"method", std::string(to_string(report.test.method))},
        {"z", report.test.z}}},
      {"replications", reps},
  };
  if (report.error_analysis) {
    const auto& e = *report.error_analysis;
    j["error_analysis"] = {{"percentile", e.percentile},
                           {"threshold", e.threshold},
                           {"replications", e.replications},
                           {"H_est", e.H_est},
                           {"H_true", e.H_true},
                           {"fraction_true_at_least_est", e.fraction_true_at_least_est}};
  } else {
    j["error_analysis"] = nullptr;
  }
  return j.dump(indent);
}

std::string replications_jsonl(const EvaluationReport& report) {
  std::ostringstream out;
  for (const auto& r : report.per_replication) out << replication_json(r).dump() << '\n';
  return out.str();
}

}  // namespace chronorder
