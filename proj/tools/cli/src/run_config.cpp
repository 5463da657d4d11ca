#include "chronorder/cli/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "chronorder/error.hpp"
#include "chronorder/parallel.hpp"

namespace chronorder::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("setting '" + std::string(key) + "': cannot parse '" +
                          std::string(value) + "' as a number");
  }
  return out;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  if (!value.empty() && value.front() == '-') {
    throw ValidationError("setting '" + std::string(key) + "' must be non-negative");
  }
  return parse_number<std::size_t>(key, value);
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ValidationError("setting '" + std::string(key) + "': expected true or false, got '" +
                        std::string(value) + "'");
}

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

std::string_view filter_name(VocabularyFilter f) {
  return f == VocabularyFilter::distinct_documents ? "documents" : "occurrences";
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  const std::string k(key);
  if (k == "corpus") {
    corpus = std::string(value);
  } else if (k == "format") {
    if (value == "auto") {
      format.reset();
    } else {
      format = parse_corpus_format(value);
    }
  } else if (k == "lowercase") {
    tokenize.lowercase = parse_bool(key, value);
  } else if (k == "strip_punctuation") {
    tokenize.strip_punctuation = parse_bool(key, value);
  } else if (k == "mode") {
    mode = parse_sample_mode(value);
  } else if (k == "m") {
    m = parse_count(key, value);
  } else if (k == "step") {
    step = parse_number<int>(key, value);
  } else if (k == "reps") {
    reps = parse_count(key, value);
  } else if (k == "baseline_reps") {
    baseline_reps = parse_count(key, value);
  } else if (k == "min_docs") {
    min_docs = parse_count(key, value);
  } else if (k == "filter") {
    if (value == "documents") {
      filter = VocabularyFilter::distinct_documents;
    } else if (value == "occurrences") {
      filter = VocabularyFilter::total_occurrences;
    } else {
      throw ValidationError("filter must be 'documents' or 'occurrences', got '" +
                            std::string(value) + "'");
    }
  } else if (k == "df") {
    df = parse_number<double>(key, value);
  } else if (k == "squared_integral") {
    if (value == "quadrature") {
      squared_integral = SquaredIntegralMethod::quadrature;
    } else if (value == "monte_carlo") {
      squared_integral = SquaredIntegralMethod::monte_carlo;
    } else {
      throw ValidationError("squared_integral must be 'quadrature' or 'monte_carlo'");
    }
  } else if (k == "variance_scale") {
    if (value == "proportion") {
      variance_scale = VarianceScale::proportion;
    } else if (value == "count") {
      variance_scale = VarianceScale::count;
    } else {
      throw ValidationError("variance_scale must be 'proportion' or 'count'");
    }
  } else if (k == "t_initial") {
    if (value == "auto") {
      schedule.t_initial.reset();
    } else {
      schedule.t_initial = parse_number<double>(key, value);
    }
  } else if (k == "cooling") {
    schedule.cooling = parse_number<double>(key, value);
  } else if (k == "proposals_per_temp") {
    schedule.proposals_per_temp = parse_count(key, value);
  } else if (k == "max_evaluations") {
    schedule.max_evaluations = parse_count(key, value);
  } else if (k == "stall_limit") {
    schedule.stall_limit = parse_count(key, value);
  } else if (k == "calibration_samples") {
    schedule.calibration_samples = parse_count(key, value);
  } else if (k == "restarts") {
    schedule.restarts = parse_count(key, value);
  } else if (k == "segments_per_proposal") {
    schedule.neighbor.segments_per_proposal = parse_count(key, value);
  } else if (k == "exhaustive") {
    exhaustive = parse_bool(key, value);
  } else if (k == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (k == "out") {
    out = std::string(value);
  } else if (k == "threads") {
    threads = parse_count(key, value);
  } else {
    throw ValidationError("unknown setting '" + k + "'");
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::settings() const {
  std::vector<std::pair<std::string, std::string>> s;
  s.emplace_back("corpus", corpus.string());
  s.emplace_back("format", format ? std::string(to_string(*format)) : "auto");
  s.emplace_back("lowercase", tokenize.lowercase ? "true" : "false");
  s.emplace_back("strip_punctuation", tokenize.strip_punctuation ? "true" : "false");
  s.emplace_back("mode", std::string(to_string(mode)));
  s.emplace_back("m", std::to_string(m));
  s.emplace_back("step", std::to_string(step));
  s.emplace_back("reps", std::to_string(reps));
  s.emplace_back("baseline_reps", std::to_string(baseline_reps));
  s.emplace_back("min_docs", std::to_string(min_docs));
  s.emplace_back("filter", std::string(filter_name(filter)));
  s.emplace_back("df", format_double(df));
  s.emplace_back("squared_integral",
                 squared_integral == SquaredIntegralMethod::quadrature ? "quadrature" : "monte_carlo");
  s.emplace_back("variance_scale",
                 variance_scale == VarianceScale::proportion ? "proportion" : "count");
  s.emplace_back("t_initial", schedule.t_initial ? format_double(*schedule.t_initial) : "auto");
  s.emplace_back("cooling", format_double(schedule.cooling));
  s.emplace_back("proposals_per_temp", std::to_string(schedule.proposals_per_temp));
  s.emplace_back("max_evaluations", std::to_string(schedule.max_evaluations));
  s.emplace_back("stall_limit", std::to_string(schedule.stall_limit));
  s.emplace_back("calibration_samples", std::to_string(schedule.calibration_samples));
  s.emplace_back("restarts", std::to_string(schedule.restarts));
  s.emplace_back("segments_per_proposal", std::to_string(schedule.neighbor.segments_per_proposal));
  s.emplace_back("exhaustive", exhaustive ? "true" : "false");
  s.emplace_back("seed", std::to_string(seed));
  s.emplace_back("out", out.string());
  return s;
}

KernelSpec RunConfig::kernel() const {
  return KernelSpec::student_t(df, squared_integral, derive_seed(seed, 0x4b45524eULL));  // "KERN"
}

BandwidthOptions RunConfig::bandwidth() const {
  BandwidthOptions o;
  o.variance_scale = variance_scale;
  return o;
}

CorpusFormat RunConfig::resolved_format() const {
  if (format) return *format;
  if (std::filesystem::is_directory(corpus)) return CorpusFormat::directory;
  const auto ext = corpus.extension().string();
  if (ext == ".csv") return CorpusFormat::csv;
  return CorpusFormat::jsonl;
}

std::size_t RunConfig::resolved_threads() const { return threads ? threads : default_thread_count(); }

void RunConfig::validate(bool needs_corpus) const {
  if (needs_corpus) {
    if (corpus.empty()) throw ValidationError("no corpus given");
    if (!std::filesystem::exists(corpus)) {
      throw ValidationError("corpus path '" + corpus.string() + "' does not exist");
    }
  }
  if (m < 2) throw ValidationError("m must be >= 2");
  if (!(df > 2.0)) throw ValidationError("kernel df must be > 2 so the second moment exists");
  if (step < 1) throw ValidationError("step must be >= 1");
  schedule.validate();
}

void load_config_file(const std::filesystem::path& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config file '" + path.string() + "' cannot be read");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // strip a trailing comment unless the '#' sits inside quotes
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    const auto body = trim(line);
    if (body.empty() || body.front() == '[') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const auto key = trim(body.substr(0, eq));
    auto value = trim(body.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    try {
      config.set(key, value);
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (key == "corpus" && config.corpus.is_relative()) {
      config.corpus = path.parent_path() / config.corpus;
    }
  }
}

}  // namespace chronorder::cli
