#include "chronorder/cli/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chronorder/cli/run_config.hpp"
#include "chronorder/error.hpp"
#include "chronorder/evaluation.hpp"
#include "chronorder/report_io.hpp"
#include "chronorder/version.hpp"

namespace chronorder::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::uint64_t kInitStream = 0x494e4954ULL;      // "INIT"
constexpr std::uint64_t kAnnealStream = 0x414e4e45ULL;    // "ANNE"
constexpr std::uint64_t kBaselineStream = 0x42415345ULL;  // same stream run_replications uses

Provenance provenance(const RunConfig& config, const std::string& command) {
  Provenance p{{"tool", "chronorder"}, {"version", kVersion}, {"command", command}};
  for (auto& kv : config.settings()) p.push_back(std::move(kv));
  return p;
}

json meta_json(const Provenance& p) {
  json j = json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

fs::path output_path(const RunConfig& config, const std::string& name) {
  const fs::path dir = config.out.empty() ? fs::path(".") : config.out;
  fs::create_directories(dir);
  return dir / name;
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  const auto path = output_path(config, name);
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  return f;
}

void write_json_file(const RunConfig& config, const std::string& name, const std::string& text) {
  auto f = open_output(config, name);
  f << text << '\n';
}

Corpus load(const RunConfig& config) {
  config.validate(true);
  return load_corpus(config.corpus, config.resolved_format(), config.tokenize);
}

std::vector<std::string> read_order_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("order file '" + path.string() + "' cannot be read");
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    ids.push_back(line.substr(b, e - b + 1));
  }
  return ids;
}

// The documents named by an order file, in that order.
std::vector<Document> documents_in_order(const Corpus& corpus, const std::vector<std::string>& ids) {
  std::map<std::string, const Document*> by_id;
  for (const auto& d : corpus.documents()) by_id[d.id] = &d;
  if (ids.size() != corpus.size()) {
    throw ValidationError("order file lists " + std::to_string(ids.size()) + " ids but the corpus has " +
                          std::to_string(corpus.size()) + " documents");
  }
  std::vector<Document> docs;
  for (const auto& id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw ValidationError("order file names unknown document '" + id + "'");
    if (it->second == nullptr) throw ValidationError("order file repeats document '" + id + "'");
    docs.push_back(*it->second);
    it->second = nullptr;
  }
  return docs;
}

// Dated documents sorted by year; conflated per year unless in single mode,
// where duplicate years are refused.
std::vector<Document> documents_by_date(const Corpus& corpus, SampleMode mode) {
  if (!corpus.fully_dated()) throw ValidationError("date order needs every document to carry a date");
  std::vector<Document> docs =
      mode == SampleMode::conflated ? conflate_by_year(corpus).documents() : corpus.documents();
  std::stable_sort(docs.begin(), docs.end(),
                   [](const Document& a, const Document& b) { return *a.year < *b.year; });
  for (std::size_t i = 1; i < docs.size(); ++i) {
    if (*docs[i].year == *docs[i - 1].year) {
      throw ValidationError("documents '" + docs[i - 1].id + "' and '" + docs[i].id +
                            "' share the year " + std::to_string(*docs[i].year) +
                            "; use --mode conflated or supply --order");
    }
  }
  return docs;
}

struct SearchOutcome {
  OrderingResult result;
  std::string method;
};

SearchOutcome search(const MedianObjective& objective, const RunConfig& config) {
  const std::size_t m = objective.num_documents();
  const OrderObjective fn = [&](const Permutation& p) { return objective(p); };
  if (config.exhaustive) {
    if (m > kMaxExhaustiveDocuments) {
      throw ValidationError("--exhaustive supports at most " + std::to_string(kMaxExhaustiveDocuments) +
                            " documents, the corpus has " + std::to_string(m));
    }
    return {exhaustive_search(fn, m), "exhaustive"};
  }
  Rng rng(derive_seed(config.seed, kInitStream));
  const Permutation init = Permutation::random(m, rng);
  AnnealSchedule schedule = config.schedule;
  schedule.seed = derive_seed(config.seed, kAnnealStream);
  return {search_order(fn, init, schedule, config.resolved_threads()), "anneal"};
}

std::vector<std::string> ids_in_time_order(const TermDocumentCounts& counts, const Permutation& perm) {
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < perm.size(); ++k) ids.push_back(counts.document_ids()[perm[k] - 1]);
  return ids;
}

void require_documents(std::size_t m) {
  if (m < 3) throw ValidationError("ordering needs at least 3 documents, got " + std::to_string(m));
}

// ---------------------------------------------------------------------------

int cmd_ingest(const RunConfig& config, std::ostream& out) {
  const Corpus corpus = load(config);
  const auto counts = build_counts(corpus.documents(), config.min_docs, config.filter);
  std::size_t dated = 0;
  for (const auto& d : corpus.documents()) dated += d.year.has_value();

  out << "documents: " << corpus.size() << '\n'
      << "dated: " << dated << '\n';
  if (corpus.span()) out << "span: " << corpus.span()->first << "-" << corpus.span()->last << '\n';
  out << "tokens: " << corpus.total_tokens() << '\n'
      << "vocabulary: " << counts.unfiltered_vocabulary_size() << '\n'
      << "retained: " << counts.num_words() << " (min_docs=" << config.min_docs << ")\n";

  json j{{"meta", meta_json(provenance(config, "ingest"))},
         {"documents", corpus.size()},
         {"dated", dated},
         {"tokens", corpus.total_tokens()},
         {"vocabulary", counts.unfiltered_vocabulary_size()},
         {"retained", counts.num_words()},
         {"ids", counts.document_ids()}};
  if (corpus.span()) j["span"] = {corpus.span()->first, corpus.span()->last};
  write_json_file(config, "report.json", j.dump(2));
  return kExitOk;
}

int cmd_order(const RunConfig& config, std::ostream& out) {
  const Corpus corpus = load(config);
  require_documents(corpus.size());
  const auto counts = build_counts(corpus.documents(), config.min_docs, config.filter);
  const std::size_t m = counts.num_documents();
  const MedianObjective objective(counts, WeightScheme::uniform(m), config.kernel(), config.bandwidth());
  const auto [result, method] = search(objective, config);
  const auto order = ids_in_time_order(counts, result.best);
  const auto prov = provenance(config, "order");

  json j{{"meta", meta_json(prov)},
         {"method", method},
         {"documents", counts.document_ids()},
         {"order", order},
         {"permutation", result.best.order()},
         {"H_best", result.H_best},
         {"n_words", objective.num_words()},
         {"evaluations", result.evaluations},
         {"unique_evaluations", result.unique_evaluations},
         {"t_initial", result.t_initial},
         {"restart", result.restart}};
  if (corpus.fully_dated()) {
    std::vector<int> years;
    for (const auto& d : corpus.documents()) years.push_back(*d.year);
    auto sorted = years;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
      std::vector<int> ranks(m);
      for (std::size_t i = 0; i < m; ++i) {
        ranks[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), years[i]) - sorted.begin()) + 1;
      }
      j["abs_rho_vs_dates"] = spearman_abs(result.best, truth_permutation(ranks));
    }
  }
  write_json_file(config, "report.json", j.dump(2));
  {
    auto f = open_output(config, "trace.csv");
    write_trace_csv(f, result, prov);
  }
  {
    auto f = open_output(config, "bandwidths.csv");
    write_bandwidths_csv(f, *objective.evaluate(result.best, true).per_word, prov);
  }
  {
    auto f = open_output(config, "order.txt");
    for (const auto& id : order) f << id << '\n';
  }

  out << std::setprecision(10) << "H_best: " << result.H_best << '\n' << "order:";
  for (const auto& id : order) out << ' ' << id;
  out << '\n';
  if (j.contains("abs_rho_vs_dates")) out << "abs_rho_vs_dates: " << j["abs_rho_vs_dates"].get<double>() << '\n';
  return kExitOk;
}

int cmd_evaluate(const RunConfig& config, bool jsonl, std::ostream& out) {
  const Corpus corpus = load(config);
  if (config.reps == 0) throw ValidationError("reps must be >= 1");
  EvaluationConfig ec;
  ec.m = config.m;
  ec.step = config.step;
  ec.mode = config.mode;
  ec.reps = config.reps;
  ec.baseline_reps = config.baseline_reps;
  ec.min_docs = config.min_docs;
  ec.filter = config.filter;
  ec.schedule = config.schedule;
  ec.bandwidth = config.bandwidth();
  ec.master_seed = config.seed;
  ec.threads = config.resolved_threads();
  ec.exhaustive = config.exhaustive;
  const auto report = run_replications(corpus, ec, config.kernel());
  const auto prov = provenance(config, "evaluate");
  write_json_file(config, "report.json", evaluation_report_json(report, prov));
  if (jsonl) {
    auto f = open_output(config, "replications.jsonl");
    f << replications_jsonl(report);
  }
  out << std::setprecision(6) << "replications: " << config.reps << " (failed " << report.failures << ")\n"
      << "median |rho|: " << report.median_abs_rho << '\n'
      << "baseline median |rho|: " << report.baseline_median << '\n'
      << "rank sum: U=" << report.test.U << " p=" << format_p_value(report.test.p_value) << " ("
      << to_string(report.test.method) << ")\n";
  if (report.error_analysis) {
    out << "worst decile threshold: " << report.error_analysis->threshold
        << ", H_true >= H_est in " << report.error_analysis->fraction_true_at_least_est * 100.0 << "%\n";
  }
  return kExitOk;
}

int cmd_baseline(const RunConfig& config, std::ostream& out) {
  config.validate(false);
  Rng rng(derive_seed(config.seed, kBaselineStream));
  const auto baseline = random_baseline(config.m, config.reps, rng);
  json j{{"meta", meta_json(provenance(config, "baseline"))},
         {"m", config.m},
         {"reps", config.reps},
         {"median_abs_rho", baseline.median_abs_rho},
         {"sample", baseline.sample}};
  write_json_file(config, "report.json", j.dump(2));
  out << std::setprecision(6) << "baseline median |rho| (m=" << config.m << ", reps=" << config.reps
      << "): " << baseline.median_abs_rho << '\n';
  return kExitOk;
}

struct CurveOptions {
  std::string word;
  std::vector<double> bandwidths;
  std::size_t points = 101;
  fs::path order_file;
};

int cmd_curve(const RunConfig& config, const CurveOptions& opts, std::ostream& out) {
  const Corpus corpus = load(config);
  if (opts.points < 2) throw ValidationError("--points must be >= 2");
  for (const double h : opts.bandwidths) {
    if (!(h > 0.0)) throw ValidationError("bandwidths must be positive");
  }

  std::vector<Document> docs;
  bool dated_design = false;
  if (!opts.order_file.empty()) {
    docs = documents_in_order(corpus, read_order_file(opts.order_file));
  } else if (corpus.fully_dated()) {
    docs = conflate_by_year(corpus).documents();
    std::sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) { return *a.year < *b.year; });
    dated_design = true;
  } else {
    docs = corpus.documents();
  }
  if (docs.size() < 3) throw ValidationError("curve needs at least 3 design points");

  const auto counts = build_counts(docs, config.min_docs, config.filter);
  const auto word = counts.find_word(opts.word);
  if (!word) {
    const auto all = build_counts(docs, 1, config.filter);
    std::string msg = "word '" + opts.word + "' ";
    msg += all.find_word(opts.word) ? "occurs in fewer than " + std::to_string(config.min_docs) + " documents"
                                    : "is not in the vocabulary";
    const auto near = nearest_words(opts.word, counts.vocabulary());
    if (!near.empty()) {
      msg += "; nearest: ";
      for (std::size_t i = 0; i < near.size(); ++i) msg += (i ? ", " : "") + near[i];
    }
    throw ValidationError(msg);
  }

  const auto row = counts.dense_row(*word);
  std::vector<Observation> obs;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const double x = dated_design ? static_cast<double>(*docs[i].year) : static_cast<double>(i + 1);
    obs.push_back({x, static_cast<double>(row[i]), static_cast<double>(counts.totals()[i])});
  }
  const WordSeries series(opts.word, obs, dated_design ? DesignScale::year : DesignScale::rank);
  const KernelSpec spec = config.kernel();
  const auto est = amise_bandwidth(series, WeightScheme::uniform(docs.size()), spec, config.bandwidth());

  const double lo = obs.front().x, hi = obs.back().x;
  const auto prov = provenance(config, "curve");
  auto f = open_output(config, "curve.csv");
  write_csv_header_comment(f, prov);
  f << "# word=" << opts.word << '\n' << "series,h,t,pi\n" << std::setprecision(17);
  auto emit_curve = [&](const std::string& name, double h) {
    for (std::size_t k = 0; k < opts.points; ++k) {
      const double t = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(opts.points - 1);
      f << name << ',' << h << ',' << t << ',' << local_constant_pi(series, t, h, spec) << '\n';
    }
  };
  for (const double h : opts.bandwidths) {
    std::ostringstream name;
    name << "h=" << h;
    emit_curve(name.str(), h);
  }
  emit_curve("rule_of_thumb", est.h_amise);
  for (const auto& o : obs) f << "observed,," << o.x << ',' << o.y / o.r << '\n';

  out << std::setprecision(6) << "word: " << opts.word << '\n'
      << "rule-of-thumb h: " << est.h_amise << (est.degenerate ? " (degenerate, capped)" : est.capped ? " (capped)" : "")
      << '\n'
      << "pooled proportion: " << series.pooled_proportion() << '\n';
  return kExitOk;
}

struct WordsOptions {
  fs::path order_file;
  double freq_pct = 50.0;
  double prob_pct = 88.0;
};

int cmd_words(const RunConfig& config, const WordsOptions& opts, std::ostream& out) {
  const Corpus corpus = load(config);
  std::vector<Document> docs;
  std::string source;
  if (!opts.order_file.empty()) {
    docs = documents_in_order(corpus, read_order_file(opts.order_file));
    source = "file";
  } else if (corpus.fully_dated()) {
    docs = documents_by_date(corpus, config.mode);
    source = "dates";
  } else {
    docs = corpus.documents();
    source = "search";
  }
  require_documents(docs.size());
  const auto counts = build_counts(docs, config.min_docs, config.filter);
  const std::size_t m = counts.num_documents();
  const auto scheme = WeightScheme::uniform(m);
  Permutation perm = Permutation::identity(m);
  if (source == "search") {
    const MedianObjective objective(counts, scheme, config.kernel(), config.bandwidth());
    perm = search(objective, config).result.best;
  }
  const auto report =
      informative_words(counts, perm, opts.freq_pct, opts.prob_pct, config.kernel(), scheme, config.bandwidth());
  auto prov = provenance(config, "words");
  prov.emplace_back("order_source", source);
  prov.emplace_back("freq_percentile", std::to_string(opts.freq_pct));
  prov.emplace_back("prob_percentile", std::to_string(opts.prob_pct));
  prov.emplace_back("freq_threshold", std::to_string(report.freq_threshold));
  prov.emplace_back("prob_threshold", std::to_string(report.prob_threshold));
  {
    auto f = open_output(config, "words.csv");
    write_words_csv(f, report, prov);
  }
  out << "order from " << source << "; " << report.candidates << " candidates, " << report.after_frequency
      << " after the frequency filter, " << report.words.size() << " informative\n";
  const std::size_t shown = std::min<std::size_t>(report.words.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& w = report.words[i];
    out << std::setprecision(4) << "  " << w.word << "  score=" << w.max_probability << "  h=" << w.h_amise
        << "  freq=" << w.frequency << '\n';
  }
  return kExitOk;
}

std::string find_config_arg(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

}  // namespace

std::vector<std::string> nearest_words(const std::string& word, const std::vector<std::string>& vocabulary,
                                       std::size_t count) {
  auto distance = [](const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
      cur[0] = i;
      for (std::size_t j = 1; j <= b.size(); ++j) {
        cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
      }
      std::swap(prev, cur);
    }
    return prev[b.size()];
  };
  std::vector<std::pair<std::size_t, std::string>> scored;
  scored.reserve(vocabulary.size());
  for (const auto& v : vocabulary) scored.emplace_back(distance(word, v), v);
  const std::size_t n = std::min(count, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(scored[i].second);
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CurveOptions curve;
  WordsOptions words;
  bool jsonl = false;

  CLI::App app{"Orders undated documents in time by maximising the median rule-of-thumb bandwidth"};
  app.name("chronorder");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  auto setting = [&config](CLI::App* sub, const std::string& flag, const std::string& key,
                           const std::string& help) {
    return sub->add_option_function<std::string>(
        flag, [&config, key](const std::string& v) { config.set(key, v); }, help);
  };
  auto common = [&](CLI::App* sub, bool with_corpus) {
    sub->add_option("--config", "TOML-style key = value file; flags override it");
    setting(sub, "--seed", "seed", "master seed");
    setting(sub, "--out", "out", "output directory (default: current directory)");
    setting(sub, "--threads", "threads", "worker threads (default: all cores)");
    if (!with_corpus) return;
    setting(sub, "corpus,--corpus", "corpus", "corpus file or directory");
    setting(sub, "--format", "format", "jsonl, csv, directory or auto");
    setting(sub, "--mode", "mode", "conflated or single");
    setting(sub, "--min-docs", "min_docs", "keep words found in at least this many documents");
    setting(sub, "--filter", "filter", "documents (distinct documents) or occurrences");
    setting(sub, "--df", "df", "Student-t kernel degrees of freedom");
    setting(sub, "--squared-integral", "squared_integral", "quadrature or monte_carlo");
    setting(sub, "--variance-scale", "variance_scale", "proportion or count");
    sub->add_flag_callback("--keep-case", [&config] { config.tokenize.lowercase = false; },
                           "do not lowercase tokens");
    sub->add_flag_callback("--keep-punctuation", [&config] { config.tokenize.strip_punctuation = false; },
                           "do not strip ASCII punctuation");
  };
  auto schedule = [&](CLI::App* sub) {
    setting(sub, "--t-initial", "t_initial", "initial temperature (default: calibrated)");
    setting(sub, "--cooling", "cooling", "geometric cooling factor");
    setting(sub, "--proposals-per-temp", "proposals_per_temp", "proposals per temperature level");
    setting(sub, "--max-evaluations", "max_evaluations", "evaluation budget per chain");
    setting(sub, "--stall-limit", "stall_limit", "stop after this many evaluations without improvement");
    setting(sub, "--restarts", "restarts", "independent chains");
    setting(sub, "--calibration-samples", "calibration_samples", "random orders used to set the initial temperature");
    setting(sub, "--segments", "segments_per_proposal", "segment moves per proposal");
    sub->add_flag_callback("--exhaustive", [&config] { config.exhaustive = true; },
                           "enumerate every order instead of annealing (at most 8 documents)");
  };

  auto* ingest = app.add_subcommand("ingest", "load a corpus and summarise it");
  common(ingest, true);

  auto* order = app.add_subcommand("order", "estimate the temporal order of every document in a corpus");
  common(order, true);
  schedule(order);

  auto* evaluate = app.add_subcommand("evaluate", "replicated ordering of sampled subsets of a dated corpus");
  common(evaluate, true);
  schedule(evaluate);
  setting(evaluate, "--reps", "reps", "replications");
  setting(evaluate, "--m", "m", "documents per replication");
  setting(evaluate, "--step", "step", "years between systematic sample targets");
  setting(evaluate, "--baseline-reps", "baseline_reps", "random orders for the baseline (default: reps)");
  evaluate->add_flag("--jsonl", jsonl, "also write replications.jsonl");

  auto* baseline = app.add_subcommand("baseline", "median |rho| of random orders against the truth");
  common(baseline, false);
  setting(baseline, "--m", "m", "documents");
  setting(baseline, "--reps", "reps", "random orders");

  auto* curve_cmd = app.add_subcommand("curve", "locally constant probability curve of one word");
  common(curve_cmd, true);
  curve_cmd->add_option("--word", curve.word, "word to trace")->required();
  curve_cmd->add_option("--bandwidths", curve.bandwidths, "extra bandwidths, comma separated")->delimiter(',');
  curve_cmd->add_option("--points", curve.points, "curve samples per bandwidth");
  curve_cmd->add_option("--order", curve.order_file, "file of document ids in time order");

  auto* words_cmd = app.add_subcommand("words", "informative words under an ordering");
  common(words_cmd, true);
  schedule(words_cmd);
  words_cmd->add_option("--order", words.order_file, "file of document ids in time order");
  words_cmd->add_option("--freq-pct", words.freq_pct, "frequency percentile filter");
  words_cmd->add_option("--prob-pct", words.prob_pct, "maximum-probability percentile filter");

  try {
    if (const auto path = find_config_arg(args); !path.empty()) load_config_file(path, config);

    std::vector<std::string> argv_store{"chronorder"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }

    if (ingest->parsed()) return cmd_ingest(config, out);
    if (order->parsed()) return cmd_order(config, out);
    if (evaluate->parsed()) return cmd_evaluate(config, jsonl, out);
    if (baseline->parsed()) return cmd_baseline(config, out);
    if (curve_cmd->parsed()) return cmd_curve(config, curve, out);
    if (words_cmd->parsed()) return cmd_words(config, words, out);
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace chronorder::cli
