// Command-line front end: batch correction, evaluation, metric/judgment
// correlation, significance testing, and dataset validation.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <zerofec/zerofec.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitBackend = 3;

using nlohmann::json;
using nlohmann::ordered_json;

// Owns the optional output file so commands can write to one std::ostream.
class OutputSink {
public:
  explicit OutputSink(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw zerofec::ConfigError("cannot open output file: " + path);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw zerofec::ConfigError("cannot open config file: " + path);
  json parsed = json::parse(in, nullptr, false);
  if (parsed.is_discarded())
    throw zerofec::ConfigError("config file is not valid JSON: " + path);
  if (!parsed.is_object())
    throw zerofec::ConfigError("config file must hold a JSON object: " + path);
  return parsed;
}

std::vector<std::pair<std::size_t, json>> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw zerofec::ParseError(0, "cannot open input file: " + path);
  std::vector<std::pair<std::size_t, json>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (zerofec::is_blank(line)) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded())
      throw zerofec::ParseError(lineno, "not valid JSON");
    if (!obj.is_object())
      throw zerofec::ParseError(lineno, "line is not an object");
    rows.emplace_back(lineno, std::move(obj));
  }
  return rows;
}

std::string string_field(const json& obj, std::initializer_list<const char*> names,
                         std::size_t line) {
  for (const char* name : names) {
    auto it = obj.find(name);
    if (it == obj.end()) continue;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<long long>());
    throw zerofec::ParseError(line,
                              std::string("field '") + name + "' is not a string");
  }
  throw zerofec::ParseError(
      line, std::string("missing field '") + *names.begin() + "'");
}

std::string evidence_field(const json& obj, std::size_t line) {
  auto it = obj.find("evidence");
  if (it == obj.end()) throw zerofec::ParseError(line, "missing field 'evidence'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_array()) {
    std::string joined;
    for (const auto& part : *it) {
      if (!part.is_string())
        throw zerofec::ParseError(line, "field 'evidence' mixes non-strings");
      if (!joined.empty()) joined += " ";
      joined += part.get<std::string>();
    }
    return joined;
  }
  throw zerofec::ParseError(line, "field 'evidence' is not a string or array");
}

std::vector<zerofec::CorrectionTask> load_tasks(const std::string& path) {
  std::vector<zerofec::CorrectionTask> tasks;
  for (const auto& [lineno, obj] : read_jsonl(path)) {
    zerofec::CorrectionTask task;
    task.task_id = string_field(obj, {"task_id", "id"}, lineno);
    task.claim = string_field(obj, {"claim"}, lineno);
    task.evidence = evidence_field(obj, lineno);
    tasks.push_back(std::move(task));
  }
  return tasks;
}

double number_field(const json& obj, const std::string& name, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end())
    throw zerofec::ParseError(line, "missing field '" + name + "'");
  if (!it->is_number())
    throw zerofec::ParseError(line, "field '" + name + "' is not a number");
  return it->get<double>();
}

// ---- configuration -------------------------------------------------------

struct BackendFlags {
  std::string qg_url, qa_url, q2c_url, nli_url;
  std::string mock_path;
  std::string cache_path;
};

zerofec::PipelineConfig pipeline_config_from_json(const json& cfg) {
  zerofec::PipelineConfig pc;
  if (cfg.contains("beam_width")) pc.beam_width = cfg.at("beam_width").get<int>();
  if (cfg.contains("lowercase_qa_prompt"))
    pc.lowercase_qa_prompt = cfg.at("lowercase_qa_prompt").get<bool>();
  if (cfg.contains("dedupe")) pc.dedupe = cfg.at("dedupe").get<bool>();
  if (cfg.contains("annotator")) pc.annotator = cfg.at("annotator").get<std::string>();
  if (cfg.contains("max_candidates") && !cfg.at("max_candidates").is_null())
    pc.max_candidates = cfg.at("max_candidates").get<std::size_t>();
  if (cfg.contains("negation_lexicon")) {
    pc.negation_lexicon.clear();
    for (const auto& term : cfg.at("negation_lexicon"))
      pc.negation_lexicon.insert(term.get<std::string>());
  }
  if (cfg.contains("templates")) {
    const json& t = cfg.at("templates");
    if (t.contains("qg")) pc.qg_template = t.at("qg").get<std::string>();
    if (t.contains("qa")) pc.qa_template = t.at("qa").get<std::string>();
    if (t.contains("qa2claim"))
      pc.qa2claim_template = t.at("qa2claim").get<std::string>();
  }
  if (cfg.contains("scorer")) {
    const json& s = cfg.at("scorer");
    if (s.contains("stemming")) pc.scorer.stemming = s.at("stemming").get<bool>();
    if (s.contains("components")) {
      pc.scorer.components.clear();
      for (const auto& c : s.at("components"))
        pc.scorer.components.push_back(
            {c.at("name").get<std::string>(),
             c.contains("weight") ? c.at("weight").get<double>() : 1.0});
    }
  }
  zerofec::validate_scorer_spec(pc.scorer);
  return pc;
}

zerofec::FieldMap field_map_from_json(const json& cfg) {
  zerofec::FieldMap fields;
  if (!cfg.contains("fields")) return fields;
  const json& f = cfg.at("fields");
  if (f.contains("id")) fields.id = f.at("id").get<std::string>();
  if (f.contains("claim")) fields.claim = f.at("claim").get<std::string>();
  if (f.contains("evidence")) fields.evidence = f.at("evidence").get<std::string>();
  if (f.contains("gold_correction"))
    fields.gold_correction = f.at("gold_correction").get<std::string>();
  if (f.contains("label")) fields.label = f.at("label").get<std::string>();
  return fields;
}

std::map<std::string, std::string> string_map(const json& obj,
                                              const std::string& what) {
  if (!obj.is_object())
    throw zerofec::ConfigError("mock section '" + what + "' must be an object");
  std::map<std::string, std::string> table;
  for (const auto& [key, value] : obj.items()) {
    if (!value.is_string())
      throw zerofec::ConfigError("mock section '" + what +
                                 "' maps to a non-string");
    table[key] = value.get<std::string>();
  }
  return table;
}

std::shared_ptr<zerofec::TextGenerator> mock_generator(const json& fixture,
                                                       const std::string& role) {
  if (!fixture.contains(role))
    return std::make_shared<zerofec::EchoGenerator>(role);
  return std::make_shared<zerofec::KeyedGenerator>(
      role, string_map(fixture.at(role), role));
}

std::shared_ptr<zerofec::EntailmentScorer> mock_entailment(const json& fixture) {
  if (!fixture.contains("entailment"))
    return std::make_shared<zerofec::OverlapEntailment>();
  const json& e = fixture.at("entailment");
  if (e.contains("constant"))
    return std::make_shared<zerofec::ConstantEntailment>(
        e.at("constant").get<double>());
  if (e.contains("overlap"))
    return std::make_shared<zerofec::OverlapEntailment>();
  if (e.contains("by_hypothesis")) {
    std::map<std::string, double> table;
    for (const auto& [key, value] : e.at("by_hypothesis").items())
      table[key] = value.get<double>();
    std::optional<double> fallback;
    if (e.contains("default")) fallback = e.at("default").get<double>();
    return std::make_shared<zerofec::TableEntailment>(table, fallback);
  }
  throw zerofec::ConfigError(
      "mock entailment needs 'constant', 'overlap' or 'by_hypothesis'");
}

std::string config_backend_value(const json& cfg, const std::string& role,
                                 const std::string& key) {
  if (cfg.contains("backends")) {
    const json& b = cfg.at("backends");
    if (b.contains(role) && b.at(role).contains(key))
      return b.at(role).at(key).get<std::string>();
  }
  return "";
}

std::shared_ptr<zerofec::TextGenerator> rules_backend(const std::string& url) {
  std::string spec = url.substr(std::string("rules").size());
  if (!spec.empty() && spec.front() == ':') spec.erase(0, 1);
  if (spec.empty())
    return std::make_shared<zerofec::BooleanRulesBackend>();
  return std::make_shared<zerofec::BooleanRulesBackend>(
      zerofec::VerbLexicon::from_dir(spec));
}

zerofec::BackendSet build_backends(const json& cfg, const BackendFlags& flags,
                                   bool need_entailment) {
  zerofec::BackendSet set;
  if (!flags.mock_path.empty()) {
    json fixture = read_json_file(flags.mock_path);
    set.qg = mock_generator(fixture, "qg");
    set.qa = mock_generator(fixture, "qa");
    if (fixture.contains("q2c_rules") && fixture.at("q2c_rules").get<bool>())
      set.qa2claim = std::make_shared<zerofec::BooleanRulesBackend>();
    else
      set.qa2claim = mock_generator(fixture, "q2c");
    set.entailment = mock_entailment(fixture);
  } else {
    auto resolve = [&](const std::string& flag, const std::string& role) {
      return flag.empty() ? config_backend_value(cfg, role, "url") : flag;
    };
    std::string qg_url = resolve(flags.qg_url, "qg");
    std::string qa_url = resolve(flags.qa_url, "qa");
    std::string q2c_url = resolve(flags.q2c_url, "q2c");
    std::string nli_url = resolve(flags.nli_url, "nli");
    if (qg_url.empty() || qa_url.empty() || q2c_url.empty())
      throw zerofec::ConfigError(
          "qg, qa and q2c backends need URLs (flags, env vars or config), "
          "or pass --mock <fixture>");
    auto model = [&](const std::string& role, const char* fallback) {
      std::string m = config_backend_value(cfg, role, "model");
      return m.empty() ? std::string(fallback) : m;
    };
    set.qg = std::make_shared<zerofec::HttpGenerator>("qg", qg_url,
                                                      model("qg", "qg"));
    set.qa = std::make_shared<zerofec::HttpGenerator>("qa", qa_url,
                                                      model("qa", "qa"));
    if (q2c_url.rfind("rules", 0) == 0) {
      set.qa2claim = rules_backend(q2c_url);
    } else {
      set.qa2claim = std::make_shared<zerofec::HttpGenerator>(
          "qa2claim", q2c_url, model("q2c", "qa2claim"));
    }
    if (need_entailment) {
      if (nli_url.empty())
        throw zerofec::ConfigError(
            "the scorer includes entailment; give --backend.nli.url, "
            "ZEROFEC_NLI_URL or config backends.nli.url");
      set.entailment = std::make_shared<zerofec::HttpEntailment>("nli", nli_url);
    }
  }

  std::string cache_path = flags.cache_path;
  if (cache_path.empty() && cfg.contains("cache"))
    cache_path = cfg.at("cache").get<std::string>();
  if (!cache_path.empty()) {
    auto cache = std::make_shared<zerofec::ResponseCache>(cache_path);
    set.qg = std::make_shared<zerofec::CachedGenerator>(set.qg, cache);
    set.qa = std::make_shared<zerofec::CachedGenerator>(set.qa, cache);
    set.qa2claim = std::make_shared<zerofec::CachedGenerator>(set.qa2claim, cache);
    if (set.entailment)
      set.entailment =
          std::make_shared<zerofec::CachedEntailment>(set.entailment, cache);
  }
  return set;
}

// ---- commands ------------------------------------------------------------

int cmd_correct(const std::string& config_path, const std::string& input,
                const std::string& output, const BackendFlags& flags,
                int parallelism, bool fail_fast) {
  json cfg = config_path.empty() ? json::object() : read_json_file(config_path);
  zerofec::PipelineConfig pc = pipeline_config_from_json(cfg);
  zerofec::BackendSet backends =
      build_backends(cfg, flags, pc.scorer.has("entailment"));
  OutputSink sink(output);

  std::vector<zerofec::CorrectionTask> tasks;
  try {
    tasks = load_tasks(input);
  } catch (const zerofec::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitData;
  }

  std::vector<zerofec::TaskResult> results;
  try {
    results = zerofec::run_batch(tasks, backends, pc, parallelism, fail_fast);
  } catch (const zerofec::BackendError& e) {
    std::cerr << "backend failure: " << e.what();
    if (!e.provenance().empty()) std::cerr << " (" << e.provenance() << ")";
    std::cerr << "\n";
    return kExitBackend;
  }

  std::size_t edited = 0, errors = 0;
  for (const zerofec::TaskResult& r : results) {
    sink.stream() << zerofec::serialize_result_line(r) << "\n";
    if (r.error) ++errors;
    else if (r.output->edited) ++edited;
  }
  sink.stream().flush();
  std::cerr << "processed " << results.size() << ", edited " << edited
            << ", errors " << errors << "\n";
  return kExitOk;
}

int cmd_evaluate(const std::string& input, const std::string& output) {
  std::vector<zerofec::EvalRecord> records;
  std::map<std::string, std::pair<double, std::size_t>> extra;
  try {
    for (const auto& [lineno, obj] : read_jsonl(input)) {
      zerofec::EvalRecord rec;
      rec.input = string_field(obj, {"input", "claim"}, lineno);
      rec.output = string_field(obj, {"output", "correction"}, lineno);
      if (obj.contains("references") && obj.at("references").is_array()) {
        for (const auto& ref : obj.at("references"))
          rec.references.push_back(ref.get<std::string>());
      } else {
        rec.references.push_back(
            string_field(obj, {"reference", "gold_correction"}, lineno));
      }
      records.push_back(std::move(rec));
      for (const auto& [key, value] : obj.items())
        if (value.is_number())
          extra[key].first += value.get<double>(), ++extra[key].second;
    }
  } catch (const zerofec::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitData;
  }

  double sari_pct;
  try {
    sari_pct = zerofec::corpus_sari(records);
  } catch (const zerofec::Error& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kExitData;
  }

  ordered_json report;
  report["count"] = records.size();
  report["sari"] = sari_pct;
  if (!extra.empty()) {
    ordered_json means;
    for (const auto& [key, acc] : extra)
      means[key] = acc.first / static_cast<double>(acc.second);
    report["metrics"] = std::move(means);
  }
  OutputSink sink(output);
  sink.stream() << report.dump() << "\n";
  sink.stream().flush();
  std::cerr << "SARI " << sari_pct << " over " << records.size()
            << " records\n";
  for (const auto& [key, acc] : extra)
    std::cerr << "  " << key << " mean "
              << acc.first / static_cast<double>(acc.second) << " over "
              << acc.second << " records\n";
  return kExitOk;
}

int cmd_correlate(const std::string& input, const std::string& output,
                  const std::vector<std::string>& metrics,
                  const std::vector<std::string>& dimensions) {
  std::vector<std::pair<std::size_t, json>> rows;
  try {
    rows = read_jsonl(input);
  } catch (const zerofec::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitData;
  }
  auto column = [&](const std::string& name) {
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& [lineno, obj] : rows)
      values.push_back(number_field(obj, name, lineno));
    return values;
  };

  OutputSink sink(output);
  std::cerr << "tau-b over " << rows.size() << " rows\n";
  try {
    for (const std::string& metric : metrics) {
      std::vector<double> mcol = column(metric);
      for (const std::string& dim : dimensions) {
        std::vector<double> hcol = column(dim);
        ordered_json rec;
        rec["metric"] = metric;
        rec["dimension"] = dim;
        try {
          double tau = zerofec::kendall_tau(mcol, hcol);
          rec["tau"] = tau;
          std::cerr << "  " << metric << " vs " << dim << ": " << tau << "\n";
        } catch (const zerofec::DegenerateInput& e) {
          rec["error"] = e.what();
          std::cerr << "  " << metric << " vs " << dim << ": undefined ("
                    << e.what() << ")\n";
        }
        sink.stream() << rec.dump() << "\n";
      }
    }
  } catch (const zerofec::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitData;
  }
  sink.stream().flush();
  return kExitOk;
}

int cmd_significance(const std::string& sys_a, const std::string& sys_b,
                     const std::string& output,
                     std::vector<std::string> fields, std::size_t resamples,
                     std::uint64_t seed) {
  std::vector<std::pair<std::size_t, json>> rows_a, rows_b;
  try {
    rows_a = read_jsonl(sys_a);
    rows_b = read_jsonl(sys_b);
  } catch (const zerofec::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitData;
  }
  if (rows_a.size() != rows_b.size()) {
    std::cerr << "input error: " << sys_a << " has " << rows_a.size()
              << " records but " << sys_b << " has " << rows_b.size() << "\n";
    return kExitData;
  }
  if (rows_a.empty()) {
    std::cerr << "input error: no records\n";
    return kExitData;
  }
  if (fields.empty()) {
    for (const auto& [key, value] : rows_a.front().second.items())
      if (value.is_number() && rows_b.front().second.contains(key) &&
          rows_b.front().second.at(key).is_number())
        fields.push_back(key);
    if (fields.empty()) {
      std::cerr << "input error: no shared numeric fields\n";
      return kExitData;
    }
  }

  OutputSink sink(output);
  try {
    for (const std::string& field : fields) {
      std::vector<double> a, b;
      for (const auto& [lineno, obj] : rows_a)
        a.push_back(number_field(obj, field, lineno));
      for (const auto& [lineno, obj] : rows_b)
        b.push_back(number_field(obj, field, lineno));
      double mean_a = 0.0, mean_b = 0.0;
      for (double v : a) mean_a += v;
      for (double v : b) mean_b += v;
      mean_a /= static_cast<double>(a.size());
      mean_b /= static_cast<double>(b.size());
      double p = zerofec::paired_bootstrap(a, b, resamples, seed);
      bool significant = p < 0.01;
      ordered_json rec;
      rec["field"] = field;
      rec["mean_a"] = mean_a;
      rec["mean_b"] = mean_b;
      rec["delta"] = mean_a - mean_b;
      rec["p_value"] = p;
      rec["significant"] = significant;
      sink.stream() << rec.dump() << "\n";
      std::cerr << "  " << field << ": delta " << mean_a - mean_b << ", p "
                << p << (significant ? " *" : "") << "\n";
    }
  } catch (const zerofec::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitData;
  }
  sink.stream().flush();
  return kExitOk;
}

int cmd_validate(const std::string& config_path, const std::string& input,
                 const std::string& output) {
  json cfg = config_path.empty() ? json::object() : read_json_file(config_path);
  zerofec::FieldMap fields = field_map_from_json(cfg);
  zerofec::LoadResult loaded;
  try {
    loaded = zerofec::load_dataset_file(input, fields);
  } catch (const zerofec::ConfigError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitData;
  }
  zerofec::DatasetStats stats = zerofec::dataset_stats(loaded.records);
  for (const zerofec::LoadIssue& issue : loaded.issues)
    std::cerr << "invalid record: " << issue.detail << "\n";

  ordered_json report;
  report["total"] = stats.total;
  report["supports"] = stats.supports;
  report["refutes"] = stats.refutes;
  report["issues"] = loaded.issues.size();
  OutputSink sink(output);
  sink.stream() << report.dump() << "\n";
  sink.stream().flush();
  std::cerr << "total " << stats.total << ", supports " << stats.supports
            << ", refutes " << stats.refutes << ", issues "
            << loaded.issues.size() << "\n";
  return loaded.issues.empty() ? kExitOk : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-shot factual error correction"};
  app.require_subcommand(1);

  std::string config_path, input, output;
  BackendFlags flags;
  int parallelism = 1;
  bool fail_fast = false;

  CLI::App* correct = app.add_subcommand(
      "correct", "correct claims against evidence, one trace record each");
  correct->add_option("--config", config_path, "JSON config file");
  correct->add_option("--input", input, "JSONL of {task_id, claim, evidence}")
      ->required();
  correct->add_option("--output", output, "output path (default stdout)");
  correct->add_option("--parallelism", parallelism, "worker threads")
      ->check(CLI::PositiveNumber);
  correct->add_flag("--fail-fast", fail_fast,
                    "stop on the first backend failure (exit 3)");
  correct->add_option("--mock", flags.mock_path,
                      "fixture JSON driving deterministic mock backends");
  correct->add_option("--cache", flags.cache_path, "response cache file");
  correct->add_option("--backend.qg.url", flags.qg_url, "question generator")
      ->envname("ZEROFEC_QG_URL");
  correct->add_option("--backend.qa.url", flags.qa_url, "question answerer")
      ->envname("ZEROFEC_QA_URL");
  correct
      ->add_option("--backend.q2c.url", flags.q2c_url,
                   "QA-to-claim converter, or rules[:resource-dir]")
      ->envname("ZEROFEC_Q2C_URL");
  correct->add_option("--backend.nli.url", flags.nli_url, "entailment scorer")
      ->envname("ZEROFEC_NLI_URL");

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "score corrections against references (SARI, percent)");
  std::string eval_input, eval_output;
  evaluate
      ->add_option("--input", eval_input,
                   "JSONL of {input, output, references}")
      ->required();
  evaluate->add_option("--output", eval_output, "report path (default stdout)");

  CLI::App* correlate = app.add_subcommand(
      "correlate", "Kendall tau-b between metric and judgment columns");
  std::string corr_input, corr_output;
  std::vector<std::string> corr_metrics, corr_dimensions;
  correlate->add_option("--input", corr_input, "JSONL with numeric columns")
      ->required();
  correlate->add_option("--output", corr_output, "record path (default stdout)");
  correlate->add_option("--metrics", corr_metrics, "metric column names")
      ->required()
      ->delimiter(',');
  correlate->add_option("--human", corr_dimensions, "judgment column names")
      ->required()
      ->delimiter(',');

  CLI::App* significance = app.add_subcommand(
      "significance", "paired bootstrap test between two systems' scores");
  std::string sig_a, sig_b, sig_output;
  std::vector<std::string> sig_fields;
  std::size_t sig_resamples = 10000;
  std::uint64_t sig_seed = 0;
  significance->add_option("--sys-a", sig_a, "first system's JSONL")->required();
  significance->add_option("--sys-b", sig_b, "second system's JSONL")->required();
  significance->add_option("--output", sig_output, "record path (default stdout)");
  significance
      ->add_option("--fields", sig_fields,
                   "score fields (default: shared numeric fields)")
      ->delimiter(',');
  significance->add_option("--resamples", sig_resamples, "bootstrap resamples")
      ->check(CLI::PositiveNumber);
  significance->add_option("--seed", sig_seed, "bootstrap seed");

  CLI::App* validate = app.add_subcommand(
      "validate", "check dataset invariants and print label statistics");
  std::string val_config, val_input, val_output;
  validate->add_option("--config", val_config, "JSON config file (field map)");
  validate->add_option("--input", val_input, "dataset JSONL")->required();
  validate->add_option("--output", val_output, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (correct->parsed())
      return cmd_correct(config_path, input, output, flags, parallelism,
                         fail_fast);
    if (evaluate->parsed()) return cmd_evaluate(eval_input, eval_output);
    if (correlate->parsed())
      return cmd_correlate(corr_input, corr_output, corr_metrics,
                           corr_dimensions);
    if (significance->parsed())
      return cmd_significance(sig_a, sig_b, sig_output, sig_fields,
                              sig_resamples, sig_seed);
    if (validate->parsed()) return cmd_validate(val_config, val_input, val_output);
  } catch (const zerofec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const zerofec::TemplateError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const zerofec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
