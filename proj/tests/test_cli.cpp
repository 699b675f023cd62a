// Drives the installed binary end to end: every subcommand, the exit-code
// contract (0 ok, 1 config, 2 data, 3 backend under --fail-fast), and
// byte-identical output across parallelism, reruns and cache hits.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <zerofec/metrics.hpp>
#include <zerofec/mocks.hpp>
#include <zerofec/pipeline.hpp>

#include "corpus.hpp"
#include "showcase.hpp"

using Catch::Matchers::ContainsSubstring;
using nlohmann::json;

namespace {

using namespace zerofec_test;

std::filesystem::path work_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("zerofec_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::filesystem::path tmp(const std::string& name) {
  return work_dir() / name;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spit(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<json>& rows) {
  std::ostringstream out;
  for (const json& row : rows) out << row.dump() << "\n";
  spit(path, out.str());
}

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  auto out_path = tmp("stdout." + std::to_string(counter));
  auto err_path = tmp("stderr." + std::to_string(counter));
  ++counter;
  std::string cmd = std::string("'") + ZEROFEC_CLI_PATH + "' " + args + " > '" +
                    out_path.string() + "' 2> '" + err_path.string() + "'";
  int raw = std::system(cmd.c_str());
  REQUIRE(raw != -1);
  CliResult result;
  result.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

// The showcase chains as a --mock fixture; entailment mirrors
// miscalibrated_oracle().
std::filesystem::path showcase_fixture() {
  static const std::filesystem::path path = [] {
    json fixture;
    fixture["qg"] = showcase_qg_table();
    fixture["qa"] = showcase_qa_table();
    fixture["q2c"] = showcase_q2c_table();
    fixture["entailment"] = {
        {"by_hypothesis",
         {{kSpindleFix, 0.0165}, {kNearCopy, 0.8867}, {kSitcomFix, 0.7222}}},
        {"default", 0.25}};
    auto p = tmp("showcase_fixture.json");
    spit(p, fixture.dump());
    return p;
  }();
  return path;
}

std::filesystem::path sitcom_input() {
  static const std::filesystem::path path = [] {
    auto p = tmp("sitcom.jsonl");
    write_jsonl(p, {{{"task_id", "sitcom"},
                     {"claim", kSitcomClaim},
                     {"evidence", kSitcomEvidence}}});
    return p;
  }();
  return path;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("correct with mock backends matches the library byte for byte",
          "[cli]") {
  CliResult r = run_cli("correct --input '" + sitcom_input().string() +
                        "' --mock '" + showcase_fixture().string() + "'");
  REQUIRE(r.code == 0);
  CHECK(r.err == "processed 1, edited 1, errors 0\n");

  zerofec::BackendSet set = scripted_backends();
  set.entailment = miscalibrated_oracle();
  std::vector<zerofec::TaskResult> results = zerofec::run_batch(
      {sitcom_task()}, set, zerofec::PipelineConfig{}, 1, false);
  REQUIRE(results.size() == 1);
  CHECK(r.out == zerofec::serialize_result_line(results[0]) + "\n");

  json record = json::parse(r.out);
  CHECK(record.at("task_id") == "sitcom");
  CHECK(record.at("correction") == kSitcomFix);
  CHECK(record.at("edited") == true);
  CHECK(record.at("winner_index") == 5);
  CHECK(record.at("trace").size() == 10);
}

TEST_CASE("correct writes the same bytes to stdout and --output", "[cli]") {
  auto out_file = tmp("sitcom_out.jsonl");
  CliResult to_stdout = run_cli("correct --input '" + sitcom_input().string() +
                                "' --mock '" + showcase_fixture().string() +
                                "'");
  CliResult to_file = run_cli("correct --input '" + sitcom_input().string() +
                              "' --mock '" + showcase_fixture().string() +
                              "' --output '" + out_file.string() + "'");
  REQUIRE(to_stdout.code == 0);
  REQUIRE(to_file.code == 0);
  CHECK(to_file.out.empty());
  CHECK(slurp(out_file) == to_stdout.out);
}

TEST_CASE("correct accepts the id alias and integer ids", "[cli]") {
  auto input = tmp("alias.jsonl");
  write_jsonl(input, {{{"id", 7},
                       {"claim", kSitcomClaim},
                       {"evidence", kSitcomEvidence}}});
  CliResult r = run_cli("correct --input '" + input.string() + "' --mock '" +
                        showcase_fixture().string() + "'");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("task_id") == "7");
}

TEST_CASE("correct output is byte-identical across parallelism and reruns",
          "[cli]") {
  auto input = tmp("corpus50.jsonl");
  std::vector<json> rows;
  for (const zerofec::CorrectionTask& task : make_mock_corpus(50))
    rows.push_back({{"task_id", task.task_id},
                    {"claim", task.claim},
                    {"evidence", task.evidence}});
  write_jsonl(input, rows);
  auto fixture = tmp("echo_fixture.json");
  spit(fixture, json{{"entailment", {{"overlap", true}}}}.dump());

  std::vector<std::string> outputs;
  for (const char* parallelism : {"1", "4", "8", "1"}) {
    auto out_file = tmp(std::string("corpus50_p") + parallelism + ".jsonl");
    CliResult r = run_cli("correct --input '" + input.string() + "' --mock '" +
                          fixture.string() + "' --parallelism " + parallelism +
                          " --output '" + out_file.string() + "'");
    REQUIRE(r.code == 0);
    CHECK(r.err == "processed 50, edited 0, errors 0\n");
    outputs.push_back(slurp(out_file));
  }
  CHECK(outputs[1] == outputs[0]);
  CHECK(outputs[2] == outputs[0]);
  CHECK(outputs[3] == outputs[0]);

  zerofec::BackendSet set;
  set.qg = std::make_shared<zerofec::EchoGenerator>("qg");
  set.qa = std::make_shared<zerofec::EchoGenerator>("qa");
  set.qa2claim = std::make_shared<zerofec::EchoGenerator>("q2c");
  set.entailment = std::make_shared<zerofec::OverlapEntailment>();
  std::string expected;
  for (const zerofec::TaskResult& r : zerofec::run_batch(
           make_mock_corpus(50), set, zerofec::PipelineConfig{}, 1, false))
    expected += zerofec::serialize_result_line(r) + "\n";
  CHECK(outputs[0] == expected);
}

TEST_CASE("correct records per-task failures and keeps going", "[cli]") {
  auto input = tmp("mixed.jsonl");
  write_jsonl(input, {{{"task_id", "sitcom"},
                       {"claim", kSitcomClaim},
                       {"evidence", kSitcomEvidence}},
                      {{"task_id", "berlin"},
                       {"claim", "Berlin."},
                       {"evidence", "Berlin is the capital of Germany."}}});
  CliResult r = run_cli("correct --input '" + input.string() + "' --mock '" +
                        showcase_fixture().string() + "'");
  REQUIRE(r.code == 0);
  CHECK(r.err == "processed 2, edited 1, errors 1\n");
  std::vector<std::string> lines = split_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(json::parse(lines[0]).at("correction") == kSitcomFix);
  json failed = json::parse(lines[1]);
  CHECK(failed.at("task_id") == "berlin");
  CHECK(failed.at("error").at("stage") == "question_generation");

  SECTION("--fail-fast turns the failure into exit 3") {
    CliResult ff = run_cli("correct --input '" + input.string() +
                           "' --mock '" + showcase_fixture().string() +
                           "' --fail-fast");
    CHECK(ff.code == 3);
    CHECK_THAT(ff.err, ContainsSubstring("backend failure"));
    CHECK_THAT(ff.err, ContainsSubstring("task berlin"));
  }
}

TEST_CASE("correct can declarativize with the rules backend", "[cli]") {
  auto input = tmp("paris.jsonl");
  write_jsonl(input, {{{"task_id", "paris"},
                       {"claim", "Paris."},
                       {"evidence", "Paris is the capital city of France."}}});
  json fixture;
  fixture["qg"] = {{"Paris", "Is Paris the capital of France?"}};
  fixture["qa"] = {{"Is Paris the capital of France?", "Yes"}};
  fixture["q2c_rules"] = true;
  fixture["entailment"] = {{"constant", 0.9}};
  auto fixture_path = tmp("rules_fixture.json");
  spit(fixture_path, fixture.dump());

  CliResult r = run_cli("correct --input '" + input.string() + "' --mock '" +
                        fixture_path.string() + "'");
  REQUIRE(r.code == 0);
  json record = json::parse(r.out);
  REQUIRE(record.at("trace").size() == 2);
  CHECK(record.at("trace")[0].at("text") == "Paris is the capital of France.");
}

TEST_CASE("correct caches backend responses across runs", "[cli]") {
  auto cache = tmp("responses.cache");
  std::filesystem::remove(cache);
  std::string cmd = "correct --input '" + sitcom_input().string() +
                    "' --mock '" + showcase_fixture().string() + "' --cache '" +
                    cache.string() + "'";
  CliResult first = run_cli(cmd);
  REQUIRE(first.code == 0);
  REQUIRE(std::filesystem::exists(cache));
  REQUIRE(std::filesystem::file_size(cache) > 0);
  CliResult second = run_cli(cmd);
  REQUIRE(second.code == 0);
  CHECK(second.out == first.out);
  CliResult uncached = run_cli("correct --input '" + sitcom_input().string() +
                               "' --mock '" + showcase_fixture().string() +
                               "'");
  CHECK(second.out == uncached.out);
}

TEST_CASE("correct exit codes distinguish config and data problems",
          "[cli]") {
  SECTION("missing input file is a data error") {
    CliResult r = run_cli("correct --input /no/such/input.jsonl --mock '" +
                          showcase_fixture().string() + "'");
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("input error"));
  }
  SECTION("malformed input line is a data error") {
    auto input = tmp("broken.jsonl");
    spit(input, "{\"task_id\":\"a\",\"claim\":\"x\",\"evidence\":\"y\"}\n"
                "not json\n");
    CliResult r = run_cli("correct --input '" + input.string() + "' --mock '" +
                          showcase_fixture().string() + "'");
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("line 2"));
  }
  SECTION("no backends at all is a config error") {
    ::unsetenv("ZEROFEC_QG_URL");
    ::unsetenv("ZEROFEC_QA_URL");
    ::unsetenv("ZEROFEC_Q2C_URL");
    ::unsetenv("ZEROFEC_NLI_URL");
    CliResult r = run_cli("correct --input '" + sitcom_input().string() + "'");
    CHECK(r.code == 1);
    CHECK_THAT(r.err, ContainsSubstring("config error"));
  }
  SECTION("invalid config file is a config error") {
    auto cfg = tmp("broken_config.json");
    spit(cfg, "{not json");
    CliResult r = run_cli("correct --config '" + cfg.string() + "' --input '" +
                          sitcom_input().string() + "' --mock '" +
                          showcase_fixture().string() + "'");
    CHECK(r.code == 1);
  }
  SECTION("unknown scorer component is a config error") {
    auto cfg = tmp("bleu_config.json");
    spit(cfg, R"({"scorer":{"components":[{"name":"bleu"}]}})");
    CliResult r = run_cli("correct --config '" + cfg.string() + "' --input '" +
                          sitcom_input().string() + "' --mock '" +
                          showcase_fixture().string() + "'");
    CHECK(r.code == 1);
    CHECK_THAT(r.err, ContainsSubstring("config error"));
  }
  SECTION("non-positive parallelism is rejected at parse time") {
    CliResult r = run_cli("correct --input '" + sitcom_input().string() +
                          "' --mock '" + showcase_fixture().string() +
                          "' --parallelism 0");
    CHECK(r.code == 1);
  }
  SECTION("missing rules resource dir is a config error") {
    CliResult r = run_cli(
        "correct --input '" + sitcom_input().string() +
        "' --backend.qg.url http://127.0.0.1:1 "
        "--backend.qa.url http://127.0.0.1:1 "
        "--backend.nli.url http://127.0.0.1:1 "
        "--backend.q2c.url rules:/no/such/dir");
    CHECK(r.code == 1);
    CHECK_THAT(r.err, ContainsSubstring("config error"));
  }
}

TEST_CASE("top-level argument errors exit 1, help exits 0", "[cli]") {
  CHECK(run_cli("").code == 1);
  CHECK(run_cli("frobnicate").code == 1);
  CHECK(run_cli("correct").code == 1);
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("evaluate scores perfect corrections at 100", "[cli]") {
  auto input = tmp("eval_perfect.jsonl");
  write_jsonl(
      input,
      {{{"input", kSpindleClaim},
        {"output", kSpindleFix},
        {"references", {kSpindleFix}}},
       {{"input", kSitcomClaim},
        {"output", kSitcomFix},
        {"reference", kSitcomFix}},
       {{"claim", "Berlin is in France."},
        {"correction", "Berlin is in Germany."},
        {"gold_correction", "Berlin is in Germany."}}});
  CliResult r = run_cli("evaluate --input '" + input.string() + "'");
  REQUIRE(r.code == 0);
  json report = json::parse(r.out);
  CHECK(report.at("count") == 3);
  CHECK(report.at("sari").get<double>() == 100.0);
  CHECK_THAT(r.err, ContainsSubstring("SARI 100"));
}

TEST_CASE("evaluate matches the library corpus score", "[cli]") {
  std::vector<zerofec::EvalRecord> records = {
      {"Dogs bark at night.", "Dogs bark loudly.", {"Dogs bark at cars."}},
      {kSpindleClaim, kSpindleFix, {kSpindleFix, kNearCopy}},
      {"One two three.", "One two four.", {"One two five."}},
  };
  auto input = tmp("eval_mixed.jsonl");
  std::vector<json> rows;
  for (const zerofec::EvalRecord& rec : records)
    rows.push_back({{"input", rec.input},
                    {"output", rec.output},
                    {"references", rec.references}});
  rows[0]["rouge1"] = 0.5;
  rows[2]["rouge1"] = 0.7;
  write_jsonl(input, rows);

  CliResult r = run_cli("evaluate --input '" + input.string() + "'");
  REQUIRE(r.code == 0);
  json report = json::parse(r.out);
  CHECK(report.at("sari").get<double>() == zerofec::corpus_sari(records));
  CHECK(report.at("metrics").at("rouge1").get<double>() == (0.5 + 0.7) / 2.0);
}

TEST_CASE("evaluate data errors exit 2", "[cli]") {
  SECTION("empty input") {
    auto input = tmp("eval_empty.jsonl");
    spit(input, "");
    CliResult r = run_cli("evaluate --input '" + input.string() + "'");
    CHECK(r.code == 2);
  }
  SECTION("record without a reference") {
    auto input = tmp("eval_noref.jsonl");
    write_jsonl(input, {{{"input", "a"}, {"output", "b"}}});
    CliResult r = run_cli("evaluate --input '" + input.string() + "'");
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("reference"));
  }
}

TEST_CASE("correlate reports tau-b per metric and dimension", "[cli]") {
  auto input = tmp("corr.jsonl");
  write_jsonl(input, {{{"m1", 1}, {"m2", 4}, {"tied", 1}, {"h", 10}},
                      {{"m1", 2}, {"m2", 3}, {"tied", 1}, {"h", 20}},
                      {{"m1", 3}, {"m2", 2}, {"tied", 2}, {"h", 30}},
                      {{"m1", 4}, {"m2", 1}, {"tied", 3}, {"h", 40}}});
  CliResult r = run_cli("correlate --input '" + input.string() +
                        "' --metrics m1,m2,tied --human h");
  REQUIRE(r.code == 0);
  std::vector<std::string> lines = split_lines(r.out);
  REQUIRE(lines.size() == 3);
  json first = json::parse(lines[0]);
  CHECK(first.at("metric") == "m1");
  CHECK(first.at("dimension") == "h");
  CHECK(first.at("tau").get<double>() == 1.0);
  CHECK(json::parse(lines[1]).at("tau").get<double>() == -1.0);
  CHECK(json::parse(lines[2]).at("tau").get<double>() ==
        zerofec::kendall_tau({1, 1, 2, 3}, {10, 20, 30, 40}));
}

TEST_CASE("correlate marks degenerate columns instead of failing", "[cli]") {
  auto input = tmp("corr_const.jsonl");
  write_jsonl(input, {{{"c", 5}, {"h", 1}},
                      {{"c", 5}, {"h", 2}},
                      {{"c", 5}, {"h", 3}}});
  CliResult r = run_cli("correlate --input '" + input.string() +
                        "' --metrics c --human h");
  REQUIRE(r.code == 0);
  json rec = json::parse(r.out);
  CHECK(rec.contains("error"));
  CHECK_FALSE(rec.contains("tau"));
}

TEST_CASE("correlate missing column exits 2", "[cli]") {
  auto input = tmp("corr_missing.jsonl");
  write_jsonl(input, {{{"m", 1}, {"h", 2}}});
  CliResult r = run_cli("correlate --input '" + input.string() +
                        "' --metrics zzz --human h");
  CHECK(r.code == 2);
  CHECK_THAT(r.err, ContainsSubstring("zzz"));
}

TEST_CASE("significance matches the library bootstrap and honors the seed",
          "[cli]") {
  std::vector<double> a, b;
  std::vector<json> rows_a, rows_b;
  for (int i = 0; i < 24; ++i) {
    double va = 0.7 + 0.01 * (i % 5);
    double vb = 0.3 + 0.01 * (i % 7);
    a.push_back(va);
    b.push_back(vb);
    rows_a.push_back({{"score", va}});
    rows_b.push_back({{"score", vb}});
  }
  auto file_a = tmp("sys_a.jsonl");
  auto file_b = tmp("sys_b.jsonl");
  write_jsonl(file_a, rows_a);
  write_jsonl(file_b, rows_b);

  std::string cmd = "significance --sys-a '" + file_a.string() +
                    "' --sys-b '" + file_b.string() + "' --seed 7";
  CliResult first = run_cli(cmd);
  REQUIRE(first.code == 0);
  CliResult second = run_cli(cmd);
  CHECK(second.out == first.out);

  json rec = json::parse(first.out);
  CHECK(rec.at("field") == "score");
  double mean_a = 0.0, mean_b = 0.0;
  for (double v : a) mean_a += v;
  for (double v : b) mean_b += v;
  mean_a /= static_cast<double>(a.size());
  mean_b /= static_cast<double>(b.size());
  CHECK(rec.at("mean_a").get<double>() == mean_a);
  CHECK(rec.at("mean_b").get<double>() == mean_b);
  double p = zerofec::paired_bootstrap(a, b, 10000, 7);
  CHECK(rec.at("p_value").get<double>() == p);
  CHECK(rec.at("significant").get<bool>() == (p < 0.01));
  CHECK(rec.at("significant").get<bool>());
  CHECK_THAT(first.err, ContainsSubstring(" *"));

  SECTION("a system against itself is not significant") {
    CliResult self = run_cli("significance --sys-a '" + file_a.string() +
                             "' --sys-b '" + file_a.string() + "' --seed 7");
    REQUIRE(self.code == 0);
    json self_rec = json::parse(self.out);
    CHECK(self_rec.at("delta").get<double>() == 0.0);
    CHECK(self_rec.at("p_value").get<double>() ==
          zerofec::paired_bootstrap(a, a, 10000, 7));
    CHECK_FALSE(self_rec.at("significant").get<bool>());
  }
}

TEST_CASE("significance data errors exit 2", "[cli]") {
  auto file_a = tmp("sig_a.jsonl");
  auto file_b = tmp("sig_short.jsonl");
  write_jsonl(file_a, {{{"score", 1.0}}, {{"score", 2.0}}});
  write_jsonl(file_b, {{{"score", 1.0}}});
  SECTION("mismatched record counts") {
    CliResult r = run_cli("significance --sys-a '" + file_a.string() +
                          "' --sys-b '" + file_b.string() + "'");
    CHECK(r.code == 2);
  }
  SECTION("no shared numeric fields") {
    auto file_c = tmp("sig_text.jsonl");
    write_jsonl(file_c, {{{"note", "x"}}, {{"note", "y"}}});
    CliResult r = run_cli("significance --sys-a '" + file_a.string() +
                          "' --sys-b '" + file_c.string() + "'");
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("numeric"));
  }
  SECTION("empty inputs") {
    auto empty = tmp("sig_empty.jsonl");
    spit(empty, "");
    CliResult r = run_cli("significance --sys-a '" + empty.string() +
                          "' --sys-b '" + empty.string() + "'");
    CHECK(r.code == 2);
  }
}

TEST_CASE("validate reports statistics and flags invariant violations",
          "[cli]") {
  std::string fixture = std::string(ZEROFEC_FIXTURES_DIR) +
                        "/synthetic_dataset.jsonl";
  CliResult r = run_cli("validate --input '" + fixture + "'");
  CHECK(r.code == 2);
  json report = json::parse(r.out);
  CHECK(report.at("total") == 4);
  CHECK(report.at("supports") == 1);
  CHECK(report.at("refutes") == 3);
  CHECK(report.at("issues") == 6);
  std::size_t flagged = 0, pos = 0;
  while ((pos = r.err.find("invalid record:", pos)) != std::string::npos) {
    ++flagged;
    pos += 1;
  }
  CHECK(flagged == 6);
  CHECK_THAT(r.err,
             ContainsSubstring("total 4, supports 1, refutes 3, issues 6"));
}

TEST_CASE("validate exits 0 on a clean dataset", "[cli]") {
  auto input = tmp("clean_dataset.jsonl");
  write_jsonl(input,
              {{{"id", "r1"},
                {"claim", "The sun orbits the earth."},
                {"evidence", "The earth orbits the sun."},
                {"gold_correction", "The earth orbits the sun."},
                {"label", "REFUTES"}},
               {{"id", "s1"},
                {"claim", "Water is wet."},
                {"evidence", "Water wets other materials."},
                {"gold_correction", "Water is wet."},
                {"label", "SUPPORTS"}}});
  CliResult r = run_cli("validate --input '" + input.string() + "'");
  REQUIRE(r.code == 0);
  json report = json::parse(r.out);
  CHECK(report.at("total") == 2);
  CHECK(report.at("issues") == 0);
}

TEST_CASE("validate honors a field map from --config", "[cli]") {
  auto input = tmp("mapped_dataset.jsonl");
  write_jsonl(input, {{{"_id", "m1"},
                       {"mutated", "Cats are reptiles."},
                       {"sentences", "Cats are mammals."},
                       {"original", "Cats are mammals."},
                       {"verdict", "REFUTES"}}});
  auto cfg = tmp("field_map.json");
  spit(cfg, R"({"fields":{"id":"_id","claim":"mutated","evidence":"sentences",)"
            R"("gold_correction":"original","label":"verdict"}})");
  CliResult r = run_cli("validate --config '" + cfg.string() + "' --input '" +
                        input.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("total") == 1);
}

TEST_CASE("validate missing input exits 2", "[cli]") {
  CliResult r = run_cli("validate --input /no/such/dataset.jsonl");
  CHECK(r.code == 2);
  CHECK_THAT(r.err, ContainsSubstring("input error"));
}
