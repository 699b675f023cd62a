#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "zerofec/annotate.hpp"
#include "zerofec/backends.hpp"
#include "zerofec/errors.hpp"
#include "zerofec/extract.hpp"
#include "zerofec/scoring.hpp"
#include "zerofec/text.hpp"
#include "zerofec/types.hpp"

namespace zerofec {

struct PipelineConfig {
  int beam_width = kDefaultBeamWidth;
  ScorerSpec scorer;
  std::set<std::string> negation_lexicon = default_negation_lexicon();
  std::optional<std::size_t> max_candidates;  // truncates claim answers
  bool dedupe = true;
  bool lowercase_qa_prompt = true;
  std::string annotator = "builtin";
  std::string qg_template{kDefaultQgTemplate};
  std::string qa_template{kDefaultQaTemplate};
  std::string qa2claim_template{kDefaultQa2ClaimTemplate};
};

inline std::string normalize_question(const std::string& raw) {
  std::string q = trim(raw);
  if (!q.empty() && q.back() != '?') q.push_back('?');
  return q;
}

namespace detail {

inline std::string call_generator(TextGenerator& gen,
                                  const std::string& prompt, int beam,
                                  const char* stage,
                                  const std::string& provenance) {
  std::string out;
  try {
    out = gen.generate(prompt, beam);
  } catch (const ProtocolError&) {
    throw;
  } catch (const BackendError& e) {
    throw BackendError(stage, e.what(), provenance);
  }
  if (is_blank(out))
    throw BackendError(stage, "backend '" + gen.name() + "' returned empty text",
                       provenance);
  return out;
}

}  // namespace detail

// One claim end to end: extract answers, one question per answer, one
// evidence answer per question, one declarative candidate per QA pair,
// the unedited claim appended as the sentinel candidate, everything
// scored, the argmax kept. Deterministic given deterministic backends.
inline CorrectionOutput run_pipeline(const CorrectionTask& task,
                                     const BackendSet& backends,
                                     const PipelineConfig& config) {
  validate_scorer_spec(config.scorer);
  if (!backends.qg || !backends.qa || !backends.qa2claim)
    throw ConfigError("pipeline needs qg, qa and qa2claim backends");
  if (config.scorer.has("entailment") && !backends.entailment)
    throw ConfigError("scorer spec includes entailment but no backend given");
  if (config.beam_width < 1) throw ConfigError("beam_width must be positive");

  std::unique_ptr<Annotator> annotator = make_annotator(config.annotator);
  Annotation ann = annotator->annotate(task.claim);
  std::vector<ClaimAnswer> answers =
      extract_claim_answers(task.claim, ann, config.negation_lexicon);
  if (config.max_candidates && answers.size() > *config.max_candidates)
    answers.resize(*config.max_candidates);

  std::vector<CandidateCorrection> candidates;
  candidates.reserve(answers.size() + 1);
  for (const ClaimAnswer& answer : answers) {
    std::string provenance = "claim answer \"" + answer.text + "\"";
    std::string question = normalize_question(detail::call_generator(
        *backends.qg,
        format_qg_prompt(config.qg_template, answer.text, task.claim),
        config.beam_width, "question_generation", provenance));
    provenance += ", question \"" + question + "\"";
    std::string qa_prompt =
        format_qa_prompt(config.qa_template, question, task.evidence);
    if (config.lowercase_qa_prompt) qa_prompt = to_lower(qa_prompt);
    std::string evidence_answer = trim(detail::call_generator(
        *backends.qa, qa_prompt, config.beam_width, "question_answering",
        provenance));
    provenance += ", answer \"" + evidence_answer + "\"";
    std::string candidate_text = trim(detail::call_generator(
        *backends.qa2claim,
        format_qa2claim_prompt(config.qa2claim_template, question,
                               evidence_answer),
        config.beam_width, "qa_to_claim", provenance));
    candidates.push_back(
        {candidate_text, Provenance{answer, question, evidence_answer}});
  }

  if (config.dedupe) {
    std::vector<CandidateCorrection> unique;
    std::unordered_set<std::string> seen;
    for (CandidateCorrection& c : candidates)
      if (seen.insert(normalize_for_dedupe(c.text)).second)
        unique.push_back(std::move(c));
    candidates = std::move(unique);
  }
  candidates.push_back({task.claim, std::nullopt});

  std::vector<ScoredCandidate> trace = score_candidates(
      candidates, task, backends.entailment.get(), config.scorer);
  std::size_t winner = select_correction(trace);

  CorrectionOutput out;
  out.task_id = task.task_id;
  out.correction = trace[winner].candidate.text;
  out.edited = out.correction != task.claim;
  out.trace = std::move(trace);
  out.winner_index = winner;
  return out;
}

// What one batch slot produced: a correction, or the error that stopped
// this task (never both).
struct TaskResult {
  std::string task_id;
  std::optional<CorrectionOutput> output;
  struct ErrorRecord {
    std::string stage;
    std::string message;
  };
  std::optional<ErrorRecord> error;
};

inline nlohmann::ordered_json to_json(const CorrectionOutput& out) {
  nlohmann::ordered_json rec;
  rec["task_id"] = out.task_id;
  rec["correction"] = out.correction;
  rec["edited"] = out.edited;
  rec["winner_index"] = out.winner_index;
  nlohmann::ordered_json trace = nlohmann::ordered_json::array();
  for (const ScoredCandidate& sc : out.trace) {
    nlohmann::ordered_json c;
    c["text"] = sc.candidate.text;
    if (sc.candidate.is_input_claim()) {
      c["provenance"] = "INPUT_CLAIM";
    } else {
      nlohmann::ordered_json p;
      p["claim_answer"] = sc.candidate.provenance->claim_answer.text;
      p["question"] = sc.candidate.provenance->question;
      p["evidence_answer"] = sc.candidate.provenance->evidence_answer;
      c["provenance"] = p;
    }
    c["entailment"] = sc.entailment;
    c["rouge1"] = sc.rouge1;
    c["total"] = sc.total;
    trace.push_back(std::move(c));
  }
  rec["trace"] = std::move(trace);
  return rec;
}

inline nlohmann::ordered_json to_json(const TaskResult& result) {
  if (result.output) return to_json(*result.output);
  nlohmann::ordered_json rec;
  rec["task_id"] = result.task_id;
  nlohmann::ordered_json err;
  err["stage"] = result.error ? result.error->stage : "pipeline";
  err["message"] = result.error ? result.error->message : "unknown error";
  rec["error"] = std::move(err);
  return rec;
}

inline std::string serialize_result_line(const TaskResult& result) {
  return to_json(result).dump();
}

inline bool backends_thread_safe(const BackendSet& backends) {
  if (backends.qg && !backends.qg->thread_safe()) return false;
  if (backends.qa && !backends.qa->thread_safe()) return false;
  if (backends.qa2claim && !backends.qa2claim->thread_safe()) return false;
  if (backends.entailment && !backends.entailment->thread_safe()) return false;
  return true;
}

// Maps run_pipeline over the tasks with a bounded worker pool. Results
// land in input order whatever the parallelism; a backend set that is not
// thread-safe forces sequential execution. Per-task failures become error
// records unless fail_fast is set, in which case the batch stops and the
// failure with the lowest task index is rethrown.
inline std::vector<TaskResult> run_batch(
    const std::vector<CorrectionTask>& tasks, const BackendSet& backends,
    const PipelineConfig& config, int parallelism, bool fail_fast = false) {
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
  std::size_t n = tasks.size();
  std::vector<TaskResult> results(n);
  if (n == 0) return results;

  std::size_t workers = static_cast<std::size_t>(parallelism);
  if (!backends_thread_safe(backends)) workers = 1;
  workers = std::min(workers, n);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  auto work = [&] {
    while (true) {
      if (fail_fast && stop.load()) break;
      std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      results[i].task_id = tasks[i].task_id;
      try {
        results[i].output = run_pipeline(tasks[i], backends, config);
      } catch (const BackendError& e) {
        results[i].error = {e.stage(), e.what()};
        if (fail_fast) stop.store(true);
      } catch (const std::exception& e) {
        results[i].error = {"pipeline", e.what()};
        if (fail_fast) stop.store(true);
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  if (fail_fast) {
    for (const TaskResult& r : results) {
      if (r.error)
        throw BackendError(r.error->stage, r.error->message,
                           "task " + r.task_id);
    }
  }
  return results;
}

}  // namespace zerofec
