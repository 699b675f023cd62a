#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "zerofec/errors.hpp"

namespace zerofec {

// One claim to check against one evidence text.
struct CorrectionTask {
  std::string task_id;
  std::string claim;
  std::string evidence;
};

// What a claim answer is, i.e. which extraction rule produced it. When
// two units cover the identical span, dedupe keeps the lowest
// answer_kind_rank (extract.hpp); NEGATION wins every such tie so that
// negation terms survive even when they also form a chunk or phrase.
enum class AnswerKind {
  NounChunk,
  NamedEntity,
  NP,
  VP,
  Negation,
  Noun,
  Verb,
  Adj,
  Adv,
};

inline const char* to_string(AnswerKind k) {
  switch (k) {
    case AnswerKind::NounChunk: return "NOUN_CHUNK";
    case AnswerKind::NamedEntity: return "NAMED_ENTITY";
    case AnswerKind::NP: return "NP";
    case AnswerKind::VP: return "VP";
    case AnswerKind::Negation: return "NEGATION";
    case AnswerKind::Noun: return "NOUN";
    case AnswerKind::Verb: return "VERB";
    case AnswerKind::Adj: return "ADJ";
    case AnswerKind::Adv: return "ADV";
  }
  return "?";
}

inline AnswerKind answer_kind_from_string(const std::string& s) {
  if (s == "NOUN_CHUNK") return AnswerKind::NounChunk;
  if (s == "NAMED_ENTITY") return AnswerKind::NamedEntity;
  if (s == "NP") return AnswerKind::NP;
  if (s == "VP") return AnswerKind::VP;
  if (s == "NEGATION") return AnswerKind::Negation;
  if (s == "NOUN") return AnswerKind::Noun;
  if (s == "VERB") return AnswerKind::Verb;
  if (s == "ADJ") return AnswerKind::Adj;
  if (s == "ADV") return AnswerKind::Adv;
  throw ConfigError("unknown answer kind: " + s);
}

// A span of the claim selected as a potentially wrong unit. text is the
// exact substring claim[char_start, char_end).
struct ClaimAnswer {
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  AnswerKind kind = AnswerKind::NounChunk;
};

// A question targeting one claim answer.
struct GeneratedQuestion {
  std::string text;
  ClaimAnswer source_answer;
};

// The evidence-grounded answer to a generated question.
struct EvidenceAnswer {
  std::string text;
  std::string question;
};

// Full derivation chain of a generated candidate.
struct Provenance {
  ClaimAnswer claim_answer;
  std::string question;
  std::string evidence_answer;
};

// One candidate correction. provenance is empty exactly for the
// input-claim sentinel that every trace must contain.
struct CandidateCorrection {
  std::string text;
  std::optional<Provenance> provenance;

  bool is_input_claim() const noexcept { return !provenance.has_value(); }
};

// A candidate with its verification scores. total is the weighted sum the
// winner is selected by; a component absent from the scorer spec is
// recorded as 0.0.
struct ScoredCandidate {
  CandidateCorrection candidate;
  double entailment = 0.0;
  double rouge1 = 0.0;
  double total = 0.0;
};

// Result of one pipeline run. trace preserves candidate order; edited is
// true iff correction differs verbatim from the task's claim.
struct CorrectionOutput {
  std::string task_id;
  std::string correction;
  bool edited = false;
  std::vector<ScoredCandidate> trace;
  std::size_t winner_index = 0;
};

}  // namespace zerofec
