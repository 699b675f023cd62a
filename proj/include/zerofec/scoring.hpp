#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "zerofec/backends.hpp"
#include "zerofec/errors.hpp"
#include "zerofec/porter.hpp"
#include "zerofec/text.hpp"
#include "zerofec/types.hpp"

namespace zerofec {

// Lowercases, splits on every non-alphanumeric character, and stems each
// token. "won't" tokenizes as [won, t].
inline std::vector<std::string> tokenize_for_rouge(std::string_view text,
                                                   bool stemming = true) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    out.push_back(stemming ? porter_stem(cur) : cur);
    cur.clear();
  };
  for (char c : text) {
    if (is_ascii_alnum(c))
      cur.push_back(ascii_lower(c));
    else
      flush();
  }
  flush();
  return out;
}

// Unigram F1 with multiset (clipped) overlap. Exactly one side empty
// scores 0; both sides empty is a vacuous perfect match and scores 1.
inline double rouge1(std::string_view candidate, std::string_view reference,
                     bool stemming = true) {
  std::vector<std::string> cand = tokenize_for_rouge(candidate, stemming);
  std::vector<std::string> ref = tokenize_for_rouge(reference, stemming);
  if (cand.empty() && ref.empty()) return 1.0;
  if (cand.empty() || ref.empty()) return 0.0;
  std::unordered_map<std::string, std::size_t> ref_counts;
  for (const std::string& t : ref) ++ref_counts[t];
  std::size_t overlap = 0;
  for (const std::string& t : cand) {
    auto it = ref_counts.find(t);
    if (it != ref_counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  double p = static_cast<double>(overlap) / static_cast<double>(cand.size());
  double r = static_cast<double>(overlap) / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

struct ScorerComponent {
  std::string name;
  double weight = 1.0;
};

// Which verification signals to combine, and how. Dropping a component
// skips its backend entirely; the trace records 0.0 for it.
struct ScorerSpec {
  std::vector<ScorerComponent> components{{"entailment", 1.0},
                                          {"rouge1", 1.0}};
  bool stemming = true;

  bool has(std::string_view component) const {
    for (const ScorerComponent& c : components)
      if (c.name == component) return true;
    return false;
  }

  double weight(std::string_view component) const {
    for (const ScorerComponent& c : components)
      if (c.name == component) return c.weight;
    return 0.0;
  }
};

inline void validate_scorer_spec(const ScorerSpec& spec) {
  if (spec.components.empty())
    throw ConfigError("scorer spec needs at least one component");
  for (std::size_t i = 0; i < spec.components.size(); ++i) {
    const ScorerComponent& c = spec.components[i];
    if (c.name != "entailment" && c.name != "rouge1")
      throw ConfigError("unknown scorer component: " + c.name);
    if (!std::isfinite(c.weight))
      throw ConfigError("non-finite weight for scorer component " + c.name);
    for (std::size_t j = 0; j < i; ++j)
      if (spec.components[j].name == c.name)
        throw ConfigError("duplicate scorer component: " + c.name);
  }
}

// Range-checked entailment call. Backends answering outside [0, 1] broke
// the protocol, whatever the transport.
inline double entail(EntailmentScorer& scorer, const std::string& premise,
                     const std::string& hypothesis) {
  double p = scorer.score(premise, hypothesis);
  if (!(p >= 0.0 && p <= 1.0))
    throw ProtocolError("entailment probability out of range from backend '" +
                        scorer.name() + "'");
  return p;
}

inline std::string describe_candidate(const CandidateCorrection& c) {
  if (c.is_input_claim()) return "INPUT_CLAIM \"" + c.text + "\"";
  return "candidate \"" + c.text + "\" from answer \"" +
         c.provenance->claim_answer.text + "\"";
}

// Scores every candidate against the claim (lexical fidelity) and the
// evidence (entailment). Candidate order is preserved.
inline std::vector<ScoredCandidate> score_candidates(
    const std::vector<CandidateCorrection>& candidates,
    const CorrectionTask& task, EntailmentScorer* scorer,
    const ScorerSpec& spec) {
  validate_scorer_spec(spec);
  bool use_entail = spec.has("entailment");
  bool use_rouge = spec.has("rouge1");
  if (use_entail && scorer == nullptr)
    throw ConfigError("scorer spec includes entailment but no backend given");
  std::vector<ScoredCandidate> out;
  out.reserve(candidates.size());
  for (const CandidateCorrection& c : candidates) {
    ScoredCandidate sc;
    sc.candidate = c;
    if (use_entail) {
      try {
        sc.entailment = entail(*scorer, task.evidence, c.text);
      } catch (BackendError& e) {
        if (e.provenance().empty()) e.set_provenance(describe_candidate(c));
        throw;
      }
    }
    if (use_rouge) sc.rouge1 = rouge1(c.text, task.claim, spec.stemming);
    sc.total = 0.0;
    for (const ScorerComponent& comp : spec.components)
      sc.total += comp.weight *
                  (comp.name == "entailment" ? sc.entailment : sc.rouge1);
    out.push_back(std::move(sc));
  }
  return out;
}

// Argmax of total. The input-claim sentinel wins any tie it is part of,
// so an unedited claim never loses to an equal-scoring rewrite; ties among
// generated candidates go to the lowest index.
inline std::size_t select_correction(const std::vector<ScoredCandidate>& trace) {
  std::size_t input_index = trace.size();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].candidate.is_input_claim()) {
      input_index = i;
      break;
    }
  }
  if (input_index == trace.size())
    throw MissingInputClaim("trace has no input-claim sentinel");
  std::size_t best = 0;
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i].total > trace[best].total) best = i;
  if (trace[input_index].total == trace[best].total) return input_index;
  return best;
}

}  // namespace zerofec
