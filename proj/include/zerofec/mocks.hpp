#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "zerofec/backends.hpp"
#include "zerofec/errors.hpp"
#include "zerofec/scoring.hpp"
#include "zerofec/text.hpp"

namespace zerofec {

// Fixture-table generator: exact prompt in, scripted output out. A prompt
// with no entry is a backend failure, which makes silent fixture drift
// impossible to miss.
class TableGenerator : public TextGenerator {
public:
  TableGenerator(std::string name, std::map<std::string, std::string> table)
      : name_(std::move(name)), table_(std::move(table)) {}

  const std::string& name() const override { return name_; }
  bool thread_safe() const override { return true; }

  std::string generate(const std::string& prompt, int) override {
    auto it = table_.find(prompt);
    if (it == table_.end())
      throw BackendError(name_, "no fixture entry for prompt: " + prompt);
    return it->second;
  }

private:
  std::string name_;
  std::map<std::string, std::string> table_;
};

// Returns the first whitespace token of the prompt's final template
// segment (for the default QA template, the first token of the evidence).
class EchoGenerator : public TextGenerator {
public:
  explicit EchoGenerator(std::string name = "echo") : name_(std::move(name)) {}

  const std::string& name() const override { return name_; }
  bool thread_safe() const override { return true; }

  std::string generate(const std::string& prompt, int) override {
    auto [first, second] = parse_default_prompt(prompt);
    const std::string& segment = second.empty() ? first : second;
    std::vector<std::string> toks = split_whitespace(segment);
    if (toks.empty())
      throw BackendError(name_, "prompt has no tokens to echo");
    return toks.front();
  }

private:
  std::string name_;
};

// Fixture generator keyed on the prompt's first template segment (the
// claim answer for QG prompts, the question for QA and QA-to-claim
// prompts) instead of the full prompt, so fixtures stay readable. A
// composite "<first> ||| <second>" entry wins over a bare "<first>" entry.
// Keys match exactly first, then case-insensitively (QA prompts may be
// lowercased wholesale).
class KeyedGenerator : public TextGenerator {
public:
  KeyedGenerator(std::string name, std::map<std::string, std::string> table)
      : name_(std::move(name)), table_(std::move(table)) {
    for (const auto& [k, v] : table_) lower_table_[to_lower(k)] = v;
  }

  const std::string& name() const override { return name_; }
  bool thread_safe() const override { return true; }

  std::string generate(const std::string& prompt, int) override {
    auto [first, second] = parse_default_prompt(prompt);
    for (const std::string& key :
         {first + " ||| " + second, first}) {
      auto it = table_.find(key);
      if (it != table_.end()) return it->second;
      auto lit = lower_table_.find(to_lower(key));
      if (lit != lower_table_.end()) return lit->second;
    }
    throw BackendError(name_, "no fixture entry for key: " + first);
  }

private:
  std::string name_;
  std::map<std::string, std::string> table_;
  std::map<std::string, std::string> lower_table_;
};

class ConstantEntailment : public EntailmentScorer {
public:
  explicit ConstantEntailment(double p, std::string name = "constant")
      : p_(p), name_(std::move(name)) {}

  const std::string& name() const override { return name_; }
  bool thread_safe() const override { return true; }

  double score(const std::string&, const std::string&) override { return p_; }

private:
  double p_;
  std::string name_;
};

// Scripted entailment keyed by hypothesis text.
class TableEntailment : public EntailmentScorer {
public:
  explicit TableEntailment(std::map<std::string, double> by_hypothesis,
                           std::optional<double> fallback = std::nullopt,
                           std::string name = "scripted")
      : by_hypothesis_(std::move(by_hypothesis)),
        fallback_(fallback),
        name_(std::move(name)) {}

  const std::string& name() const override { return name_; }
  bool thread_safe() const override { return true; }

  double score(const std::string&, const std::string& hypothesis) override {
    auto it = by_hypothesis_.find(hypothesis);
    if (it != by_hypothesis_.end()) return it->second;
    if (fallback_) return *fallback_;
    throw BackendError(name_,
                       "no fixture entry for hypothesis: " + hypothesis);
  }

private:
  std::map<std::string, double> by_hypothesis_;
  std::optional<double> fallback_;
  std::string name_;
};

// Clipped unigram containment of the hypothesis in the premise: a
// hypothesis that appears verbatim inside the premise scores 1.0.
class OverlapEntailment : public EntailmentScorer {
public:
  explicit OverlapEntailment(std::string name = "overlap")
      : name_(std::move(name)) {}

  const std::string& name() const override { return name_; }
  bool thread_safe() const override { return true; }

  double score(const std::string& premise,
               const std::string& hypothesis) override {
    std::vector<std::string> hyp = tokenize_for_rouge(hypothesis, false);
    if (hyp.empty()) return 0.0;
    std::vector<std::string> prem = tokenize_for_rouge(premise, false);
    std::map<std::string, std::size_t> counts;
    for (const std::string& t : prem) ++counts[t];
    std::size_t matched = 0;
    for (const std::string& t : hyp) {
      auto it = counts.find(t);
      if (it != counts.end() && it->second > 0) {
        --it->second;
        ++matched;
      }
    }
    return static_cast<double>(matched) / static_cast<double>(hyp.size());
  }

private:
  std::string name_;
};

// Wraps any generator and reports it as not thread-safe; for tests of the
// batch runner's serialization gate.
class NotThreadSafeGenerator : public TextGenerator {
public:
  explicit NotThreadSafeGenerator(std::shared_ptr<TextGenerator> inner)
      : inner_(std::move(inner)) {}

  const std::string& name() const override { return inner_->name(); }
  bool thread_safe() const override { return false; }

  std::string generate(const std::string& prompt, int beam) override {
    return inner_->generate(prompt, beam);
  }

private:
  std::shared_ptr<TextGenerator> inner_;
};

}  // namespace zerofec
