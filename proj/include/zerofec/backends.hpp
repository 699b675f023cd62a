#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

#include <json.hpp>

#include "zerofec/errors.hpp"
#include "zerofec/text.hpp"

namespace zerofec {

// Seq2seq backend: one prompt in, the single best decode out. beam_width
// is advisory for remote backends and ignored by deterministic mocks, but
// it is part of the determinism contract: same (prompt, beam_width), same
// output.
class TextGenerator {
public:
  virtual ~TextGenerator() = default;
  virtual const std::string& name() const = 0;
  virtual bool thread_safe() const = 0;
  virtual std::string generate(const std::string& prompt, int beam_width) = 0;
};

// P(premise entails hypothesis) in [0, 1].
class EntailmentScorer {
public:
  virtual ~EntailmentScorer() = default;
  virtual const std::string& name() const = 0;
  virtual bool thread_safe() const = 0;
  virtual double score(const std::string& premise,
                       const std::string& hypothesis) = 0;
};

// The four models one correction run talks to.
struct BackendSet {
  std::shared_ptr<TextGenerator> qg;
  std::shared_ptr<TextGenerator> qa;
  std::shared_ptr<TextGenerator> qa2claim;
  std::shared_ptr<EntailmentScorer> entailment;
};

inline constexpr std::string_view kDefaultQgTemplate = "{answer} \n {context}";
inline constexpr std::string_view kDefaultQaTemplate =
    "{question} \n {evidence}";
inline constexpr std::string_view kDefaultQa2ClaimTemplate =
    "{question} \n {answer}";
inline constexpr std::string_view kPromptSeparator = " \n ";
inline constexpr int kDefaultBeamWidth = 4;

// Substitutes {placeholder} slots. Every listed placeholder must occur in
// the template at least once.
inline std::string format_template(
    std::string_view tmpl,
    std::initializer_list<std::pair<std::string_view, std::string_view>>
        slots) {
  std::string out(tmpl);
  for (const auto& [key, value] : slots) {
    std::string token = "{" + std::string(key) + "}";
    std::size_t pos = out.find(token);
    if (pos == std::string::npos)
      throw TemplateError("template is missing placeholder " + token);
    do {
      out.replace(pos, token.size(), value);
      pos = out.find(token, pos + value.size());
    } while (pos != std::string::npos);
  }
  return out;
}

inline std::string format_qg_prompt(std::string_view tmpl,
                                    std::string_view answer,
                                    std::string_view context) {
  return format_template(tmpl, {{"answer", answer}, {"context", context}});
}

inline std::string format_qa_prompt(std::string_view tmpl,
                                    std::string_view question,
                                    std::string_view evidence) {
  return format_template(tmpl, {{"question", question}, {"evidence", evidence}});
}

inline std::string format_qa2claim_prompt(std::string_view tmpl,
                                          std::string_view question,
                                          std::string_view answer) {
  return format_template(tmpl, {{"question", question}, {"answer", answer}});
}

// Splits a default-template prompt at its first " \n " separator. The
// segments round-trip as long as the first slot's value does not itself
// contain the separator (claims and questions are single sentences).
inline std::pair<std::string, std::string> parse_default_prompt(
    std::string_view prompt) {
  std::size_t pos = prompt.find(kPromptSeparator);
  if (pos == std::string_view::npos) return {std::string(prompt), ""};
  return {std::string(prompt.substr(0, pos)),
          std::string(prompt.substr(pos + kPromptSeparator.size()))};
}

// File-backed response cache. Keyed by (backend name, beam width, prompt);
// persisted as newline-delimited JSON records so interrupted runs resume
// without re-querying. Safe for concurrent readers and writers.
class ResponseCache {
public:
  explicit ResponseCache(std::filesystem::path file) : path_(std::move(file)) {
    std::ifstream in(path_);
    if (in) {
      std::string line;
      std::size_t lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        if (is_blank(line)) continue;
        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.contains("backend") ||
            !rec.contains("prompt") || !rec.contains("output"))
          throw ParseError(lineno, "malformed cache record");
        int beam = rec.value("beam_width", 0);
        entries_[key(rec["backend"].get<std::string>(), beam,
                     rec["prompt"].get<std::string>())] =
            rec["output"].get<std::string>();
      }
    }
    out_.open(path_, std::ios::app);
  }

  std::optional<std::string> lookup(const std::string& backend, int beam,
                                    const std::string& prompt) const {
    std::shared_lock lock(mu_);
    auto it = entries_.find(key(backend, beam, prompt));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void store(const std::string& backend, int beam, const std::string& prompt,
             const std::string& output) {
    std::unique_lock lock(mu_);
    auto [it, inserted] = entries_.emplace(key(backend, beam, prompt), output);
    if (!inserted) return;
    nlohmann::ordered_json rec;
    rec["backend"] = backend;
    rec["prompt"] = prompt;
    rec["beam_width"] = beam;
    rec["output"] = output;
    out_ << rec.dump() << '\n';
    out_.flush();
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
  }

private:
  static std::string key(const std::string& backend, int beam,
                         const std::string& prompt) {
    return backend + '\x1f' + std::to_string(beam) + '\x1f' + prompt;
  }

  std::filesystem::path path_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::string> entries_;
  std::ofstream out_;
};

// Memoizing decorator for a TextGenerator.
class CachedGenerator : public TextGenerator {
public:
  CachedGenerator(std::shared_ptr<TextGenerator> inner,
                  std::shared_ptr<ResponseCache> cache)
      : inner_(std::move(inner)), cache_(std::move(cache)) {}

  const std::string& name() const override { return inner_->name(); }
  bool thread_safe() const override { return inner_->thread_safe(); }

  std::string generate(const std::string& prompt, int beam_width) override {
    if (auto hit = cache_->lookup(inner_->name(), beam_width, prompt))
      return *hit;
    std::string out = inner_->generate(prompt, beam_width);
    cache_->store(inner_->name(), beam_width, prompt, out);
    return out;
  }

private:
  std::shared_ptr<TextGenerator> inner_;
  std::shared_ptr<ResponseCache> cache_;
};

// Memoizing decorator for an EntailmentScorer. Premise and hypothesis are
// composed into one cache key with a separator neither can contain (0x1F).
class CachedEntailment : public EntailmentScorer {
public:
  CachedEntailment(std::shared_ptr<EntailmentScorer> inner,
                   std::shared_ptr<ResponseCache> cache)
      : inner_(std::move(inner)), cache_(std::move(cache)) {}

  const std::string& name() const override { return inner_->name(); }
  bool thread_safe() const override { return inner_->thread_safe(); }

  double score(const std::string& premise,
               const std::string& hypothesis) override {
    std::string k = premise + '\x1f' + hypothesis;
    if (auto hit = cache_->lookup(inner_->name(), 0, k))
      return nlohmann::json::parse(*hit).get<double>();
    double p = inner_->score(premise, hypothesis);
    // nlohmann prints shortest-round-trip doubles, so the cached value
    // reparses bit-exactly.
    cache_->store(inner_->name(), 0, k, nlohmann::json(p).dump());
    return p;
  }

private:
  std::shared_ptr<EntailmentScorer> inner_;
  std::shared_ptr<ResponseCache> cache_;
};

}  // namespace zerofec
