#pragma once

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "zerofec/errors.hpp"
#include "zerofec/text.hpp"

namespace zerofec {

enum class Upos {
  Noun,
  Propn,
  Verb,
  Aux,
  Adj,
  Adv,
  Adp,
  Det,
  Pron,
  Cconj,
  Sconj,
  Part,
  Num,
  Punct,
  X,
};

inline const char* to_string(Upos t) {
  switch (t) {
    case Upos::Noun: return "NOUN";
    case Upos::Propn: return "PROPN";
    case Upos::Verb: return "VERB";
    case Upos::Aux: return "AUX";
    case Upos::Adj: return "ADJ";
    case Upos::Adv: return "ADV";
    case Upos::Adp: return "ADP";
    case Upos::Det: return "DET";
    case Upos::Pron: return "PRON";
    case Upos::Cconj: return "CCONJ";
    case Upos::Sconj: return "SCONJ";
    case Upos::Part: return "PART";
    case Upos::Num: return "NUM";
    case Upos::Punct: return "PUNCT";
    case Upos::X: return "X";
  }
  return "X";
}

inline Upos upos_from_string(const std::string& s) {
  static const std::unordered_map<std::string, Upos> map{
      {"NOUN", Upos::Noun},   {"PROPN", Upos::Propn}, {"VERB", Upos::Verb},
      {"AUX", Upos::Aux},     {"ADJ", Upos::Adj},     {"ADV", Upos::Adv},
      {"ADP", Upos::Adp},     {"DET", Upos::Det},     {"PRON", Upos::Pron},
      {"CCONJ", Upos::Cconj}, {"SCONJ", Upos::Sconj}, {"PART", Upos::Part},
      {"NUM", Upos::Num},     {"PUNCT", Upos::Punct},
  };
  auto it = map.find(s);
  return it == map.end() ? Upos::X : it->second;
}

struct AnnotToken {
  std::string text;
  Upos pos = Upos::X;
  std::size_t begin = 0;
  std::size_t end = 0;
};

enum class SpanLabel { NounChunk, NamedEntity, NP, VP };

inline const char* to_string(SpanLabel l) {
  switch (l) {
    case SpanLabel::NounChunk: return "NOUN_CHUNK";
    case SpanLabel::NamedEntity: return "NAMED_ENTITY";
    case SpanLabel::NP: return "NP";
    case SpanLabel::VP: return "VP";
  }
  return "?";
}

inline SpanLabel span_label_from_string(const std::string& s) {
  if (s == "NOUN_CHUNK") return SpanLabel::NounChunk;
  if (s == "NAMED_ENTITY") return SpanLabel::NamedEntity;
  if (s == "NP") return SpanLabel::NP;
  if (s == "VP") return SpanLabel::VP;
  throw ProtocolError("unknown span label: " + s);
}

struct AnnotSpan {
  SpanLabel label;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Tokens in document order with character offsets, plus labeled spans
// aligned to token boundaries.
struct Annotation {
  std::vector<AnnotToken> tokens;
  std::vector<AnnotSpan> spans;
};

class Annotator {
public:
  virtual ~Annotator() = default;
  virtual const std::string& name() const = 0;
  virtual Annotation annotate(const std::string& text) = 0;
};

// Word lists behind the built-in tagger. Defaults are embedded below and
// mirrored one-token-per-line under resources/.
struct LexiconSet {
  std::set<std::string> determiners;
  std::set<std::string> prepositions;
  std::set<std::string> conjunctions;
  std::set<std::string> subordinators;
  std::set<std::string> pronouns;
  std::set<std::string> auxiliaries;
  std::set<std::string> particles;
  std::set<std::string> adverbs;
  std::set<std::string> number_words;
};

namespace lexicon_data {

inline const std::vector<std::string>& determiners() {
  static const std::vector<std::string> v{
      "a",    "an",    "the",  "this",  "that",    "these", "those",
      "each", "every", "either", "neither", "both", "all",  "some",
      "any",  "no",    "my",   "your",  "his",     "her",   "its",
      "our",  "their", "whose", "what", "which"};
  return v;
}

inline const std::vector<std::string>& prepositions() {
  static const std::vector<std::string> v{
      "of",      "in",      "on",         "at",      "by",      "for",
      "with",    "from",    "to",         "into",    "onto",    "over",
      "under",   "above",   "below",      "between", "among",   "during",
      "before",  "after",   "against",    "about",   "across",  "along",
      "around",  "behind",  "beside",     "besides", "beyond",  "down",
      "inside",  "near",    "off",        "outside", "through", "throughout",
      "toward",  "towards", "up",         "upon",    "within",  "without",
      "per",     "via",     "amid",       "despite", "unlike",  "until"};
  return v;
}

inline const std::vector<std::string>& conjunctions() {
  static const std::vector<std::string> v{"and", "or", "but", "nor", "yet",
                                          "plus"};
  return v;
}

inline const std::vector<std::string>& subordinators() {
  static const std::vector<std::string> v{"because", "although", "though",
                                          "while",   "whereas",  "unless",
                                          "if",      "whether",  "since"};
  return v;
}

inline const std::vector<std::string>& pronouns() {
  static const std::vector<std::string> v{
      "i",    "you",     "he",      "she",    "it",        "we",
      "they", "me",      "him",     "us",     "them",      "who",
      "whom", "himself", "herself", "itself", "themselves"};
  return v;
}

inline const std::vector<std::string>& auxiliaries() {
  static const std::vector<std::string> v{
      "am",       "is",        "are",     "was",     "were",    "be",
      "been",     "being",     "do",      "does",    "did",     "have",
      "has",      "had",       "can",     "could",   "will",    "would",
      "shall",    "should",    "may",     "might",   "must",    "won't",
      "can't",    "don't",     "doesn't", "didn't",  "isn't",   "aren't",
      "wasn't",   "weren't",   "hasn't",  "haven't", "hadn't",  "couldn't",
      "wouldn't", "shouldn't", "mustn't"};
  return v;
}

inline const std::vector<std::string>& particles() {
  static const std::vector<std::string> v{"not", "n't"};
  return v;
}

inline const std::vector<std::string>& adverbs() {
  static const std::vector<std::string> v{
      "never",    "also",       "very",          "too",       "already",
      "still",    "often",      "always",        "sometimes", "usually",
      "later",    "now",        "then",          "here",      "there",
      "soon",     "again",      "once",          "almost",    "only",
      "just",     "more",       "most",          "less",      "least",
      "rather",   "quite",      "perhaps",       "maybe",     "currently",
      "formerly", "originally", "approximately"};
  return v;
}

inline const std::vector<std::string>& number_words() {
  static const std::vector<std::string> v{
      "zero",    "one",       "two",      "three",    "four",
      "five",    "six",       "seven",    "eight",    "nine",
      "ten",     "eleven",    "twelve",   "thirteen", "fourteen",
      "fifteen", "sixteen",   "seventeen", "eighteen", "nineteen",
      "twenty",  "thirty",    "forty",    "fifty",    "sixty",
      "seventy", "eighty",    "ninety",   "hundred",  "thousand",
      "million", "billion",   "trillion"};
  return v;
}

}  // namespace lexicon_data

inline LexiconSet default_lexicons() {
  auto as_set = [](const std::vector<std::string>& v) {
    return std::set<std::string>(v.begin(), v.end());
  };
  LexiconSet lex;
  lex.determiners = as_set(lexicon_data::determiners());
  lex.prepositions = as_set(lexicon_data::prepositions());
  lex.conjunctions = as_set(lexicon_data::conjunctions());
  lex.subordinators = as_set(lexicon_data::subordinators());
  lex.pronouns = as_set(lexicon_data::pronouns());
  lex.auxiliaries = as_set(lexicon_data::auxiliaries());
  lex.particles = as_set(lexicon_data::particles());
  lex.adverbs = as_set(lexicon_data::adverbs());
  lex.number_words = as_set(lexicon_data::number_words());
  return lex;
}

// One lowercase token per line; blank lines and #-comments skipped.
inline std::vector<std::string> load_token_list(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open lexicon file: " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    out.push_back(t);
  }
  return out;
}

// Loads the tagger word lists from pos_*.txt files in dir. File names are
// fixed; tools/gen_lexicons regenerates the stock set from the embedded
// defaults.
inline LexiconSet lexicons_from_dir(const std::filesystem::path& dir) {
  auto as_set = [&](const char* name) {
    auto v = load_token_list(dir / name);
    return std::set<std::string>(v.begin(), v.end());
  };
  LexiconSet lex;
  lex.determiners = as_set("pos_determiners.txt");
  lex.prepositions = as_set("pos_prepositions.txt");
  lex.conjunctions = as_set("pos_conjunctions.txt");
  lex.subordinators = as_set("pos_subordinators.txt");
  lex.pronouns = as_set("pos_pronouns.txt");
  lex.auxiliaries = as_set("pos_auxiliaries.txt");
  lex.particles = as_set("pos_particles.txt");
  lex.adverbs = as_set("pos_adverbs.txt");
  lex.number_words = as_set("pos_number_words.txt");
  return lex;
}

// Deterministic rule annotator. Tokenization: maximal alphanumeric runs
// with word-internal apostrophes ("won't" is one token); every other
// non-space character is its own PUNCT token. Tagging: closed-class
// lexicon first, then digit/capitalization/context/suffix rules, default
// NOUN. Chunking: NOUN_CHUNK and NP are maximal (DET|ADJ|NUM)* (NOUN|
// PROPN)+ runs trimmed to their last nominal; NAMED_ENTITY is a maximal
// PROPN or NUM run; VP spans the first verbal token through the last
// non-punctuation token.
class BuiltinAnnotator : public Annotator {
public:
  explicit BuiltinAnnotator(LexiconSet lex = default_lexicons())
      : lex_(std::move(lex)) {}

  const std::string& name() const override {
    static const std::string n = "builtin";
    return n;
  }

  Annotation annotate(const std::string& text) override {
    Annotation ann;
    tokenize(text, ann.tokens);
    tag(ann.tokens);
    chunk(ann.tokens, ann.spans);
    return ann;
  }

private:
  LexiconSet lex_;

  static void tokenize(const std::string& text,
                       std::vector<AnnotToken>& tokens) {
    std::size_t i = 0;
    std::size_t n = text.size();
    while (i < n) {
      char c = text[i];
      if (is_ascii_space(c)) {
        ++i;
        continue;
      }
      if (is_ascii_alnum(c)) {
        std::size_t b = i;
        while (i < n &&
               (is_ascii_alnum(text[i]) ||
                (text[i] == '\'' && i + 1 < n && is_ascii_alnum(text[i + 1]) &&
                 i > b)))
          ++i;
        tokens.push_back({text.substr(b, i - b), Upos::X, b, i});
      } else {
        tokens.push_back({text.substr(i, 1), Upos::Punct, i, i + 1});
        ++i;
      }
    }
  }

  Upos lexicon_tag(const std::string& lower) const {
    if (lex_.auxiliaries.count(lower)) return Upos::Aux;
    if (lex_.particles.count(lower)) return Upos::Part;
    if (lex_.determiners.count(lower)) return Upos::Det;
    if (lex_.prepositions.count(lower)) return Upos::Adp;
    if (lex_.conjunctions.count(lower)) return Upos::Cconj;
    if (lex_.subordinators.count(lower)) return Upos::Sconj;
    if (lex_.pronouns.count(lower)) return Upos::Pron;
    if (lex_.adverbs.count(lower)) return Upos::Adv;
    if (lex_.number_words.count(lower)) return Upos::Num;
    return Upos::X;
  }

  static bool ends_with(const std::string& s, std::string_view suf) {
    return s.size() >= suf.size() &&
           std::string_view(s).substr(s.size() - suf.size()) == suf;
  }

  void tag(std::vector<AnnotToken>& tokens) const {
    Upos prev = Upos::X;
    for (AnnotToken& t : tokens) {
      if (t.pos == Upos::Punct) continue;  // set by the tokenizer
      std::string lower = to_lower(t.text);
      char first = t.text[0];
      if (first >= '0' && first <= '9') {
        t.pos = Upos::Num;
      } else if (Upos lex = lexicon_tag(lower); lex != Upos::X) {
        t.pos = lex;
      } else if (first >= 'A' && first <= 'Z') {
        t.pos = Upos::Propn;
      } else if (prev == Upos::Aux || prev == Upos::Part) {
        t.pos = Upos::Verb;
      } else if (ends_with(lower, "ly")) {
        t.pos = Upos::Adv;
      } else if (ends_with(lower, "ing") || ends_with(lower, "ed") ||
                 ends_with(lower, "izes") || ends_with(lower, "ises") ||
                 ends_with(lower, "ifies") || ends_with(lower, "ize") ||
                 ends_with(lower, "ise") || ends_with(lower, "ify")) {
        t.pos = Upos::Verb;
      } else if (prev == Upos::Propn && ends_with(lower, "s") &&
                 !ends_with(lower, "ss") && !ends_with(lower, "ies") &&
                 !ends_with(lower, "us")) {
        // Third-person-singular guess: "<Name> airs on ..." reads as a
        // verb, "TV series" and "citrus" do not.
        t.pos = Upos::Verb;
      } else if (ends_with(lower, "ous") || ends_with(lower, "ful") ||
                 ends_with(lower, "ive") || ends_with(lower, "less") ||
                 ends_with(lower, "able")) {
        t.pos = Upos::Adj;
      } else {
        t.pos = Upos::Noun;
      }
      prev = t.pos;
    }
  }

  static bool nominal(Upos t) { return t == Upos::Noun || t == Upos::Propn; }

  static bool chunkable(Upos t) {
    return nominal(t) || t == Upos::Det || t == Upos::Adj || t == Upos::Num;
  }

  static void chunk(const std::vector<AnnotToken>& tokens,
                    std::vector<AnnotSpan>& spans) {
    std::size_t n = tokens.size();
    // NOUN_CHUNK and NP: (DET|ADJ|NUM)* (NOUN|PROPN)+ trimmed to the last
    // nominal token.
    for (std::size_t i = 0; i < n;) {
      if (!chunkable(tokens[i].pos)) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < n && chunkable(tokens[j].pos)) ++j;
      std::size_t k = j;
      while (k > i && !nominal(tokens[k - 1].pos)) --k;
      if (k > i) {
        spans.push_back(
            {SpanLabel::NounChunk, tokens[i].begin, tokens[k - 1].end});
        spans.push_back({SpanLabel::NP, tokens[i].begin, tokens[k - 1].end});
      }
      i = j;
    }
    // NAMED_ENTITY: maximal PROPN runs and maximal NUM runs.
    for (Upos kind : {Upos::Propn, Upos::Num}) {
      for (std::size_t i = 0; i < n;) {
        if (tokens[i].pos != kind) {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < n && tokens[j].pos == kind) ++j;
        spans.push_back(
            {SpanLabel::NamedEntity, tokens[i].begin, tokens[j - 1].end});
        i = j;
      }
    }
    // VP: first verbal token through the last non-punctuation token.
    std::size_t first_verb = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (tokens[i].pos == Upos::Verb || tokens[i].pos == Upos::Aux) {
        first_verb = i;
        break;
      }
    }
    if (first_verb < n) {
      std::size_t last = n;
      for (std::size_t i = n; i-- > first_verb;) {
        if (tokens[i].pos != Upos::Punct) {
          last = i;
          break;
        }
      }
      if (last != n && last >= first_verb)
        spans.push_back(
            {SpanLabel::VP, tokens[first_verb].begin, tokens[last].end});
    }
  }
};

// Adapter for an external annotation toolkit run as a subprocess. The
// command receives the text on stdin and must print one JSON object:
//   {"tokens": [{"text","pos","begin","end"}, ...],
//    "spans":  [{"label","begin","end"}, ...]}
// A command that cannot start or exits nonzero raises
// AnnotatorUnavailable; unparseable output raises ProtocolError.
class CommandAnnotator : public Annotator {
public:
  explicit CommandAnnotator(std::string command)
      : command_(std::move(command)),
        name_("command:" + command_) {}

  const std::string& name() const override { return name_; }

  Annotation annotate(const std::string& text) override {
    std::lock_guard lock(mu_);
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path();
    fs::path in_path =
        dir / ("zerofec_annot_" + std::to_string(++counter_) + "_" +
               std::to_string(static_cast<unsigned>(::getpid())) + ".txt");
    {
      std::ofstream out(in_path, std::ios::binary);
      out << text << '\n';
    }
    std::string cmd = command_ + " < " + in_path.string() + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) {
      fs::remove(in_path);
      throw AnnotatorUnavailable("cannot launch annotator command: " +
                                 command_);
    }
    std::string output;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0)
      output.append(buf, got);
    int status = ::pclose(pipe);
    fs::remove(in_path);
    if (status != 0)
      throw AnnotatorUnavailable("annotator command failed (status " +
                                 std::to_string(status) + "): " + command_);
    return parse_output(output);
  }

private:
  static Annotation parse_output(const std::string& output) {
    nlohmann::json doc = nlohmann::json::parse(output, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("tokens"))
      throw ProtocolError("annotator command printed malformed JSON");
    Annotation ann;
    for (const auto& t : doc["tokens"]) {
      AnnotToken tok;
      tok.text = t.at("text").get<std::string>();
      tok.pos = upos_from_string(t.at("pos").get<std::string>());
      tok.begin = t.at("begin").get<std::size_t>();
      tok.end = t.at("end").get<std::size_t>();
      ann.tokens.push_back(std::move(tok));
    }
    for (const auto& s : doc.value("spans", nlohmann::json::array())) {
      AnnotSpan span;
      span.label = span_label_from_string(s.at("label").get<std::string>());
      span.begin = s.at("begin").get<std::size_t>();
      span.end = s.at("end").get<std::size_t>();
      ann.spans.push_back(span);
    }
    return ann;
  }

  std::string command_;
  std::string name_;
  std::mutex mu_;
  unsigned long counter_ = 0;
};

// "builtin" or "command:<shell command>".
inline std::unique_ptr<Annotator> make_annotator(const std::string& spec) {
  if (spec == "builtin") return std::make_unique<BuiltinAnnotator>();
  constexpr std::string_view prefix = "command:";
  if (spec.rfind(prefix, 0) == 0) {
    std::string cmd = trim(spec.substr(prefix.size()));
    if (cmd.empty()) throw ConfigError("empty annotator command");
    return std::make_unique<CommandAnnotator>(cmd);
  }
  throw ConfigError("unknown annotator: " + spec);
}

}  // namespace zerofec
