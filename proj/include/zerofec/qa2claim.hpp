#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "zerofec/backends.hpp"
#include "zerofec/errors.hpp"
#include "zerofec/extract.hpp"
#include "zerofec/text.hpp"

namespace zerofec {

enum class YesNo { Yes, No };

// A yes/no question with its answer, the pair the rule-based
// declarativizer converts.
struct BooleanQA {
  std::string question;
  YesNo answer = YesNo::Yes;
};

namespace verb_data {

// "base past participle" per line. Misses fall back to regular inflection.
inline const std::vector<std::string>& irregular_verbs() {
  static const std::vector<std::string> v{
      "be was been",          "have had had",
      "do did done",          "go went gone",
      "say said said",        "make made made",
      "take took taken",      "come came come",
      "see saw seen",         "know knew known",
      "get got gotten",       "give gave given",
      "find found found",     "think thought thought",
      "tell told told",       "become became become",
      "leave left left",      "feel felt felt",
      "put put put",          "bring brought brought",
      "begin began begun",    "keep kept kept",
      "hold held held",       "write wrote written",
      "stand stood stood",    "hear heard heard",
      "let let let",          "mean meant meant",
      "set set set",          "meet met met",
      "run ran run",          "pay paid paid",
      "sit sat sat",          "speak spoke spoken",
      "lie lay lain",         "lead led led",
      "read read read",       "grow grew grown",
      "lose lost lost",       "fall fell fallen",
      "send sent sent",       "build built built",
      "draw drew drawn",      "break broke broken",
      "spend spent spent",    "cut cut cut",
      "rise rose risen",      "drive drove driven",
      "buy bought bought",    "wear wore worn",
      "choose chose chosen",  "seek sought sought",
      "throw threw thrown",   "catch caught caught",
      "deal dealt dealt",     "win won won",
      "forget forgot forgotten", "lay laid laid",
      "sing sang sung",       "fight fought fought",
      "bear bore born",       "teach taught taught",
      "eat ate eaten",        "swim swam swum",
      "sell sold sold",       "sleep slept slept",
      "fly flew flown",       "ride rode ridden",
      "strike struck struck", "shoot shot shot",
      "feed fed fed",         "beat beat beaten",
      "light lit lit",        "bind bound bound",
      "cast cast cast",       "hang hung hung",
      "hide hid hidden",      "hit hit hit",
      "hurt hurt hurt",       "quit quit quit",
      "shake shook shaken",   "shut shut shut",
      "spin spun spun",       "spread spread spread",
      "steal stole stolen",   "stick stuck stuck",
      "swear swore sworn",    "sweep swept swept",
      "swing swung swung",    "tear tore torn",
      "wake woke woken",      "weave wove woven",
      "wind wound wound",     "withdraw withdrew withdrawn",
      "freeze froze frozen",  "burst burst burst",
      "cost cost cost",       "dig dug dug",
      "blow blew blown",      "arise arose arisen",
      "awake awoke awoken",   "bend bent bent",
      "bet bet bet",          "bite bit bitten",
      "bleed bled bled",      "breed bred bred",
      "cling clung clung",    "creep crept crept",
      "drink drank drunk",    "flee fled fled",
      "forbid forbade forbidden", "forgive forgave forgiven",
      "kneel knelt knelt",    "lend lent lent",
      "prove proved proven",  "ring rang rung",
      "shed shed shed",       "shine shone shone",
      "sink sank sunk",       "slide slid slid",
      "split split split",    "spring sprang sprung",
      "understand understood understood",
      "shrink shrank shrunk", "stride strode stridden",
      "string strung strung", "swell swelled swollen",
      "undergo underwent undergone", "uphold upheld upheld",
      "overcome overcame overcome",  "overtake overtook overtaken",
      "rebuild rebuilt rebuilt",     "repay repaid repaid",
      "reset reset reset",           "rewrite rewrote rewritten",
      "undo undid undone",           "unwind unwound unwound"};
  return v;
}

// The auxiliary/modal forms a boolean question may start with.
inline const std::vector<std::string>& auxiliaries() {
  static const std::vector<std::string> v{
      "am",   "is",    "are",  "was",    "were", "do",  "does",
      "did",  "has",   "have", "had",    "can",  "could", "will",
      "would", "shall", "should", "may", "might", "must"};
  return v;
}

// Base forms used to spot the main verb of do-support and modal
// questions. Deliberately excludes common verb/noun homographs ("show",
// "play", "name") that would split the subject too early.
inline const std::vector<std::string>& base_verbs() {
  static const std::vector<std::string> v{
      "accept",    "act",       "adapt",     "air",        "announce",
      "appear",    "arrange",   "arrive",    "attend",     "belong",
      "believe",   "border",    "carry",     "celebrate",  "compose",
      "confirm",   "connect",   "consider",  "contain",    "continue",
      "create",    "dance",     "defeat",    "deny",       "depict",
      "derive",    "describe",  "develop",   "die",        "direct",
      "earn",      "elect",     "employ",    "end",        "establish",
      "exist",     "expand",    "feature",   "follow",     "found",
      "govern",    "graduate",  "happen",    "hire",       "honor",
      "host",      "include",   "join",      "learn",      "live",
      "manage",    "marry",     "move",      "nominate",   "occur",
      "operate",   "oppose",    "orbit",     "originate",  "own",
      "perform",   "portray",   "precede",   "premiere",   "produce",
      "publish",   "raise",     "receive",   "refer",      "reign",
      "reject",    "release",   "remain",    "replace",    "represent",
      "retire",    "return",    "reveal",    "revolve",    "serve",
      "settle",    "span",      "star",      "stay",       "study",
      "succeed",   "support",   "teach",     "translate",  "travel",
      "visit",     "weigh",     "work"};
  return v;
}

}  // namespace verb_data

// Verb knowledge the declarativizer consults: irregular table, auxiliary
// set, base-verb list.
struct VerbLexicon {
  std::map<std::string, std::string> past_of;  // base -> simple past
  std::set<std::string> inflected_forms;       // pasts and participles
  std::set<std::string> base_forms;            // bases (incl. irregular bases)
  std::set<std::string> auxiliaries;

  static VerbLexicon from_lines(const std::vector<std::string>& irregular,
                                const std::vector<std::string>& aux,
                                const std::vector<std::string>& bases) {
    VerbLexicon lex;
    for (const std::string& line : irregular) {
      std::vector<std::string> cols = split_whitespace(line);
      if (cols.size() != 3)
        throw ConfigError("irregular verb line needs 3 columns: " + line);
      lex.past_of.emplace(cols[0], cols[1]);
      lex.base_forms.insert(cols[0]);
      lex.inflected_forms.insert(cols[1]);
      lex.inflected_forms.insert(cols[2]);
    }
    for (const std::string& a : aux) lex.auxiliaries.insert(a);
    for (const std::string& b : bases) lex.base_forms.insert(b);
    return lex;
  }

  static const VerbLexicon& defaults() {
    static const VerbLexicon lex =
        from_lines(verb_data::irregular_verbs(), verb_data::auxiliaries(),
                   verb_data::base_verbs());
    return lex;
  }

  static VerbLexicon from_dir(const std::filesystem::path& dir) {
    return from_lines(load_token_list(dir / "irregular_verbs.txt"),
                      load_token_list(dir / "auxiliaries.txt"),
                      load_token_list(dir / "base_verbs.txt"));
  }
};

// Regular rules (+s; consonant-y to -ies; +es after s/x/z/ch/sh/o) with
// irregular overrides {be, have, do, go}.
inline std::string inflect_third_singular(const std::string& base) {
  if (base == "be") return "is";
  if (base == "have") return "has";
  if (base == "do") return "does";
  if (base == "go") return "goes";
  auto ends = [&](std::string_view suf) {
    return base.size() >= suf.size() &&
           std::string_view(base).substr(base.size() - suf.size()) == suf;
  };
  auto vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
  };
  if (ends("s") || ends("x") || ends("z") || ends("ch") || ends("sh") ||
      ends("o"))
    return base + "es";
  if (base.size() >= 2 && base.back() == 'y' && !vowel(base[base.size() - 2]))
    return base.substr(0, base.size() - 1) + "ies";
  return base + "s";
}

// Simple past: irregular table first, then +d / -y+ied / +ed.
inline std::string inflect_past(const std::string& base,
                                const VerbLexicon& lex = VerbLexicon::defaults()) {
  auto it = lex.past_of.find(base);
  if (it != lex.past_of.end()) return it->second;
  auto vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
  };
  if (!base.empty() && base.back() == 'e') return base + "d";
  if (base.size() >= 2 && base.back() == 'y' && !vowel(base[base.size() - 2]))
    return base.substr(0, base.size() - 1) + "ied";
  return base + "ed";
}

namespace detail {

inline bool is_modal(const std::string& aux) {
  static const std::set<std::string> modals{"can",   "could", "will",
                                            "would", "shall", "should",
                                            "may",   "might", "must"};
  return modals.count(aux) != 0;
}

inline bool is_do_form(const std::string& aux) {
  return aux == "do" || aux == "does" || aux == "did";
}

// A token that plausibly starts the predicate: an irregular verb form, an
// -ing/-ed form whose stem still has a vowel (so "thing", "spring" and
// "bred" do not fire; "-eed" nouns like "breed" are excluded too), or
// (after do/modal auxiliaries, which demand a base-form main verb) a known
// base verb.
inline bool is_verb_cue(const std::string& lower, bool base_cues,
                        const VerbLexicon& lex) {
  if (lex.inflected_forms.count(lower)) return true;
  auto stem_has_vowel = [&](std::size_t drop) {
    for (std::size_t i = 0; i + drop < lower.size(); ++i) {
      char c = lower[i];
      if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u')
        return true;
    }
    return false;
  };
  auto ends = [&](std::string_view suf) {
    return lower.size() > suf.size() &&
           std::string_view(lower).substr(lower.size() - suf.size()) == suf;
  };
  if (ends("ing") && stem_has_vowel(3)) return true;
  if (ends("ed") && !ends("eed") && stem_has_vowel(2)) return true;
  if (base_cues && lex.base_forms.count(lower)) return true;
  return false;
}

inline bool starts_uppercase(const std::string& s) {
  return !s.empty() && s[0] >= 'A' && s[0] <= 'Z';
}

}  // namespace detail

// Undoes subject-auxiliary inversion. The subject is the token span from
// the word after the auxiliary up to the first verb cue, non-initial core
// determiner (a/an/the) or negation term; cue-less questions fall back to
// the leading capitalized run (kept one short of the whole question), then
// determiner+noun, then a single token. do/does/did are deleted for YES
// answers and their main verb re-inflected; NO answers put "not" after the
// auxiliary. The terminal "?" becomes "."; content-word casing survives.
inline std::string declarativize(const BooleanQA& qa,
                                 const VerbLexicon& lex = VerbLexicon::defaults()) {
  std::vector<std::string> tokens = split_whitespace(qa.question);
  while (!tokens.empty()) {
    std::string& last = tokens.back();
    while (!last.empty() && (last.back() == '?' || last.back() == '.'))
      last.pop_back();
    if (last.empty())
      tokens.pop_back();
    else
      break;
  }
  if (tokens.empty())
    throw UnparseableQuestion("question has no words: " + qa.question);
  std::string aux = to_lower(tokens.front());
  if (!lex.auxiliaries.count(aux))
    throw UnparseableQuestion("question does not start with an auxiliary: " +
                              qa.question);
  std::vector<std::string> rest(tokens.begin() + 1, tokens.end());
  if (rest.empty())
    throw UnparseableQuestion("question has no subject: " + qa.question);

  bool do_form = detail::is_do_form(aux);
  bool base_cues = do_form || detail::is_modal(aux);
  std::size_t split = rest.size();
  for (std::size_t i = 1; i < rest.size(); ++i) {
    std::string lower = to_lower(rest[i]);
    if (lower == "a" || lower == "an" || lower == "the" ||
        default_negation_lexicon().count(lower) ||
        detail::is_verb_cue(lower, base_cues, lex)) {
      split = i;
      break;
    }
  }
  if (split == rest.size()) {
    if (rest.size() == 1) {
      split = 1;
    } else {
      std::size_t cap = 0;
      while (cap < rest.size() && detail::starts_uppercase(rest[cap])) ++cap;
      if (cap == rest.size()) cap = rest.size() - 1;
      if (cap >= 1) {
        split = cap;
      } else if (default_lexicons().determiners.count(to_lower(rest[0])) &&
                 rest.size() >= 2) {
        split = 2;
      } else {
        split = 1;
      }
    }
  }

  std::vector<std::string> subject(rest.begin(), rest.begin() + split);
  std::vector<std::string> remainder(rest.begin() + split, rest.end());
  std::vector<std::string> words = subject;

  if (qa.answer == YesNo::No) {
    words.push_back(aux);
    words.push_back("not");
    words.insert(words.end(), remainder.begin(), remainder.end());
  } else if (do_form) {
    if (remainder.empty())
      throw UnparseableQuestion("do-question has no main verb: " +
                                qa.question);
    std::string verb = to_lower(remainder.front());
    std::string inflected = aux == "does" ? inflect_third_singular(verb)
                            : aux == "did" ? inflect_past(verb, lex)
                                           : verb;
    words.push_back(inflected);
    words.insert(words.end(), remainder.begin() + 1, remainder.end());
  } else {
    words.push_back(aux);
    words.insert(words.end(), remainder.begin(), remainder.end());
  }

  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  out = capitalize_first(out);
  out.push_back('.');
  return out;
}

// Normalized yes/no reading of an evidence answer ("Yes", "no.", "YES").
inline std::optional<YesNo> parse_yes_no(const std::string& answer) {
  std::string t = to_lower(trim(answer));
  while (!t.empty() && (t.back() == '.' || t.back() == '!')) t.pop_back();
  if (t == "yes") return YesNo::Yes;
  if (t == "no") return YesNo::No;
  return std::nullopt;
}

// TextGenerator facade over the rules, mountable as the QA-to-claim
// backend. Parses the default "{question} \n {answer}" prompt; boolean
// pairs are converted locally, anything else is a backend error so the
// caller knows this fallback cannot cover wh-questions.
class BooleanRulesBackend : public TextGenerator {
public:
  explicit BooleanRulesBackend(VerbLexicon lex = VerbLexicon::defaults())
      : lex_(std::move(lex)) {}

  const std::string& name() const override {
    static const std::string n = "qa2claim-rules";
    return n;
  }

  bool thread_safe() const override { return true; }

  std::string generate(const std::string& prompt, int) override {
    auto [question, answer] = parse_default_prompt(prompt);
    std::optional<YesNo> yn = parse_yes_no(answer);
    if (!yn)
      throw BackendError("qa_to_claim",
                         "rules backend only converts yes/no answers, got \"" +
                             answer + "\"");
    try {
      return declarativize({question, *yn}, lex_);
    } catch (const UnparseableQuestion& e) {
      throw BackendError("qa_to_claim", e.what());
    }
  }

private:
  VerbLexicon lex_;
};

}  // namespace zerofec
