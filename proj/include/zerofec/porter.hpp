#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "zerofec/text.hpp"

namespace zerofec {
namespace detail {

// Classic Porter stemmer (1980 rule set). Operates on lowercase ASCII
// words; callers lowercase first. Words of length <= 2 pass through.
class PorterStemmer {
public:
  static std::string stem(std::string_view word) {
    PorterStemmer p;
    p.w_.assign(word.begin(), word.end());
    if (p.w_.size() <= 2) return p.w_;
    p.step1a();
    p.step1b();
    p.step1c();
    p.step2();
    p.step3();
    p.step4();
    p.step5();
    return p.w_;
  }

private:
  std::string w_;

  bool is_consonant(std::size_t i) const {
    char c = w_[i];
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
    if (c == 'y') return i == 0 ? true : !is_consonant(i - 1);
    return true;
  }

  // m in the [C](VC)^m[V] decomposition of w_[0, end).
  int measure(std::size_t end) const {
    int m = 0;
    std::size_t i = 0;
    while (i < end && is_consonant(i)) ++i;
    while (i < end) {
      while (i < end && !is_consonant(i)) ++i;
      if (i >= end) break;
      ++m;
      while (i < end && is_consonant(i)) ++i;
    }
    return m;
  }

  bool has_vowel(std::size_t end) const {
    for (std::size_t i = 0; i < end; ++i)
      if (!is_consonant(i)) return true;
    return false;
  }

  bool double_consonant(std::size_t end) const {
    return end >= 2 && w_[end - 1] == w_[end - 2] && is_consonant(end - 1);
  }

  // *o: stem ends consonant-vowel-consonant, final consonant not w/x/y.
  bool cvc(std::size_t end) const {
    if (end < 3) return false;
    if (!is_consonant(end - 3) || is_consonant(end - 2) ||
        !is_consonant(end - 1))
      return false;
    char c = w_[end - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view suffix) const {
    return w_.size() >= suffix.size() &&
           std::string_view(w_).substr(w_.size() - suffix.size()) == suffix;
  }

  std::size_t stem_len(std::string_view suffix) const {
    return w_.size() - suffix.size();
  }

  void replace_suffix(std::string_view suffix, std::string_view repl) {
    w_.erase(w_.size() - suffix.size());
    w_.append(repl);
  }

  struct Rule {
    std::string_view suffix;
    std::string_view repl;
  };

  // Longest-match semantics: the first listed suffix that matches decides
  // the step; the rule fires only if the stem's measure clears min_m.
  template <std::size_t N>
  void apply_table(const std::array<Rule, N>& rules, int min_m) {
    for (const Rule& r : rules) {
      if (!ends(r.suffix)) continue;
      if (measure(stem_len(r.suffix)) > min_m) replace_suffix(r.suffix, r.repl);
      return;
    }
  }

  void step1a() {
    if (ends("sses")) replace_suffix("sses", "ss");
    else if (ends("ies")) replace_suffix("ies", "i");
    else if (ends("ss")) { /* unchanged */ }
    else if (ends("s")) replace_suffix("s", "");
  }

  void step1b() {
    if (ends("eed")) {
      if (measure(stem_len("eed")) > 0) replace_suffix("eed", "ee");
      return;
    }
    bool removed = false;
    if (ends("ed") && has_vowel(stem_len("ed"))) {
      replace_suffix("ed", "");
      removed = true;
    } else if (ends("ing") && has_vowel(stem_len("ing"))) {
      replace_suffix("ing", "");
      removed = true;
    }
    if (!removed) return;
    if (ends("at") || ends("bl") || ends("iz")) {
      w_.push_back('e');
    } else if (double_consonant(w_.size())) {
      char c = w_.back();
      if (c != 'l' && c != 's' && c != 'z') w_.pop_back();
    } else if (measure(w_.size()) == 1 && cvc(w_.size())) {
      w_.push_back('e');
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(stem_len("y"))) w_.back() = 'i';
  }

  void step2() {
    static constexpr std::array<Rule, 20> rules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
        {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
        {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
        {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
        {"iviti", "ive"},   {"biliti", "ble"},
    }};
    apply_table(rules, 0);
  }

  void step3() {
    static constexpr std::array<Rule, 7> rules{{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    apply_table(rules, 0);
  }

  void step4() {
    static constexpr std::array<Rule, 18> rules{{
        {"al", ""},    {"ance", ""}, {"ence", ""}, {"er", ""},
        {"ic", ""},    {"able", ""}, {"ible", ""}, {"ant", ""},
        {"ement", ""}, {"ment", ""}, {"ent", ""},  {"ou", ""},
        {"ism", ""},   {"ate", ""},  {"iti", ""},  {"ous", ""},
        {"ive", ""},   {"ize", ""},
    }};
    // "ion" needs the stem to end in s or t; handled apart from the table.
    if (ends("ion")) {
      std::size_t n = stem_len("ion");
      if (n > 0 && (w_[n - 1] == 's' || w_[n - 1] == 't') && measure(n) > 1)
        replace_suffix("ion", "");
      return;
    }
    for (const Rule& r : rules) {
      if (!ends(r.suffix)) continue;
      // "ement" must win over "ment"/"ent"; the list is ordered so the
      // longest of any nested family is matched first.
      if (measure(stem_len(r.suffix)) > 1) replace_suffix(r.suffix, r.repl);
      return;
    }
  }

  void step5() {
    if (ends("e")) {
      std::size_t n = stem_len("e");
      int m = measure(n);
      if (m > 1 || (m == 1 && !cvc(n))) replace_suffix("e", "");
    }
    if (w_.size() >= 2 && w_.back() == 'l' && double_consonant(w_.size()) &&
        measure(w_.size()) > 1)
      w_.pop_back();
  }
};

}  // namespace detail

inline std::string porter_stem(std::string_view word) {
  return detail::PorterStemmer::stem(word);
}

}  // namespace zerofec
