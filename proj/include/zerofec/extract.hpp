#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "zerofec/annotate.hpp"
#include "zerofec/errors.hpp"
#include "zerofec/text.hpp"
#include "zerofec/types.hpp"

namespace zerofec {

inline const std::set<std::string>& default_negation_lexicon() {
  static const std::set<std::string> lex{
      "not",     "n't",   "never",   "no",      "none",   "neither",
      "nor",     "without", "won't", "can't",   "don't",  "doesn't",
      "isn't",   "aren't", "wasn't", "weren't"};
  return lex;
}

// Checks the structural contract an annotation must satisfy before spans
// can be sliced out of the claim: tokens in order, inside the text,
// matching their slices; spans aligned to token boundaries. External
// annotators that violate it broke the adapter protocol.
inline void validate_annotation(const std::string& claim,
                                const Annotation& ann) {
  std::unordered_set<std::size_t> begins, ends;
  std::size_t prev_end = 0;
  for (const AnnotToken& t : ann.tokens) {
    if (t.begin < prev_end || t.end <= t.begin || t.end > claim.size())
      throw ProtocolError("annotation tokens out of order or out of range");
    if (claim.compare(t.begin, t.end - t.begin, t.text) != 0)
      throw ProtocolError("annotation token text does not match its offsets");
    begins.insert(t.begin);
    ends.insert(t.end);
    prev_end = t.end;
  }
  for (const AnnotSpan& s : ann.spans) {
    if (s.end <= s.begin || !begins.count(s.begin) || !ends.count(s.end))
      throw ProtocolError("annotation span not aligned to token boundaries");
  }
}

namespace detail {

// Negation outranks every span kind so a negation token survives text
// dedupe against a same-offset span: a bare "None" is both a noun chunk
// and a negation, "won't" alone can be a whole verb phrase.
inline int answer_kind_rank(AnswerKind k) {
  switch (k) {
    case AnswerKind::Negation: return 0;
    case AnswerKind::NounChunk: return 1;
    case AnswerKind::NamedEntity: return 2;
    case AnswerKind::NP: return 3;
    case AnswerKind::VP: return 4;
    case AnswerKind::Noun: return 5;
    case AnswerKind::Verb: return 6;
    case AnswerKind::Adj: return 7;
    case AnswerKind::Adv: return 8;
  }
  return 9;
}

inline AnswerKind kind_for_span(SpanLabel l) {
  switch (l) {
    case SpanLabel::NounChunk: return AnswerKind::NounChunk;
    case SpanLabel::NamedEntity: return AnswerKind::NamedEntity;
    case SpanLabel::NP: return AnswerKind::NP;
    case SpanLabel::VP: return AnswerKind::VP;
  }
  return AnswerKind::NounChunk;
}

}  // namespace detail

// The claim units a correction may rewrite: every labeled span, every
// content token (nouns fold PROPN in, verbs, adjectives, adverbs), and
// every token found in the negation lexicon. Ordered by (char_start,
// longest first, kind priority), deduplicated on lowercased
// whitespace-collapsed text keeping the first occurrence. Every answer's
// text is the exact claim slice at its offsets.
inline std::vector<ClaimAnswer> extract_claim_answers(
    const std::string& claim, const Annotation& ann,
    const std::set<std::string>& negation_lexicon =
        default_negation_lexicon()) {
  validate_annotation(claim, ann);
  std::vector<ClaimAnswer> units;
  auto add = [&](std::size_t begin, std::size_t end, AnswerKind kind) {
    units.push_back(
        {claim.substr(begin, end - begin), begin, end, kind});
  };
  for (const AnnotSpan& s : ann.spans)
    add(s.begin, s.end, detail::kind_for_span(s.label));
  for (const AnnotToken& t : ann.tokens) {
    switch (t.pos) {
      case Upos::Noun:
      case Upos::Propn:
        add(t.begin, t.end, AnswerKind::Noun);
        break;
      case Upos::Verb:
        add(t.begin, t.end, AnswerKind::Verb);
        break;
      case Upos::Adj:
        add(t.begin, t.end, AnswerKind::Adj);
        break;
      case Upos::Adv:
        add(t.begin, t.end, AnswerKind::Adv);
        break;
      default:
        break;
    }
    if (t.pos != Upos::Punct && negation_lexicon.count(to_lower(t.text)))
      add(t.begin, t.end, AnswerKind::Negation);
  }
  std::stable_sort(units.begin(), units.end(),
                   [](const ClaimAnswer& a, const ClaimAnswer& b) {
                     if (a.char_start != b.char_start)
                       return a.char_start < b.char_start;
                     std::size_t la = a.char_end - a.char_start;
                     std::size_t lb = b.char_end - b.char_start;
                     if (la != lb) return la > lb;
                     return detail::answer_kind_rank(a.kind) <
                            detail::answer_kind_rank(b.kind);
                   });
  std::vector<ClaimAnswer> out;
  std::unordered_set<std::string> seen;
  for (ClaimAnswer& u : units)
    if (seen.insert(normalize_for_dedupe(u.text)).second)
      out.push_back(std::move(u));
  return out;
}

}  // namespace zerofec
