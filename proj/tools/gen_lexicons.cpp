// Regenerates the plain-text word lists under resources/ from the
// embedded defaults. Run after editing any list in the headers:
//   gen_lexicons <output-dir>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "zerofec/annotate.hpp"
#include "zerofec/extract.hpp"
#include "zerofec/qa2claim.hpp"

namespace {

void write_list(const std::filesystem::path& path, const std::string& header,
                const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    std::exit(1);
  }
  out << "# " << header << "\n";
  for (const std::string& line : lines) out << line << "\n";
}

std::vector<std::string> sorted(const std::set<std::string>& s) {
  return {s.begin(), s.end()};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_lexicons <output-dir>\n";
    return 1;
  }
  std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);

  using namespace zerofec;
  write_list(dir / "pos_determiners.txt",
             "Determiners recognized by the built-in tagger.",
             lexicon_data::determiners());
  write_list(dir / "pos_prepositions.txt",
             "Prepositions recognized by the built-in tagger.",
             lexicon_data::prepositions());
  write_list(dir / "pos_conjunctions.txt",
             "Coordinating conjunctions recognized by the built-in tagger.",
             lexicon_data::conjunctions());
  write_list(dir / "pos_subordinators.txt",
             "Subordinating conjunctions recognized by the built-in tagger.",
             lexicon_data::subordinators());
  write_list(dir / "pos_pronouns.txt",
             "Pronouns recognized by the built-in tagger.",
             lexicon_data::pronouns());
  write_list(dir / "pos_auxiliaries.txt",
             "Auxiliary and modal forms recognized by the built-in tagger.",
             lexicon_data::auxiliaries());
  write_list(dir / "pos_particles.txt",
             "Negative particles recognized by the built-in tagger.",
             lexicon_data::particles());
  write_list(dir / "pos_adverbs.txt",
             "Common adverbs recognized by the built-in tagger.",
             lexicon_data::adverbs());
  write_list(dir / "pos_number_words.txt",
             "Spelled-out numbers recognized by the built-in tagger.",
             lexicon_data::number_words());
  write_list(dir / "negation_terms.txt",
             "Tokens extracted as negation claim answers.",
             sorted(default_negation_lexicon()));
  write_list(dir / "irregular_verbs.txt",
             "Irregular verbs, one \"base past participle\" triple per line.",
             verb_data::irregular_verbs());
  write_list(dir / "auxiliaries.txt",
             "Auxiliary and modal forms a boolean question may start with.",
             verb_data::auxiliaries());
  write_list(dir / "base_verbs.txt",
             "Base verb forms used to split do-support and modal questions.",
             verb_data::base_verbs());

  std::cout << "wrote 13 lists to " << dir.string() << "\n";
  return 0;
}
