#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "shiftlab/bisim.hpp"
#include "shiftlab/ctxequiv.hpp"
#include "shiftlab/syntax.hpp"

// The checked-in example corpus: named term pairs with expected verdicts
// per semantics, one stanza per entry.

namespace shiftlab {

// Closed terms usable by name inside corpus entries and CLI input
// (OMEGA, ID, TRUE, FALSE, THETA, THETA_SHIFT).
const std::map<std::string, TermPtr>& alias_table();

// Parses and then replaces free occurrences of alias names.
TermPtr parse_with_aliases(const std::string& text);

struct CorpusEntry {
  std::string name;
  std::string left_src;
  std::string right_src;
  std::string expect_relaxed_bisim;
  std::string expect_relaxed_falsify;
  std::string expect_original_bisim;
  std::string expect_original_falsify;
  std::string ref;
};

// Stanza format, one entry per blank-line-separated block:
//   name: <identifier>
//   left: <term>
//   right: <term>
//   expect-relaxed: bisim=<verdict> falsify=<verdict>
//   expect-original: bisim=<verdict> falsify=<verdict>
//   ref: <free-form note>
// Lines starting with '#' are comments.
std::vector<CorpusEntry> parse_corpus(std::istream& in);
std::vector<CorpusEntry> parse_corpus_file(const std::string& path);

struct EntryResult {
  CorpusEntry entry;
  std::string actual_relaxed_bisim;
  std::string actual_relaxed_falsify;
  std::string actual_original_bisim;
  std::string actual_original_falsify;
  bool pass;
  long millis;
};

struct RunReport {
  std::vector<EntryResult> entries;
  bool all_pass;
  long total_millis;
};

RunReport run_corpus(const std::vector<CorpusEntry>& entries, const GameConfig& game_cfg,
                     const FalsifyBudgets& budgets);

}  // namespace shiftlab
