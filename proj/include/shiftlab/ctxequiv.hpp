#pragma once

#include <map>
#include <string>
#include <vector>

#include "shiftlab/bisim.hpp"
#include "shiftlab/semantics.hpp"
#include "shiftlab/syntax.hpp"

// Bounded falsifiers for contextual equivalence, in the Context Lemma
// form: close the terms with a substitution drawn from a small value
// alphabet, then drive them inside enumerated evaluation contexts.

namespace shiftlab {

// The distinguishing value alphabet: identity, Church booleans and
// numerals 0-2, a diverging value, and a control-effecting value.
const std::vector<TermPtr>& falsifier_value_alphabet();

struct FalsifyBudgets {
  int max_frames = 3;      // evaluation-context frames around the hole
  long fuel = 2000;        // evaluation fuel per run
  long max_sigma = 4096;   // cap on enumerated closing substitutions
  std::size_t max_term_nodes = 256;  // evaluation aborts to Timeout beyond this

  void validate() const;
};

using Substitution = std::map<std::string, TermPtr>;  // names -> closed values

struct FalsifyVerdict {
  enum class Kind { Counterexample, LikelyCounterexample, NoneFound };
  Kind kind;
  EvalCtxPtr ctx;      // witness context (Counterexample / Likely)
  Substitution sigma;  // witness closing substitution
  Outcome out0{Outcome::Kind::Timeout, nullptr, 0};
  Outcome out1{Outcome::Kind::Timeout, nullptr, 0};
  FalsifyBudgets budgets;
  long contexts_tried = 0;
};

const char* falsify_name(FalsifyVerdict::Kind k);

// Relaxed semantics: observes evaluation to values and to stuck terms.
// Counterexample means both runs terminated with mismatched kinds; a
// normal form against fuel exhaustion is only LikelyCounterexample.
FalsifyVerdict falsify_relaxed(const TermPtr& t0, const TermPtr& t1,
                               const FalsifyBudgets& budgets);

// Original semantics: every context is wrapped in a top-level reset and
// only evaluation to values is observable, so all counterexamples are
// termination-based and at best likely.
FalsifyVerdict falsify_programs(const TermPtr& t0, const TermPtr& t1,
                                const FalsifyBudgets& budgets);

// Both falsifiers and both bisimulation games side by side.
struct ComparisonReport {
  Verdict bisim_relaxed;
  Verdict bisim_programs;
  FalsifyVerdict falsify_relaxed;
  FalsifyVerdict falsify_programs;
};

ComparisonReport compare_semantics(const TermPtr& t0, const TermPtr& t1,
                                   const FalsifyBudgets& budgets, const GameConfig& game_cfg);

}  // namespace shiftlab
