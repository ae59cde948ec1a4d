#pragma once

#include <unordered_set>
#include <utility>
#include <vector>

#include "shiftlab/syntax.hpp"

// Bounded enumerators for the term-generating closure and the
// context-generating closure of an environment, plus open extension.

namespace shiftlab {

using TermPair = std::pair<TermPtr, TermPtr>;
using CtxPair = std::pair<EvalCtxPtr, EvalCtxPtr>;

// A finite relation on closed normal forms. Relaxed environments pair
// values with values and stuck terms with stuck terms; program
// environments pair values only.
class Environment {
 public:
  enum class Mode { Relaxed, Program };

  explicit Environment(Mode mode = Mode::Relaxed) : mode_(mode) {}

  Mode mode() const { return mode_; }
  const std::vector<TermPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }

  // Inserts up to alpha-equivalence; returns false on duplicates.
  // Throws std::invalid_argument if the pair violates the mode invariant.
  bool add(TermPtr left, TermPtr right);

  bool contains(const TermPtr& left, const TermPtr& right) const;

 private:
  Mode mode_;
  std::vector<TermPair> pairs_;
  std::unordered_set<std::string> keys_;
};

struct ClosureBudget {
  int max_nodes = 5;    // per side of each generated term or context
  int max_pairs = 256;  // cap on the stream length
};

// Pairs of closed terms in the term-generating closure of the environment,
// each side at most max_nodes nodes, deduplicated up to alpha, ordered by
// total node count then canonical key. Exhaustive up to the budget.
std::vector<TermPair> term_closure_pairs(const Environment& env, const ClosureBudget& budget);

// The value-only subset of term_closure_pairs.
std::vector<TermPair> value_closure_pairs(const Environment& env, const ClosureBudget& budget);

enum class CtxSelect { Pure, Eval };

// Pairs of closed contexts in the context-generating closure. Pure
// selection excludes reset frames on the spine.
std::vector<CtxPair> ctx_closure_pairs(const Environment& env, const ClosureBudget& budget,
                                       CtxSelect kind);

// Lambda-abstracts the free variables of t in sorted order.
TermPtr open_extension_close(const TermPtr& t);

// Abstracts the union of both terms' free variables, in the same sorted
// order on both sides.
TermPair open_extension_close_pair(const TermPtr& t0, const TermPtr& t1);

}  // namespace shiftlab
