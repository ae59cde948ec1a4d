#pragma once

#include <optional>
#include <vector>

#include "shiftlab/syntax.hpp"

// Reduction semantics. Every closed term is exactly one of: value, stuck,
// or uniquely decomposable into an evaluation context around a redex.

namespace shiftlab {

struct Redex {
  enum class Kind {
    BetaV,         // (\x. t) v
    ShiftCapture,  // < E[S k. t] >
    ResetValue,    // < v >
  };
  Kind kind;
  std::string binder;  // BetaV: x, ShiftCapture: k
  TermPtr body;        // BetaV / ShiftCapture body
  TermPtr value;       // BetaV argument / ResetValue payload
  PureCtxPtr ctx;      // ShiftCapture: the captured pure context E
};

// The redex as a plain term.
TermPtr redex_term(const Redex& r);

struct Decomposition {
  enum class Kind { Value, Stuck, Split };
  Kind kind;
  // Value
  TermPtr value;
  // Stuck: t = E[S binder. body]
  PureCtxPtr stuck_ctx;
  std::string stuck_binder;
  TermPtr stuck_body;
  // Split: t = F[redex], unique for closed non-normal terms
  EvalCtxPtr ctx;
  Redex redex;
};

// Throws std::invalid_argument on open terms.
Decomposition decompose(const TermPtr& t);

// One-step contractum of a redex (without the surrounding context).
TermPtr contract(const Redex& r);

// Deterministic single-step reduction; nullopt iff t is a normal form.
std::optional<TermPtr> reduce_step(const TermPtr& t);

// True iff t = E[S k. t'] for some pure context E.
bool is_stuck(const TermPtr& t);

struct Outcome {
  enum class Kind { Value, Stuck, Timeout };
  Kind kind;
  TermPtr term;     // the value / the stuck term; null on Timeout
  long fuel_spent;  // reduction steps taken
};

// Iterates reduce_step at most `fuel` times.
Outcome evaluate(const TermPtr& t, long fuel);

// Same result vocabulary, but returns Timeout early in two extra cases:
// when a reduction state repeats up to alpha (reduction is deterministic,
// so a repeat is a divergence certificate), and when the term outgrows
// max_nodes (0 = unbounded). fuel_spent is then the steps actually taken.
Outcome evaluate_detect_cycles(const TermPtr& t, long fuel, std::size_t max_nodes = 0);

// Maximal reduction sequence prefix of length <= fuel+1 starting at t.
std::vector<TermPtr> trace(const TermPtr& t, long fuel);

}  // namespace shiftlab
