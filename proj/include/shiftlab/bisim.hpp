#pragma once

#include <string>
#include <vector>

#include "shiftlab/closures.hpp"
#include "shiftlab/syntax.hpp"

// Bounded on-the-fly environmental-bisimulation games, for the relaxed
// semantics (stuck terms observable) and the original top-level-reset
// semantics (programs observable up to evaluation to values).

namespace shiftlab {

struct GameConfig {
  long fuel = 2000;        // evaluation fuel per obligation side
  int closure_budget = 5;  // nodes per side of generated test arguments
  int ctx_size = 6;        // nodes per side of generated test contexts
  int max_pairs = 256;     // cap per closure stream
  int max_depth = 3;       // environment-extension rounds
  bool big_step = false;   // collapse reduction moves in transcripts
  long max_obligations = 4000;  // new obligations admitted per round
  std::size_t max_term_nodes = 256;  // evaluation aborts to Timeout beyond this

  void validate() const;  // throws std::invalid_argument on nonpositive bounds
};

struct GameMove {
  enum class Kind {
    Reduce,        // `steps` reduction steps on `side`
    ValueReached,  // normal form(s) reached; a0/a1 filled per side
    StuckReached,
    TimeoutNoted,  // fuel exhausted on `side`
    TestValue,     // environment value pair applied to arguments (a0, a1)
    TestStuck,     // environment stuck pair tested under contexts (e0, e1)
    WrapReset,     // non-program pair wrapped as <e0[.]> / <e1[.]>
  };
  Kind kind;
  int side = -1;  // 0 left, 1 right, -1 both
  long steps = 0;
  TermPtr a0, a1;
  EvalCtxPtr e0, e1;
};

struct GameTrace {
  std::vector<GameMove> moves;
};

std::vector<std::string> trace_lines(const GameTrace& trace);

struct Verdict {
  enum class Kind { Distinguished, LikelyDistinguished, NoCounterexample };
  Kind kind;
  GameTrace witness;  // empty for NoCounterexample
  GameConfig config;
  bool fuel_caveat = false;  // some evaluation hit the fuel bound
  std::string detail;
};

const char* verdict_name(Verdict::Kind k);

// Plays the relaxed-semantics game from the empty environment.
Verdict check_relaxed(const TermPtr& t0, const TermPtr& t1, const GameConfig& cfg);

// Plays the program-semantics game: pairs that are not both of shape <t>
// are first wrapped in reset-delimited contexts built from the environment.
Verdict check_programs(const TermPtr& t0, const TermPtr& t1, const GameConfig& cfg);

// Variants starting from a non-empty environment (a seed of assumed
// normal-form pairs); a larger seed gives the observer more material.
Verdict check_relaxed_seeded(const TermPtr& t0, const TermPtr& t1, const GameConfig& cfg,
                             const Environment& seed);
Verdict check_programs_seeded(const TermPtr& t0, const TermPtr& t1, const GameConfig& cfg,
                              const Environment& seed);

// For each pair, checks that a clean relaxed verdict implies a clean
// program verdict at the same configuration.
struct InclusionReport {
  struct Row {
    TermPtr t0, t1;
    Verdict relaxed;
    Verdict programs;
    bool violation;
  };
  std::vector<Row> rows;
  int violations = 0;
};

InclusionReport check_inclusion_property(const std::vector<TermPair>& pairs,
                                         const GameConfig& cfg);

}  // namespace shiftlab
