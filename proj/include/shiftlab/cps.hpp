#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shiftlab/syntax.hpp"

// CPS translation into the pure lambda calculus, beta-eta normalization,
// CPS-equivalence checking, and the eight Kameyama-Hasegawa equations as
// a bounded bidirectional rewrite system.

namespace shiftlab {

// Terms restricted to Var/Lam/App. Checked, not a separate representation.
using PureTerm = TermPtr;

bool is_pure(const TermPtr& t);

// Compositional call-by-value CPS translation with one continuation
// parameter. Free variables translate to themselves; the output contains
// no shift or reset.
PureTerm cps_translate(const TermPtr& t);

// Leftmost-outermost beta reduction (under binders) to beta-normal form
// within `fuel` steps, then eta-contraction to a fixed point. nullopt on
// fuel exhaustion.
std::optional<PureTerm> beta_eta_normalize(const PureTerm& t, long fuel);

enum class CpsVerdict { Equiv, Inequiv, Unknown };

// Equiv iff both CPS images normalize within fuel and the normal forms are
// alpha-equal; Inequiv iff both normalize and differ; Unknown otherwise.
CpsVerdict cps_equiv(const TermPtr& t0, const TermPtr& t1, long fuel);

// --- axiom schemas -----------------------------------------------------------

// Schema patterns: concrete structure plus term/value metavariables,
// pure-context metavariables applied to a subpattern, and substitution
// forms (which can be instantiated but not matched against).
struct Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

struct Pattern {
  enum class Kind { Var, Lam, App, Shift, Reset, MetaTerm, MetaValue, CtxApp, SubstApp };
  Kind kind;
  std::string name;    // Var/binder name; metavariable id; CtxApp/SubstApp: metavar id
  std::string binder;  // SubstApp: the pattern variable being substituted away
  PatternPtr p0, p1;   // children; CtxApp: argument; SubstApp: replacement
};

PatternPtr pat_var(std::string name);
PatternPtr pat_lam(std::string binder, PatternPtr body);
PatternPtr pat_app(PatternPtr fn, PatternPtr arg);
PatternPtr pat_shift(std::string binder, PatternPtr body);
PatternPtr pat_reset(PatternPtr body);
PatternPtr pat_meta_term(std::string id);
PatternPtr pat_meta_value(std::string id);
PatternPtr pat_ctx_app(std::string ctx_id, PatternPtr arg);
PatternPtr pat_subst(std::string term_id, std::string binder, PatternPtr replacement);

std::string pattern_to_string(const PatternPtr& p);

struct SideCondition {
  std::string binder;  // pattern binder that must not occur free ...
  std::string metavar; // ... in the capture of this metavariable
};

struct AxiomSchema {
  std::string name;
  PatternPtr lhs;
  PatternPtr rhs;
  std::vector<SideCondition> conditions;
};

// The eight equations, in a fixed order.
const std::vector<AxiomSchema>& kh_axioms();

// A match of a pattern against a term.
struct MatchBindings {
  std::map<std::string, TermPtr> terms;     // term/value metavariables
  std::map<std::string, PureCtxPtr> ctxs;   // context metavariables
  std::map<std::string, std::string> vars;  // pattern binder -> term binder
};

// All ways the pattern matches the whole term (side conditions included).
// Patterns containing substitution forms match nothing.
std::vector<MatchBindings> match_pattern(const PatternPtr& p, const TermPtr& t,
                                         const std::vector<SideCondition>& conditions);

// Builds a term from a pattern under the given bindings. Pattern binders
// without a mapping get fresh names.
TermPtr instantiate_pattern(const PatternPtr& p, const MatchBindings& binds);

// Instantiates both sides of a schema with shared fresh names for the
// pattern binders. The bindings must cover every metavariable.
std::pair<TermPtr, TermPtr> instantiate_schema(const AxiomSchema& schema, MatchBindings binds);

// --- bounded derivation search ----------------------------------------------

struct DerivStep {
  std::string axiom;
  bool left_to_right;
  std::vector<int> path;  // child indices from the root to the rewritten subterm
  TermPtr before;
  TermPtr after;
};

struct Derivation {
  std::vector<DerivStep> steps;
};

// All single-axiom rewrites of t, at every subterm position, in every
// matchable direction.
std::vector<DerivStep> kh_rewrites(const TermPtr& t);

// Bidirectional breadth-first search for a derivation of t0 = t1 of length
// <= depth. The returned derivation replays from t0 to t1.
std::optional<Derivation> kh_search(const TermPtr& t0, const TermPtr& t1, int depth);

}  // namespace shiftlab
