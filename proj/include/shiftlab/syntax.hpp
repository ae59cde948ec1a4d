#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

// Terms of the call-by-value lambda calculus with shift and reset,
// plus the three context grammars (pure / evaluation / general).
// Terms are immutable and shared; equality downstream is always
// alpha-equivalence.

namespace shiftlab {

enum class TermKind { Var, Lam, App, Shift, Reset };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  std::string name;  // Var: the variable; Lam/Shift: the binder
  TermPtr sub0;      // Lam/Shift/Reset body, App function
  TermPtr sub1;      // App argument
};

TermPtr var(std::string name);
TermPtr lam(std::string binder, TermPtr body);
TermPtr app(TermPtr fn, TermPtr arg);
TermPtr shift(std::string binder, TermPtr body);
TermPtr reset(TermPtr body);

// Values are lambda-abstractions, nothing else.
bool is_value(const TermPtr& t);

std::set<std::string> free_vars(const TermPtr& t);
bool free_in(const TermPtr& t, const std::string& x);
bool is_closed(const TermPtr& t);
std::size_t node_count(const TermPtr& t);

bool alpha_eq(const TermPtr& a, const TermPtr& b);

// Nameless rendering of a term; equal keys iff alpha-equal terms.
// Used for visited sets and dedup everywhere.
std::string canonical_key(const TermPtr& t);
std::string canonical_pair_key(const TermPtr& a, const TermPtr& b);

// Capture-avoiding substitution t[x := v]. v must be a value or a
// variable (possibly open); binders in t are renamed from the global
// fresh-name supply when they would capture a free variable of v.
TermPtr subst(const TermPtr& t, const std::string& x, const TermPtr& v);

// Same machinery with an arbitrary replacement term. Full beta reduction
// needs this; the operational semantics never does.
TermPtr subst_any(const TermPtr& t, const std::string& x, const TermPtr& u);

// Fresh names: base with any trailing _NNN stripped, then a suffix from
// a process-wide monotone counter. Atomic, so worker threads may share it.
std::string fresh_name(std::string_view base, const std::set<std::string>& avoid);

// --- contexts ------------------------------------------------------------

// Pure contexts E ::= [.] | v E | E t  (no reset on the spine).
struct PureCtx;
using PureCtxPtr = std::shared_ptr<const PureCtx>;

enum class PureCtxKind { Hole, AppR, AppL };

struct PureCtx {
  PureCtxKind kind;
  TermPtr side;     // AppR: the function value; AppL: the argument term
  PureCtxPtr inner;
};

PureCtxPtr pure_hole();
PureCtxPtr pure_app_r(TermPtr fn_value, PureCtxPtr inner);
PureCtxPtr pure_app_l(PureCtxPtr inner, TermPtr arg);

// Evaluation contexts F ::= [.] | v F | F t | <F>.
struct EvalCtx;
using EvalCtxPtr = std::shared_ptr<const EvalCtx>;

enum class EvalCtxKind { Hole, AppR, AppL, ResetFrame };

struct EvalCtx {
  EvalCtxKind kind;
  TermPtr side;
  EvalCtxPtr inner;
};

EvalCtxPtr eval_hole();
EvalCtxPtr eval_app_r(TermPtr fn_value, EvalCtxPtr inner);
EvalCtxPtr eval_app_l(EvalCtxPtr inner, TermPtr arg);
EvalCtxPtr eval_reset(EvalCtxPtr inner);

// General contexts C: a hole under any constructor, including binders.
struct GeneralCtx;
using GeneralCtxPtr = std::shared_ptr<const GeneralCtx>;

enum class GeneralCtxKind { Hole, LamC, AppL, AppR, ShiftC, ResetC };

struct GeneralCtx {
  GeneralCtxKind kind;
  std::string binder;  // LamC/ShiftC
  TermPtr side;        // AppL: argument term; AppR: function term
  GeneralCtxPtr inner;
};

GeneralCtxPtr gen_hole();
GeneralCtxPtr gen_lam(std::string binder, GeneralCtxPtr inner);
GeneralCtxPtr gen_app_l(GeneralCtxPtr inner, TermPtr arg);
GeneralCtxPtr gen_app_r(TermPtr fn, GeneralCtxPtr inner);
GeneralCtxPtr gen_shift(std::string binder, GeneralCtxPtr inner);
GeneralCtxPtr gen_reset(GeneralCtxPtr inner);

// Plugging is structural replacement of the hole. plug_general performs
// no renaming: capture of free variables of t is intended.
TermPtr plug_pure(const PureCtxPtr& e, const TermPtr& t);
TermPtr plug_eval(const EvalCtxPtr& f, const TermPtr& t);
TermPtr plug_general(const GeneralCtxPtr& c, const TermPtr& t);

// Every pure context is an evaluation context; embedding commutes with
// plugging.
EvalCtxPtr embed(const PureCtxPtr& e);

std::set<std::string> ctx_free_vars(const PureCtxPtr& e);
std::set<std::string> ctx_free_vars(const EvalCtxPtr& f);
bool ctx_closed(const PureCtxPtr& e);
bool ctx_closed(const EvalCtxPtr& f);
std::size_t ctx_node_count(const PureCtxPtr& e);  // hole counts as one node
std::size_t ctx_node_count(const EvalCtxPtr& f);
std::string ctx_canonical_key(const EvalCtxPtr& f);

}  // namespace shiftlab
