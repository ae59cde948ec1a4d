#include "shiftlab/semantics.hpp"

#include <stdexcept>

#include "shiftlab/parse.hpp"

namespace shiftlab {

TermPtr redex_term(const Redex& r) {
  switch (r.kind) {
    case Redex::Kind::BetaV:
      return app(lam(r.binder, r.body), r.value);
    case Redex::Kind::ShiftCapture:
      return reset(plug_pure(r.ctx, shift(r.binder, r.body)));
    case Redex::Kind::ResetValue:
      return reset(r.value);
  }
  return nullptr;
}

namespace {

Decomposition value_of(TermPtr v) {
  Decomposition d;
  d.kind = Decomposition::Kind::Value;
  d.value = std::move(v);
  return d;
}

Decomposition stuck_of(PureCtxPtr e, std::string binder, TermPtr body) {
  Decomposition d;
  d.kind = Decomposition::Kind::Stuck;
  d.stuck_ctx = std::move(e);
  d.stuck_binder = std::move(binder);
  d.stuck_body = std::move(body);
  return d;
}

Decomposition split_of(EvalCtxPtr f, Redex r) {
  Decomposition d;
  d.kind = Decomposition::Kind::Split;
  d.ctx = std::move(f);
  d.redex = std::move(r);
  return d;
}

// Grammar-directed decomposition. The evaluation context is rebuilt
// outside-in on the way back up the recursion.
Decomposition decompose_rec(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var:
      throw std::invalid_argument("decompose: open term (free variable '" + t->name + "')");
    case TermKind::Lam:
      return value_of(t);
    case TermKind::Shift:
      return stuck_of(pure_hole(), t->name, t->sub0);
    case TermKind::App: {
      Decomposition dl = decompose_rec(t->sub0);
      switch (dl.kind) {
        case Decomposition::Kind::Split:
          return split_of(eval_app_l(dl.ctx, t->sub1), dl.redex);
        case Decomposition::Kind::Stuck:
          return stuck_of(pure_app_l(dl.stuck_ctx, t->sub1), dl.stuck_binder, dl.stuck_body);
        case Decomposition::Kind::Value:
          break;
      }
      Decomposition dr = decompose_rec(t->sub1);
      switch (dr.kind) {
        case Decomposition::Kind::Split:
          return split_of(eval_app_r(t->sub0, dr.ctx), dr.redex);
        case Decomposition::Kind::Stuck:
          return stuck_of(pure_app_r(t->sub0, dr.stuck_ctx), dr.stuck_binder, dr.stuck_body);
        case Decomposition::Kind::Value: {
          // Closed values are lambdas, so this is a beta redex.
          Redex r;
          r.kind = Redex::Kind::BetaV;
          r.binder = t->sub0->name;
          r.body = t->sub0->sub0;
          r.value = t->sub1;
          return split_of(eval_hole(), r);
        }
      }
      break;
    }
    case TermKind::Reset: {
      Decomposition db = decompose_rec(t->sub0);
      switch (db.kind) {
        case Decomposition::Kind::Value: {
          Redex r;
          r.kind = Redex::Kind::ResetValue;
          r.value = db.value;
          return split_of(eval_hole(), r);
        }
        case Decomposition::Kind::Stuck: {
          Redex r;
          r.kind = Redex::Kind::ShiftCapture;
          r.ctx = db.stuck_ctx;
          r.binder = db.stuck_binder;
          r.body = db.stuck_body;
          return split_of(eval_hole(), r);
        }
        case Decomposition::Kind::Split:
          return split_of(eval_reset(db.ctx), db.redex);
      }
      break;
    }
  }
  throw std::logic_error("decompose: unreachable");
}

TermPtr step_unchecked(const TermPtr& t, bool* was_normal) {
  Decomposition d = decompose_rec(t);
  if (d.kind != Decomposition::Kind::Split) {
    if (was_normal) *was_normal = true;
    return nullptr;
  }
  if (was_normal) *was_normal = false;
  return plug_eval(d.ctx, contract(d.redex));
}

void require_closed(const TermPtr& t, const char* who) {
  if (!is_closed(t))
    throw std::invalid_argument(std::string(who) + ": open term '" + print(t) + "'");
}

}  // namespace

Decomposition decompose(const TermPtr& t) {
  require_closed(t, "decompose");
  return decompose_rec(t);
}

TermPtr contract(const Redex& r) {
  switch (r.kind) {
    case Redex::Kind::BetaV:
      return subst(r.body, r.binder, r.value);
    case Redex::Kind::ShiftCapture: {
      // The captured continuation; x must avoid the free variables of E.
      std::string x = fresh_name("x", ctx_free_vars(r.ctx));
      TermPtr cont = lam(x, reset(plug_pure(r.ctx, var(x))));
      return reset(subst(r.body, r.binder, cont));
    }
    case Redex::Kind::ResetValue:
      return r.value;
  }
  return nullptr;
}

std::optional<TermPtr> reduce_step(const TermPtr& t) {
  require_closed(t, "reduce_step");
  bool normal = false;
  TermPtr t2 = step_unchecked(t, &normal);
  if (normal) return std::nullopt;
  return t2;
}

bool is_stuck(const TermPtr& t) {
  require_closed(t, "is_stuck");
  return decompose_rec(t).kind == Decomposition::Kind::Stuck;
}

namespace {

Outcome evaluate_impl(const TermPtr& t, long fuel, bool detect_cycles, std::size_t max_nodes) {
  require_closed(t, "evaluate");
  TermPtr cur = t;
  TermPtr snapshot = t;
  long next_snapshot = 1;
  for (long steps = 0;; ++steps) {
    Decomposition d = decompose_rec(cur);
    switch (d.kind) {
      case Decomposition::Kind::Value:
        return Outcome{Outcome::Kind::Value, cur, steps};
      case Decomposition::Kind::Stuck:
        return Outcome{Outcome::Kind::Stuck, cur, steps};
      case Decomposition::Kind::Split:
        break;
    }
    if (steps >= fuel) return Outcome{Outcome::Kind::Timeout, nullptr, fuel};
    cur = plug_eval(d.ctx, contract(d.redex));
    if (detect_cycles) {
      // Brent-style cycle detection on the deterministic reduction sequence.
      if (alpha_eq(cur, snapshot)) return Outcome{Outcome::Kind::Timeout, nullptr, steps + 1};
      if (steps + 1 == next_snapshot) {
        snapshot = cur;
        next_snapshot *= 2;
      }
      if (max_nodes && node_count(cur) > max_nodes)
        return Outcome{Outcome::Kind::Timeout, nullptr, steps + 1};
    }
  }
}

}  // namespace

Outcome evaluate(const TermPtr& t, long fuel) { return evaluate_impl(t, fuel, false, 0); }

Outcome evaluate_detect_cycles(const TermPtr& t, long fuel, std::size_t max_nodes) {
  return evaluate_impl(t, fuel, true, max_nodes);
}

std::vector<TermPtr> trace(const TermPtr& t, long fuel) {
  require_closed(t, "trace");
  std::vector<TermPtr> out{t};
  TermPtr cur = t;
  for (long steps = 0; steps < fuel; ++steps) {
    bool normal = false;
    TermPtr t2 = step_unchecked(cur, &normal);
    if (normal) break;
    out.push_back(t2);
    cur = t2;
  }
  return out;
}

}  // namespace shiftlab
