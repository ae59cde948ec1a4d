#include "support/oracles.hpp"

#include <algorithm>

namespace shiftlab::oracle {

namespace {

DbPtr db_bound(int i) {
  return std::make_shared<DbTerm>(DbTerm{DbTerm::Kind::Bound, i, {}, nullptr, nullptr});
}
DbPtr db_free(std::string n) {
  return std::make_shared<DbTerm>(DbTerm{DbTerm::Kind::Free, 0, std::move(n), nullptr, nullptr});
}
DbPtr db_node(DbTerm::Kind k, DbPtr a, DbPtr b = nullptr) {
  return std::make_shared<DbTerm>(DbTerm{k, 0, {}, std::move(a), std::move(b)});
}

DbPtr to_db_rec(const TermPtr& t, std::vector<std::string>& env) {
  switch (t->kind) {
    case TermKind::Var: {
      for (int i = static_cast<int>(env.size()) - 1; i >= 0; --i)
        if (env[i] == t->name) return db_bound(static_cast<int>(env.size()) - 1 - i);
      return db_free(t->name);
    }
    case TermKind::Lam:
    case TermKind::Shift: {
      env.push_back(t->name);
      DbPtr body = to_db_rec(t->sub0, env);
      env.pop_back();
      return db_node(t->kind == TermKind::Lam ? DbTerm::Kind::Lam : DbTerm::Kind::Shift, body);
    }
    case TermKind::App:
      return db_node(DbTerm::Kind::App, to_db_rec(t->sub0, env), to_db_rec(t->sub1, env));
    case TermKind::Reset:
      return db_node(DbTerm::Kind::Reset, to_db_rec(t->sub0, env));
  }
  return nullptr;
}

}  // namespace

DbPtr to_db(const TermPtr& t) {
  std::vector<std::string> env;
  return to_db_rec(t, env);
}

bool db_eq(const DbPtr& x, const DbPtr& y) {
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case DbTerm::Kind::Bound:
      return x->index == y->index;
    case DbTerm::Kind::Free:
      return x->name == y->name;
    case DbTerm::Kind::App:
      return db_eq(x->a, y->a) && db_eq(x->b, y->b);
    default:
      return db_eq(x->a, y->a);
  }
}

DbPtr db_subst_free(const DbPtr& t, const std::string& x, const DbPtr& v) {
  switch (t->kind) {
    case DbTerm::Kind::Bound:
      return t;
    case DbTerm::Kind::Free:
      return t->name == x ? v : t;
    case DbTerm::Kind::App:
      return db_node(DbTerm::Kind::App, db_subst_free(t->a, x, v), db_subst_free(t->b, x, v));
    default:
      return db_node(t->kind, db_subst_free(t->a, x, v));
  }
}

// --- brute-force redex splits ---------------------------------------------------

namespace {

// All (E, u) with t = E[u] following the pure-context grammar.
void pure_positions(const TermPtr& t, std::vector<std::pair<PureCtxPtr, TermPtr>>& out) {
  out.emplace_back(pure_hole(), t);
  if (t->kind != TermKind::App) return;
  std::vector<std::pair<PureCtxPtr, TermPtr>> left;
  pure_positions(t->sub0, left);
  for (auto& [e, u] : left) out.emplace_back(pure_app_l(e, t->sub1), u);
  if (is_value(t->sub0)) {
    std::vector<std::pair<PureCtxPtr, TermPtr>> right;
    pure_positions(t->sub1, right);
    for (auto& [e, u] : right) out.emplace_back(pure_app_r(t->sub0, e), u);
  }
}

// All (F, u) with t = F[u] following the evaluation-context grammar.
void eval_positions(const TermPtr& t, std::vector<std::pair<EvalCtxPtr, TermPtr>>& out) {
  out.emplace_back(eval_hole(), t);
  switch (t->kind) {
    case TermKind::App: {
      std::vector<std::pair<EvalCtxPtr, TermPtr>> left;
      eval_positions(t->sub0, left);
      for (auto& [f, u] : left) out.emplace_back(eval_app_l(f, t->sub1), u);
      if (is_value(t->sub0)) {
        std::vector<std::pair<EvalCtxPtr, TermPtr>> right;
        eval_positions(t->sub1, right);
        for (auto& [f, u] : right) out.emplace_back(eval_app_r(t->sub0, f), u);
      }
      return;
    }
    case TermKind::Reset: {
      std::vector<std::pair<EvalCtxPtr, TermPtr>> inner;
      eval_positions(t->sub0, inner);
      for (auto& [f, u] : inner) out.emplace_back(eval_reset(f), u);
      return;
    }
    default:
      return;
  }
}

}  // namespace

std::vector<Split> all_splits(const TermPtr& t) {
  std::vector<Split> splits;
  std::vector<std::pair<EvalCtxPtr, TermPtr>> positions;
  eval_positions(t, positions);
  for (auto& [f, u] : positions) {
    // beta redex
    if (u->kind == TermKind::App && is_value(u->sub0) && is_value(u->sub1))
      splits.push_back({f, u});
    if (u->kind == TermKind::Reset) {
      // delimited value
      if (is_value(u->sub0)) splits.push_back({f, u});
      // capture redex: one split per pure decomposition with a shift at the focus
      std::vector<std::pair<PureCtxPtr, TermPtr>> pure;
      pure_positions(u->sub0, pure);
      for (auto& [e, s] : pure)
        if (s->kind == TermKind::Shift) splits.push_back({f, u});
    }
  }
  return splits;
}

bool stuck_shape(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Shift:
      return true;
    case TermKind::App:
      if (stuck_shape(t->sub0)) return true;
      return is_value(t->sub0) && stuck_shape(t->sub1);
    default:
      return false;
  }
}

// --- closure membership ----------------------------------------------------------

namespace {

int fresh_counter = 0;

}  // namespace

bool member_term_closure(const TermPtr& l, const TermPtr& r, const Environment& env) {
  if (env.contains(l, r)) return true;
  if (l->kind != r->kind) return false;
  switch (l->kind) {
    case TermKind::Var:
      return l->name == r->name;
    case TermKind::Lam:
    case TermKind::Shift: {
      std::string n = "m" + std::to_string(fresh_counter++);
      return member_term_closure(subst(l->sub0, l->name, var(n)),
                                 subst(r->sub0, r->name, var(n)), env);
    }
    case TermKind::App:
      return member_term_closure(l->sub0, r->sub0, env) &&
             member_term_closure(l->sub1, r->sub1, env);
    case TermKind::Reset:
      return member_term_closure(l->sub0, r->sub0, env);
  }
  return false;
}

bool member_ctx_closure(const EvalCtxPtr& l, const EvalCtxPtr& r, const Environment& env,
                        bool allow_reset) {
  if (l->kind != r->kind) return false;
  switch (l->kind) {
    case EvalCtxKind::Hole:
      return true;
    case EvalCtxKind::AppR:
      return is_value(l->side) && is_value(r->side) &&
             member_term_closure(l->side, r->side, env) &&
             member_ctx_closure(l->inner, r->inner, env, allow_reset);
    case EvalCtxKind::AppL:
      return member_term_closure(l->side, r->side, env) &&
             member_ctx_closure(l->inner, r->inner, env, allow_reset);
    case EvalCtxKind::ResetFrame:
      return allow_reset && member_ctx_closure(l->inner, r->inner, env, allow_reset);
  }
  return false;
}

// --- replay ------------------------------------------------------------------------

namespace {

bool step_is_valid(const DerivStep& step) {
  auto matches = [&](const TermPtr& from, const TermPtr& to, bool l2r) {
    for (const DerivStep& rw : kh_rewrites(from)) {
      if (rw.axiom != step.axiom || rw.left_to_right != l2r) continue;
      if (rw.path != step.path) continue;
      if (alpha_eq(rw.after, to)) return true;
    }
    return false;
  };
  if (matches(step.before, step.after, step.left_to_right)) return true;
  // Steps inverted by the bidirectional search may only be matchable from
  // the other side (e.g. a beta expansion).
  return matches(step.after, step.before, !step.left_to_right);
}

}  // namespace

bool replay_derivation(const Derivation& d, const TermPtr& t0, const TermPtr& t1) {
  TermPtr cur = t0;
  for (const DerivStep& step : d.steps) {
    if (!alpha_eq(cur, step.before)) return false;
    if (!step_is_valid(step)) return false;
    cur = step.after;
  }
  return alpha_eq(cur, t1);
}

bool replay_game_trace(const TermPtr& t0, const TermPtr& t1, const GameTrace& trace,
                       const GameConfig& cfg) {
  TermPtr a = t0, b = t1;
  Outcome oa{Outcome::Kind::Timeout, nullptr, 0}, ob{Outcome::Kind::Timeout, nullptr, 0};
  bool have_outcome = false;
  auto eval_pair = [&] {
    if (have_outcome) return;
    oa = evaluate_detect_cycles(a, cfg.fuel, cfg.max_term_nodes);
    ob = evaluate_detect_cycles(b, cfg.fuel, cfg.max_term_nodes);
    have_outcome = true;
  };
  for (const GameMove& m : trace.moves) {
    switch (m.kind) {
      case GameMove::Kind::TestValue: {
        eval_pair();
        if (oa.kind != Outcome::Kind::Value || ob.kind != Outcome::Kind::Value) return false;
        a = subst(oa.term->sub0, oa.term->name, m.a0);
        b = subst(ob.term->sub0, ob.term->name, m.a1);
        have_outcome = false;
        break;
      }
      case GameMove::Kind::TestStuck: {
        eval_pair();
        if (oa.kind != Outcome::Kind::Stuck || ob.kind != Outcome::Kind::Stuck) return false;
        Decomposition d0 = decompose(oa.term);
        Decomposition d1 = decompose(ob.term);
        std::string x = fresh_name("x", ctx_free_vars(d0.stuck_ctx));
        TermPtr k0 = lam(x, reset(plug_eval(m.e0, plug_pure(d0.stuck_ctx, var(x)))));
        TermPtr k1 = lam(x, reset(plug_eval(m.e1, plug_pure(d1.stuck_ctx, var(x)))));
        a = reset(subst(d0.stuck_body, d0.stuck_binder, k0));
        b = reset(subst(d1.stuck_body, d1.stuck_binder, k1));
        have_outcome = false;
        break;
      }
      case GameMove::Kind::WrapReset:
        a = reset(plug_eval(m.e0, a));
        b = reset(plug_eval(m.e1, b));
        have_outcome = false;
        break;
      default:
        break;  // outcome bookkeeping, validated below
    }
  }
  // The final obligation must show an observable mismatch with both sides
  // terminating.
  eval_pair();
  if (oa.kind == Outcome::Kind::Timeout || ob.kind == Outcome::Kind::Timeout) return false;
  return oa.kind != ob.kind;
}

std::pair<Outcome, Outcome> replay_falsification(const TermPtr& t0, const TermPtr& t1,
                                                 const FalsifyVerdict& v, bool top_level_reset) {
  TermPtr a = t0, b = t1;
  for (const auto& [name, value] : v.sigma) {
    a = subst(a, name, value);
    b = subst(b, name, value);
  }
  a = plug_eval(v.ctx, a);
  b = plug_eval(v.ctx, b);
  if (top_level_reset) {
    a = reset(a);
    b = reset(b);
  }
  return {evaluate_detect_cycles(a, v.budgets.fuel, v.budgets.max_term_nodes),
          evaluate_detect_cycles(b, v.budgets.fuel, v.budgets.max_term_nodes)};
}

}  // namespace shiftlab::oracle
