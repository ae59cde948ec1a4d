#include "shiftlab/cps.hpp"

#include <stdexcept>

namespace shiftlab {

bool is_pure(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var:
      return true;
    case TermKind::Lam:
      return is_pure(t->sub0);
    case TermKind::App:
      return is_pure(t->sub0) && is_pure(t->sub1);
    case TermKind::Shift:
    case TermKind::Reset:
      return false;
  }
  return false;
}

namespace {

std::string fresh_for(const char* base, const TermPtr& t) {
  return fresh_name(base, free_vars(t));
}

TermPtr cps_rec(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var: {
      // [x] = \k. k x
      std::string k = fresh_for("k", t);
      return lam(k, app(var(k), t));
    }
    case TermKind::Lam: {
      // [\x. t] = \k. k (\x. [t])
      std::string k = fresh_for("k", t);
      return lam(k, app(var(k), lam(t->name, cps_rec(t->sub0))));
    }
    case TermKind::App: {
      // [t0 t1] = \k. [t0] (\f. [t1] (\a. f a k))
      std::string k = fresh_for("k", t);
      TermPtr c0 = cps_rec(t->sub0);
      TermPtr c1 = cps_rec(t->sub1);
      std::string f = fresh_name("f", {});
      std::string a = fresh_name("a", {});
      return lam(k, app(c0, lam(f, app(c1, lam(a, app(app(var(f), var(a)), var(k)))))));
    }
    case TermKind::Reset: {
      // [<t>] = \k. k ([t] (\w. w))
      std::string k = fresh_for("k", t);
      std::string w = fresh_name("w", {});
      return lam(k, app(var(k), app(cps_rec(t->sub0), lam(w, var(w)))));
    }
    case TermKind::Shift: {
      // [S c. t] = \k. [t][c := \a. \k'. k' (k a)] (\w. w)
      std::string k = fresh_for("k", t);
      TermPtr body = cps_rec(t->sub0);
      std::string a = fresh_name("a", {});
      std::string kp = fresh_name("k", {k, a});
      TermPtr reified = lam(a, lam(kp, app(var(kp), app(var(k), var(a)))));
      TermPtr substituted = subst(body, t->name, reified);
      std::string w = fresh_name("w", {});
      return lam(k, app(substituted, lam(w, var(w))));
    }
  }
  return nullptr;
}

}  // namespace

PureTerm cps_translate(const TermPtr& t) { return cps_rec(t); }

// --- beta-eta normalization ---------------------------------------------------

namespace {

// One leftmost-outermost beta step; nullopt if t is beta-normal.
std::optional<TermPtr> beta_step(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var:
      return std::nullopt;
    case TermKind::Lam: {
      auto b = beta_step(t->sub0);
      if (!b) return std::nullopt;
      return lam(t->name, *b);
    }
    case TermKind::App: {
      if (t->sub0->kind == TermKind::Lam) {
        const TermPtr& fn = t->sub0;
        // Full beta: the argument need not be a value.
        return subst_any(fn->sub0, fn->name, t->sub1);
      }
      if (auto l = beta_step(t->sub0)) return app(*l, t->sub1);
      if (auto r = beta_step(t->sub1)) return app(t->sub0, *r);
      return std::nullopt;
    }
    default:
      throw std::invalid_argument("beta_step: not a pure term");
  }
}

TermPtr eta_pass(const TermPtr& t, bool& changed) {
  switch (t->kind) {
    case TermKind::Var:
      return t;
    case TermKind::Lam: {
      TermPtr b = eta_pass(t->sub0, changed);
      if (b->kind == TermKind::App && b->sub1->kind == TermKind::Var &&
          b->sub1->name == t->name && !free_in(b->sub0, t->name)) {
        changed = true;
        return b->sub0;
      }
      return b.get() == t->sub0.get() ? t : lam(t->name, b);
    }
    case TermKind::App: {
      TermPtr l = eta_pass(t->sub0, changed);
      TermPtr r = eta_pass(t->sub1, changed);
      return (l.get() == t->sub0.get() && r.get() == t->sub1.get()) ? t : app(l, r);
    }
    default:
      throw std::invalid_argument("eta_pass: not a pure term");
  }
}

}  // namespace

std::optional<PureTerm> beta_eta_normalize(const PureTerm& t, long fuel) {
  if (!is_pure(t)) throw std::invalid_argument("beta_eta_normalize: not a pure term");
  TermPtr cur = t;
  for (long used = 0;; ++used) {
    auto next = beta_step(cur);
    if (!next) break;
    if (used >= fuel) return std::nullopt;
    cur = *next;
  }
  for (;;) {
    bool changed = false;
    cur = eta_pass(cur, changed);
    if (!changed) break;
  }
  return cur;
}

CpsVerdict cps_equiv(const TermPtr& t0, const TermPtr& t1, long fuel) {
  auto n0 = beta_eta_normalize(cps_translate(t0), fuel);
  auto n1 = beta_eta_normalize(cps_translate(t1), fuel);
  if (!n0 || !n1) return CpsVerdict::Unknown;
  return alpha_eq(*n0, *n1) ? CpsVerdict::Equiv : CpsVerdict::Inequiv;
}

}  // namespace shiftlab
