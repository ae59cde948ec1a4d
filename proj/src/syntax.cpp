#include "shiftlab/syntax.hpp"

#include <cassert>
#include <stdexcept>
#include <unordered_map>

namespace shiftlab {

TermPtr var(std::string name) {
  return std::make_shared<Term>(Term{TermKind::Var, std::move(name), nullptr, nullptr});
}

TermPtr lam(std::string binder, TermPtr body) {
  assert(body);
  return std::make_shared<Term>(Term{TermKind::Lam, std::move(binder), std::move(body), nullptr});
}

TermPtr app(TermPtr fn, TermPtr arg) {
  assert(fn && arg);
  return std::make_shared<Term>(Term{TermKind::App, {}, std::move(fn), std::move(arg)});
}

TermPtr shift(std::string binder, TermPtr body) {
  assert(body);
  return std::make_shared<Term>(Term{TermKind::Shift, std::move(binder), std::move(body), nullptr});
}

TermPtr reset(TermPtr body) {
  assert(body);
  return std::make_shared<Term>(Term{TermKind::Reset, {}, std::move(body), nullptr});
}

bool is_value(const TermPtr& t) { return t->kind == TermKind::Lam; }

static void free_vars_rec(const TermPtr& t, std::vector<std::string>& bound,
                          std::set<std::string>& out) {
  switch (t->kind) {
    case TermKind::Var:
      for (auto it = bound.rbegin(); it != bound.rend(); ++it)
        if (*it == t->name) return;
      out.insert(t->name);
      return;
    case TermKind::Lam:
    case TermKind::Shift:
      bound.push_back(t->name);
      free_vars_rec(t->sub0, bound, out);
      bound.pop_back();
      return;
    case TermKind::App:
      free_vars_rec(t->sub0, bound, out);
      free_vars_rec(t->sub1, bound, out);
      return;
    case TermKind::Reset:
      free_vars_rec(t->sub0, bound, out);
      return;
  }
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  free_vars_rec(t, bound, out);
  return out;
}

static bool free_in_rec(const TermPtr& t, const std::string& x) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == x;
    case TermKind::Lam:
    case TermKind::Shift:
      return t->name != x && free_in_rec(t->sub0, x);
    case TermKind::App:
      return free_in_rec(t->sub0, x) || free_in_rec(t->sub1, x);
    case TermKind::Reset:
      return free_in_rec(t->sub0, x);
  }
  return false;
}

bool free_in(const TermPtr& t, const std::string& x) { return free_in_rec(t, x); }

bool is_closed(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  free_vars_rec(t, bound, out);
  return out.empty();
}

std::size_t node_count(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var:
      return 1;
    case TermKind::App:
      return 1 + node_count(t->sub0) + node_count(t->sub1);
    default:
      return 1 + node_count(t->sub0);
  }
}

namespace {

// Scoped name -> binder-level maps for alpha comparison.
struct AlphaEnv {
  std::unordered_map<std::string, std::vector<int>> levels;

  void push(const std::string& n, int depth) { levels[n].push_back(depth); }
  void pop(const std::string& n) { levels[n].pop_back(); }
  int lookup(const std::string& n) const {
    auto it = levels.find(n);
    if (it == levels.end() || it->second.empty()) return -1;
    return it->second.back();
  }
};

bool alpha_rec(const TermPtr& a, const TermPtr& b, AlphaEnv& ea, AlphaEnv& eb, int depth) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Var: {
      int la = ea.lookup(a->name);
      int lb = eb.lookup(b->name);
      if (la != lb) return false;
      return la >= 0 || a->name == b->name;
    }
    case TermKind::Lam:
    case TermKind::Shift: {
      ea.push(a->name, depth);
      eb.push(b->name, depth);
      bool ok = alpha_rec(a->sub0, b->sub0, ea, eb, depth + 1);
      ea.pop(a->name);
      eb.pop(b->name);
      return ok;
    }
    case TermKind::App:
      return alpha_rec(a->sub0, b->sub0, ea, eb, depth) &&
             alpha_rec(a->sub1, b->sub1, ea, eb, depth);
    case TermKind::Reset:
      return alpha_rec(a->sub0, b->sub0, ea, eb, depth);
  }
  return false;
}

void key_rec(const TermPtr& t, AlphaEnv& env, int depth, std::string& out) {
  switch (t->kind) {
    case TermKind::Var: {
      int lvl = env.lookup(t->name);
      if (lvl >= 0) {
        out += 'b';
        out += std::to_string(depth - lvl);
      } else {
        out += 'f';
        out += t->name;
      }
      out += ';';
      return;
    }
    case TermKind::Lam:
    case TermKind::Shift:
      out += t->kind == TermKind::Lam ? 'L' : 'S';
      env.push(t->name, depth);
      key_rec(t->sub0, env, depth + 1, out);
      env.pop(t->name);
      return;
    case TermKind::App:
      out += 'A';
      key_rec(t->sub0, env, depth, out);
      key_rec(t->sub1, env, depth, out);
      return;
    case TermKind::Reset:
      out += 'R';
      key_rec(t->sub0, env, depth, out);
      return;
  }
}

}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  AlphaEnv ea, eb;
  return alpha_rec(a, b, ea, eb, 0);
}

std::string canonical_key(const TermPtr& t) {
  std::string out;
  out.reserve(64);
  AlphaEnv env;
  key_rec(t, env, 0, out);
  return out;
}

std::string canonical_pair_key(const TermPtr& a, const TermPtr& b) {
  return canonical_key(a) + "|" + canonical_key(b);
}

// --- fresh names -----------------------------------------------------------

static std::atomic<std::uint64_t> g_fresh_counter{0};

std::string fresh_name(std::string_view base, const std::set<std::string>& avoid) {
  // Strip an existing _NNN suffix so renamed names do not pile up suffixes.
  std::size_t us = base.rfind('_');
  if (us != std::string_view::npos && us + 1 < base.size()) {
    bool digits = true;
    for (std::size_t i = us + 1; i < base.size(); ++i)
      if (!isdigit(static_cast<unsigned char>(base[i]))) digits = false;
    if (digits) base = base.substr(0, us);
  }
  if (base.empty()) base = "x";
  for (;;) {
    std::string cand = std::string(base) + "_" +
                       std::to_string(g_fresh_counter.fetch_add(1, std::memory_order_relaxed));
    if (!avoid.count(cand)) return cand;
  }
}

// --- substitution ----------------------------------------------------------

namespace {

// Straight renaming t[y := y'] where y' is known not to occur in t.
TermPtr rename_var(const TermPtr& t, const std::string& y, const std::string& yp) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == y ? var(yp) : t;
    case TermKind::Lam:
    case TermKind::Shift: {
      if (t->name == y) return t;
      TermPtr b = rename_var(t->sub0, y, yp);
      if (b.get() == t->sub0.get()) return t;
      return t->kind == TermKind::Lam ? lam(t->name, b) : shift(t->name, b);
    }
    case TermKind::App: {
      TermPtr l = rename_var(t->sub0, y, yp);
      TermPtr r = rename_var(t->sub1, y, yp);
      if (l.get() == t->sub0.get() && r.get() == t->sub1.get()) return t;
      return app(l, r);
    }
    case TermKind::Reset: {
      TermPtr b = rename_var(t->sub0, y, yp);
      if (b.get() == t->sub0.get()) return t;
      return reset(b);
    }
  }
  return t;
}

struct Substituter {
  const std::string& x;
  const TermPtr& v;
  const std::set<std::string>& fv_v;

  TermPtr go(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::Var:
        return t->name == x ? v : t;
      case TermKind::Lam:
      case TermKind::Shift: {
        if (t->name == x) return t;  // shadowed
        if (!free_in(t->sub0, x)) return t;
        std::string binder = t->name;
        TermPtr body = t->sub0;
        if (fv_v.count(binder)) {
          std::set<std::string> avoid = free_vars(body);
          avoid.insert(fv_v.begin(), fv_v.end());
          avoid.insert(x);
          std::string np = fresh_name(binder, avoid);
          body = rename_var(body, binder, np);
          binder = np;
        }
        TermPtr b = go(body);
        return t->kind == TermKind::Lam ? lam(binder, b) : shift(binder, b);
      }
      case TermKind::App: {
        TermPtr l = go(t->sub0);
        TermPtr r = go(t->sub1);
        if (l.get() == t->sub0.get() && r.get() == t->sub1.get()) return t;
        return app(l, r);
      }
      case TermKind::Reset: {
        TermPtr b = go(t->sub0);
        if (b.get() == t->sub0.get()) return t;
        return reset(b);
      }
    }
    return t;
  }
};

}  // namespace

TermPtr subst(const TermPtr& t, const std::string& x, const TermPtr& v) {
  if (!is_value(v) && v->kind != TermKind::Var)
    throw std::invalid_argument("subst: replacement must be a value or a variable");
  return subst_any(t, x, v);
}

TermPtr subst_any(const TermPtr& t, const std::string& x, const TermPtr& u) {
  std::set<std::string> fv_u = free_vars(u);
  Substituter s{x, u, fv_u};
  return s.go(t);
}

// --- contexts ----------------------------------------------------------------

PureCtxPtr pure_hole() {
  static PureCtxPtr h = std::make_shared<PureCtx>(PureCtx{PureCtxKind::Hole, nullptr, nullptr});
  return h;
}
PureCtxPtr pure_app_r(TermPtr fn_value, PureCtxPtr inner) {
  // A variable is admitted in function position: the equational theory
  // treats variables as values, and open contexts arise during matching.
  assert(is_value(fn_value) || fn_value->kind == TermKind::Var);
  return std::make_shared<PureCtx>(PureCtx{PureCtxKind::AppR, std::move(fn_value), std::move(inner)});
}
PureCtxPtr pure_app_l(PureCtxPtr inner, TermPtr arg) {
  return std::make_shared<PureCtx>(PureCtx{PureCtxKind::AppL, std::move(arg), std::move(inner)});
}

EvalCtxPtr eval_hole() {
  static EvalCtxPtr h = std::make_shared<EvalCtx>(EvalCtx{EvalCtxKind::Hole, nullptr, nullptr});
  return h;
}
EvalCtxPtr eval_app_r(TermPtr fn_value, EvalCtxPtr inner) {
  assert(is_value(fn_value) || fn_value->kind == TermKind::Var);
  return std::make_shared<EvalCtx>(EvalCtx{EvalCtxKind::AppR, std::move(fn_value), std::move(inner)});
}
EvalCtxPtr eval_app_l(EvalCtxPtr inner, TermPtr arg) {
  return std::make_shared<EvalCtx>(EvalCtx{EvalCtxKind::AppL, std::move(arg), std::move(inner)});
}
EvalCtxPtr eval_reset(EvalCtxPtr inner) {
  return std::make_shared<EvalCtx>(EvalCtx{EvalCtxKind::ResetFrame, nullptr, std::move(inner)});
}

GeneralCtxPtr gen_hole() {
  static GeneralCtxPtr h =
      std::make_shared<GeneralCtx>(GeneralCtx{GeneralCtxKind::Hole, {}, nullptr, nullptr});
  return h;
}
GeneralCtxPtr gen_lam(std::string binder, GeneralCtxPtr inner) {
  return std::make_shared<GeneralCtx>(
      GeneralCtx{GeneralCtxKind::LamC, std::move(binder), nullptr, std::move(inner)});
}
GeneralCtxPtr gen_app_l(GeneralCtxPtr inner, TermPtr arg) {
  return std::make_shared<GeneralCtx>(
      GeneralCtx{GeneralCtxKind::AppL, {}, std::move(arg), std::move(inner)});
}
GeneralCtxPtr gen_app_r(TermPtr fn, GeneralCtxPtr inner) {
  return std::make_shared<GeneralCtx>(
      GeneralCtx{GeneralCtxKind::AppR, {}, std::move(fn), std::move(inner)});
}
GeneralCtxPtr gen_shift(std::string binder, GeneralCtxPtr inner) {
  return std::make_shared<GeneralCtx>(
      GeneralCtx{GeneralCtxKind::ShiftC, std::move(binder), nullptr, std::move(inner)});
}
GeneralCtxPtr gen_reset(GeneralCtxPtr inner) {
  return std::make_shared<GeneralCtx>(
      GeneralCtx{GeneralCtxKind::ResetC, {}, nullptr, std::move(inner)});
}

TermPtr plug_pure(const PureCtxPtr& e, const TermPtr& t) {
  switch (e->kind) {
    case PureCtxKind::Hole:
      return t;
    case PureCtxKind::AppR:
      return app(e->side, plug_pure(e->inner, t));
    case PureCtxKind::AppL:
      return app(plug_pure(e->inner, t), e->side);
  }
  return t;
}

TermPtr plug_eval(const EvalCtxPtr& f, const TermPtr& t) {
  switch (f->kind) {
    case EvalCtxKind::Hole:
      return t;
    case EvalCtxKind::AppR:
      return app(f->side, plug_eval(f->inner, t));
    case EvalCtxKind::AppL:
      return app(plug_eval(f->inner, t), f->side);
    case EvalCtxKind::ResetFrame:
      return reset(plug_eval(f->inner, t));
  }
  return t;
}

TermPtr plug_general(const GeneralCtxPtr& c, const TermPtr& t) {
  switch (c->kind) {
    case GeneralCtxKind::Hole:
      return t;
    case GeneralCtxKind::LamC:
      return lam(c->binder, plug_general(c->inner, t));
    case GeneralCtxKind::AppL:
      return app(plug_general(c->inner, t), c->side);
    case GeneralCtxKind::AppR:
      return app(c->side, plug_general(c->inner, t));
    case GeneralCtxKind::ShiftC:
      return shift(c->binder, plug_general(c->inner, t));
    case GeneralCtxKind::ResetC:
      return reset(plug_general(c->inner, t));
  }
  return t;
}

EvalCtxPtr embed(const PureCtxPtr& e) {
  switch (e->kind) {
    case PureCtxKind::Hole:
      return eval_hole();
    case PureCtxKind::AppR:
      return eval_app_r(e->side, embed(e->inner));
    case PureCtxKind::AppL:
      return eval_app_l(embed(e->inner), e->side);
  }
  return eval_hole();
}

// A context's free variables are those of the terms sitting on its frames.
std::set<std::string> ctx_free_vars(const PureCtxPtr& e) {
  std::set<std::string> out;
  for (PureCtxPtr c = e; c && c->kind != PureCtxKind::Hole; c = c->inner) {
    std::set<std::string> fv = free_vars(c->side);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

std::set<std::string> ctx_free_vars(const EvalCtxPtr& f) {
  std::set<std::string> out;
  for (EvalCtxPtr c = f; c && c->kind != EvalCtxKind::Hole; c = c->inner) {
    if (c->side) {
      std::set<std::string> fv = free_vars(c->side);
      out.insert(fv.begin(), fv.end());
    }
  }
  return out;
}

bool ctx_closed(const PureCtxPtr& e) { return ctx_free_vars(e).empty(); }
bool ctx_closed(const EvalCtxPtr& f) { return ctx_free_vars(f).empty(); }

std::size_t ctx_node_count(const PureCtxPtr& e) {
  switch (e->kind) {
    case PureCtxKind::Hole:
      return 1;
    default:
      return 1 + node_count(e->side) + ctx_node_count(e->inner);
  }
}

std::size_t ctx_node_count(const EvalCtxPtr& f) {
  switch (f->kind) {
    case EvalCtxKind::Hole:
      return 1;
    case EvalCtxKind::ResetFrame:
      return 1 + ctx_node_count(f->inner);
    default:
      return 1 + node_count(f->side) + ctx_node_count(f->inner);
  }
}

std::string ctx_canonical_key(const EvalCtxPtr& f) {
  // '#' cannot appear in a parsed identifier, so this marker never collides.
  return canonical_key(plug_eval(f, var("#hole")));
}

}  // namespace shiftlab
