#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>
#include <unordered_map>

#include "shiftlab/cps.hpp"
#include "shiftlab/parse.hpp"

// The Kameyama-Hasegawa equations as schemas, first-order matching with
// pure-context metavariables, and a bounded meet-in-the-middle search for
// equational derivations.

namespace shiftlab {

PatternPtr pat_var(std::string name) {
  return std::make_shared<Pattern>(Pattern{Pattern::Kind::Var, std::move(name), {}, nullptr, nullptr});
}
PatternPtr pat_lam(std::string binder, PatternPtr body) {
  return std::make_shared<Pattern>(
      Pattern{Pattern::Kind::Lam, std::move(binder), {}, std::move(body), nullptr});
}
PatternPtr pat_app(PatternPtr fn, PatternPtr arg) {
  return std::make_shared<Pattern>(
      Pattern{Pattern::Kind::App, {}, {}, std::move(fn), std::move(arg)});
}
PatternPtr pat_shift(std::string binder, PatternPtr body) {
  return std::make_shared<Pattern>(
      Pattern{Pattern::Kind::Shift, std::move(binder), {}, std::move(body), nullptr});
}
PatternPtr pat_reset(PatternPtr body) {
  return std::make_shared<Pattern>(
      Pattern{Pattern::Kind::Reset, {}, {}, std::move(body), nullptr});
}
PatternPtr pat_meta_term(std::string id) {
  return std::make_shared<Pattern>(
      Pattern{Pattern::Kind::MetaTerm, std::move(id), {}, nullptr, nullptr});
}
PatternPtr pat_meta_value(std::string id) {
  return std::make_shared<Pattern>(
      Pattern{Pattern::Kind::MetaValue, std::move(id), {}, nullptr, nullptr});
}
PatternPtr pat_ctx_app(std::string ctx_id, PatternPtr arg) {
  return std::make_shared<Pattern>(
      Pattern{Pattern::Kind::CtxApp, std::move(ctx_id), {}, std::move(arg), nullptr});
}
PatternPtr pat_subst(std::string term_id, std::string binder, PatternPtr replacement) {
  return std::make_shared<Pattern>(
      Pattern{Pattern::Kind::SubstApp, std::move(term_id), std::move(binder),
              std::move(replacement), nullptr});
}

std::string pattern_to_string(const PatternPtr& p) {
  switch (p->kind) {
    case Pattern::Kind::Var:
      return p->name;
    case Pattern::Kind::Lam:
      return "\\" + p->name + ". " + pattern_to_string(p->p0);
    case Pattern::Kind::App:
      return "(" + pattern_to_string(p->p0) + ") (" + pattern_to_string(p->p1) + ")";
    case Pattern::Kind::Shift:
      return "S " + p->name + ". " + pattern_to_string(p->p0);
    case Pattern::Kind::Reset:
      return "<" + pattern_to_string(p->p0) + ">";
    case Pattern::Kind::MetaTerm:
      return "?" + p->name;
    case Pattern::Kind::MetaValue:
      return "!" + p->name;
    case Pattern::Kind::CtxApp:
      return p->name + "[" + pattern_to_string(p->p0) + "]";
    case Pattern::Kind::SubstApp:
      return "?" + p->name + "{" + p->binder + ":=" + pattern_to_string(p->p0) + "}";
  }
  return "?";
}

const std::vector<AxiomSchema>& kh_axioms() {
  static const std::vector<AxiomSchema> axioms = [] {
    std::vector<AxiomSchema> a;
    // (\x. t) v = t[x:=v]
    a.push_back({"beta-v",
                 pat_app(pat_lam("x", pat_meta_term("t")), pat_meta_value("v")),
                 pat_subst("t", "x", pat_meta_value("v")),
                 {}});
    // <E[S k. t]> = <t[k := \x. <E[x]>]>
    a.push_back({"reset-shift",
                 pat_reset(pat_ctx_app("E", pat_shift("k", pat_meta_term("t")))),
                 pat_reset(pat_subst("t", "k", pat_lam("x", pat_reset(pat_ctx_app("E", pat_var("x")))))),
                 {{"x", "E"}}});
    // <v> = v
    a.push_back({"reset-value", pat_reset(pat_meta_value("v")), pat_meta_value("v"), {}});
    // \x. v x = v   (x not free in v)
    a.push_back({"eta-v",
                 pat_lam("x", pat_app(pat_meta_value("v"), pat_var("x"))),
                 pat_meta_value("v"),
                 {{"x", "v"}}});
    // (\x. E[x]) t = E[t]   (x not free in E)
    a.push_back({"beta-omega",
                 pat_app(pat_lam("x", pat_ctx_app("E", pat_var("x"))), pat_meta_term("t")),
                 pat_ctx_app("E", pat_meta_term("t")),
                 {{"x", "E"}}});
    // <(\x. t0) <t1>> = (\x. <t0>) <t1>
    a.push_back({"reset-lift",
                 pat_reset(pat_app(pat_lam("x", pat_meta_term("t0")), pat_reset(pat_meta_term("t1")))),
                 pat_app(pat_lam("x", pat_reset(pat_meta_term("t0"))), pat_reset(pat_meta_term("t1"))),
                 {}});
    // S k. <t> = S k. t
    a.push_back({"shift-reset",
                 pat_shift("k", pat_reset(pat_meta_term("t"))),
                 pat_shift("k", pat_meta_term("t")),
                 {}});
    // S k. k t = t   (k not free in t)
    a.push_back({"shift-elim",
                 pat_shift("k", pat_app(pat_var("k"), pat_meta_term("t"))),
                 pat_meta_term("t"),
                 {{"k", "t"}}});
    return a;
  }();
  return axioms;
}

namespace {

bool contains_subst(const PatternPtr& p) {
  switch (p->kind) {
    case Pattern::Kind::SubstApp:
      return true;
    case Pattern::Kind::Var:
    case Pattern::Kind::MetaTerm:
    case Pattern::Kind::MetaValue:
      return false;
    default:
      return (p->p0 && contains_subst(p->p0)) || (p->p1 && contains_subst(p->p1));
  }
}

// Value position in the axioms: a lambda, or a variable (the equations
// treat variables as values).
bool value_like(const TermPtr& t) {
  return t->kind == TermKind::Lam || t->kind == TermKind::Var;
}

// All ways to write t as E[u] for a pure context E.
void pure_splits(const TermPtr& t, std::vector<std::pair<PureCtxPtr, TermPtr>>& out) {
  out.emplace_back(pure_hole(), t);
  if (t->kind != TermKind::App) return;
  std::vector<std::pair<PureCtxPtr, TermPtr>> left;
  pure_splits(t->sub0, left);
  for (auto& [e, u] : left) out.emplace_back(pure_app_l(e, t->sub1), u);
  if (value_like(t->sub0)) {
    std::vector<std::pair<PureCtxPtr, TermPtr>> right;
    pure_splits(t->sub1, right);
    for (auto& [e, u] : right) out.emplace_back(pure_app_r(t->sub0, e), u);
  }
}

void match_rec(const PatternPtr& p, const TermPtr& t, MatchBindings binds,
               std::vector<MatchBindings>& out) {
  switch (p->kind) {
    case Pattern::Kind::Var: {
      if (t->kind != TermKind::Var) return;
      auto it = binds.vars.find(p->name);
      const std::string& want = it != binds.vars.end() ? it->second : p->name;
      if (t->name == want) out.push_back(std::move(binds));
      return;
    }
    case Pattern::Kind::Lam:
    case Pattern::Kind::Shift: {
      TermKind want = p->kind == Pattern::Kind::Lam ? TermKind::Lam : TermKind::Shift;
      if (t->kind != want) return;
      binds.vars[p->name] = t->name;
      match_rec(p->p0, t->sub0, std::move(binds), out);
      return;
    }
    case Pattern::Kind::App: {
      if (t->kind != TermKind::App) return;
      std::vector<MatchBindings> fn_matches;
      match_rec(p->p0, t->sub0, std::move(binds), fn_matches);
      for (auto& m : fn_matches) match_rec(p->p1, t->sub1, std::move(m), out);
      return;
    }
    case Pattern::Kind::Reset: {
      if (t->kind != TermKind::Reset) return;
      match_rec(p->p0, t->sub0, std::move(binds), out);
      return;
    }
    case Pattern::Kind::MetaTerm: {
      auto it = binds.terms.find(p->name);
      if (it != binds.terms.end()) {
        if (alpha_eq(it->second, t)) out.push_back(std::move(binds));
        return;
      }
      binds.terms[p->name] = t;
      out.push_back(std::move(binds));
      return;
    }
    case Pattern::Kind::MetaValue: {
      if (!value_like(t)) return;
      auto it = binds.terms.find(p->name);
      if (it != binds.terms.end()) {
        if (alpha_eq(it->second, t)) out.push_back(std::move(binds));
        return;
      }
      binds.terms[p->name] = t;
      out.push_back(std::move(binds));
      return;
    }
    case Pattern::Kind::CtxApp: {
      std::vector<std::pair<PureCtxPtr, TermPtr>> splits;
      pure_splits(t, splits);
      for (auto& [e, u] : splits) {
        MatchBindings b = binds;
        assert(!b.ctxs.count(p->name));
        b.ctxs[p->name] = e;
        match_rec(p->p0, u, std::move(b), out);
      }
      return;
    }
    case Pattern::Kind::SubstApp:
      // Substitution forms cannot be matched against.
      return;
  }
}

bool conditions_hold(const std::vector<SideCondition>& conds, const MatchBindings& binds) {
  for (const auto& c : conds) {
    auto vit = binds.vars.find(c.binder);
    if (vit == binds.vars.end()) continue;  // binder will be instantiated fresh
    const std::string& name = vit->second;
    auto tit = binds.terms.find(c.metavar);
    if (tit != binds.terms.end()) {
      if (free_in(tit->second, name)) return false;
      continue;
    }
    auto cit = binds.ctxs.find(c.metavar);
    if (cit != binds.ctxs.end()) {
      if (ctx_free_vars(cit->second).count(name)) return false;
    }
  }
  return true;
}

std::set<std::string> bindings_free_vars(const MatchBindings& binds) {
  std::set<std::string> avoid;
  for (const auto& [id, t] : binds.terms) {
    auto fv = free_vars(t);
    avoid.insert(fv.begin(), fv.end());
  }
  for (const auto& [id, e] : binds.ctxs) {
    auto fv = ctx_free_vars(e);
    avoid.insert(fv.begin(), fv.end());
  }
  for (const auto& [pv, tv] : binds.vars) avoid.insert(tv);
  return avoid;
}

TermPtr instantiate_rec(const PatternPtr& p, std::map<std::string, std::string>& vars,
                        const MatchBindings& binds, const std::set<std::string>& avoid) {
  switch (p->kind) {
    case Pattern::Kind::Var: {
      auto it = vars.find(p->name);
      return var(it != vars.end() ? it->second : p->name);
    }
    case Pattern::Kind::Lam:
    case Pattern::Kind::Shift: {
      auto it = vars.find(p->name);
      std::string name;
      bool fresh = it == vars.end();
      if (fresh) {
        name = fresh_name(p->name, avoid);
        vars[p->name] = name;
      } else {
        name = it->second;
      }
      TermPtr body = instantiate_rec(p->p0, vars, binds, avoid);
      if (fresh) vars.erase(p->name);
      return p->kind == Pattern::Kind::Lam ? lam(name, body) : shift(name, body);
    }
    case Pattern::Kind::App:
      return app(instantiate_rec(p->p0, vars, binds, avoid),
                 instantiate_rec(p->p1, vars, binds, avoid));
    case Pattern::Kind::Reset:
      return reset(instantiate_rec(p->p0, vars, binds, avoid));
    case Pattern::Kind::MetaTerm:
    case Pattern::Kind::MetaValue:
      return binds.terms.at(p->name);
    case Pattern::Kind::CtxApp:
      return plug_pure(binds.ctxs.at(p->name), instantiate_rec(p->p0, vars, binds, avoid));
    case Pattern::Kind::SubstApp: {
      TermPtr replacement = instantiate_rec(p->p0, vars, binds, avoid);
      return subst(binds.terms.at(p->name), vars.at(p->binder), replacement);
    }
  }
  return nullptr;
}

TermPtr replace_at(const TermPtr& t, const std::vector<int>& path, std::size_t i,
                   const TermPtr& sub) {
  if (i == path.size()) return sub;
  switch (t->kind) {
    case TermKind::Lam:
      return lam(t->name, replace_at(t->sub0, path, i + 1, sub));
    case TermKind::Shift:
      return shift(t->name, replace_at(t->sub0, path, i + 1, sub));
    case TermKind::Reset:
      return reset(replace_at(t->sub0, path, i + 1, sub));
    case TermKind::App:
      return path[i] == 0 ? app(replace_at(t->sub0, path, i + 1, sub), t->sub1)
                          : app(t->sub0, replace_at(t->sub1, path, i + 1, sub));
    case TermKind::Var:
      break;
  }
  throw std::logic_error("replace_at: bad path");
}

void rewrites_at(const TermPtr& root, const TermPtr& sub, std::vector<int>& path,
                 std::vector<DerivStep>& out) {
  for (const auto& ax : kh_axioms()) {
    for (bool l2r : {true, false}) {
      const PatternPtr& from = l2r ? ax.lhs : ax.rhs;
      const PatternPtr& to = l2r ? ax.rhs : ax.lhs;
      if (contains_subst(from)) continue;
      auto matches = match_pattern(from, sub, ax.conditions);
      for (auto& m : matches) {
        TermPtr built = instantiate_pattern(to, m);
        out.push_back({ax.name, l2r, path, root, replace_at(root, path, 0, built)});
      }
    }
  }
  switch (sub->kind) {
    case TermKind::Var:
      return;
    case TermKind::Lam:
    case TermKind::Shift:
    case TermKind::Reset:
      path.push_back(0);
      rewrites_at(root, sub->sub0, path, out);
      path.pop_back();
      return;
    case TermKind::App:
      path.push_back(0);
      rewrites_at(root, sub->sub0, path, out);
      path.back() = 1;
      rewrites_at(root, sub->sub1, path, out);
      path.pop_back();
      return;
  }
}

}  // namespace

std::vector<MatchBindings> match_pattern(const PatternPtr& p, const TermPtr& t,
                                         const std::vector<SideCondition>& conditions) {
  std::vector<MatchBindings> raw;
  match_rec(p, t, MatchBindings{}, raw);
  std::vector<MatchBindings> out;
  for (auto& m : raw)
    if (conditions_hold(conditions, m)) out.push_back(std::move(m));
  return out;
}

TermPtr instantiate_pattern(const PatternPtr& p, const MatchBindings& binds) {
  std::map<std::string, std::string> vars = binds.vars;
  std::set<std::string> avoid = bindings_free_vars(binds);
  return instantiate_rec(p, vars, binds, avoid);
}

namespace {

void collect_binders(const PatternPtr& p, std::set<std::string>& out) {
  switch (p->kind) {
    case Pattern::Kind::Lam:
    case Pattern::Kind::Shift:
      out.insert(p->name);
      break;
    case Pattern::Kind::SubstApp:
      out.insert(p->binder);
      break;
    default:
      break;
  }
  if (p->p0) collect_binders(p->p0, out);
  if (p->p1) collect_binders(p->p1, out);
}

}  // namespace

std::pair<TermPtr, TermPtr> instantiate_schema(const AxiomSchema& schema, MatchBindings binds) {
  std::set<std::string> binders;
  collect_binders(schema.lhs, binders);
  collect_binders(schema.rhs, binders);
  std::set<std::string> avoid = bindings_free_vars(binds);
  for (const std::string& b : binders) {
    if (binds.vars.count(b)) continue;
    std::string name = fresh_name(b, avoid);
    avoid.insert(name);
    binds.vars[b] = name;
  }
  return {instantiate_pattern(schema.lhs, binds), instantiate_pattern(schema.rhs, binds)};
}

std::vector<DerivStep> kh_rewrites(const TermPtr& t) {
  std::vector<DerivStep> out;
  std::vector<int> path;
  rewrites_at(t, t, path, out);
  return out;
}

namespace {

struct SearchNode {
  TermPtr term;
  int parent;  // -1 for the start term
  DerivStep step;
  int dist;
};

struct SearchSide {
  std::vector<SearchNode> nodes;
  std::unordered_map<std::string, int> seen;
  std::size_t frontier_begin = 0;
  int depth = 0;
};

constexpr std::size_t kMaxSearchStates = 50000;

std::vector<DerivStep> chain_forward(const SearchSide& side, int at) {
  std::vector<DerivStep> steps;
  for (int i = at; side.nodes[i].dist > 0; i = side.nodes[i].parent)
    steps.push_back(side.nodes[i].step);
  std::reverse(steps.begin(), steps.end());
  return steps;
}

std::vector<DerivStep> chain_backward(const SearchSide& side, int at) {
  // Steps were applied from the end term; invert them so they read
  // meeting-point -> end term.
  std::vector<DerivStep> steps;
  for (int i = at; side.nodes[i].dist > 0; i = side.nodes[i].parent) {
    DerivStep s = side.nodes[i].step;
    std::swap(s.before, s.after);
    s.left_to_right = !s.left_to_right;
    steps.push_back(s);
  }
  return steps;
}

}  // namespace

std::optional<Derivation> kh_search(const TermPtr& t0, const TermPtr& t1, int depth) {
  if (depth < 0) throw std::invalid_argument("kh_search: negative depth");
  if (alpha_eq(t0, t1)) return Derivation{};
  if (depth == 0) return std::nullopt;

  SearchSide sides[2];
  sides[0].nodes.push_back({t0, -1, {}, 0});
  sides[0].seen[canonical_key(t0)] = 0;
  sides[1].nodes.push_back({t1, -1, {}, 0});
  sides[1].seen[canonical_key(t1)] = 0;

  while (sides[0].depth + sides[1].depth < depth) {
    int s = sides[0].nodes.size() - sides[0].frontier_begin <=
                    sides[1].nodes.size() - sides[1].frontier_begin
                ? 0
                : 1;
    SearchSide& mine = sides[s];
    SearchSide& other = sides[1 - s];
    std::size_t begin = mine.frontier_begin, end = mine.nodes.size();
    if (begin == end) break;  // frontier exhausted
    mine.frontier_begin = end;
    mine.depth += 1;
    for (std::size_t i = begin; i < end; ++i) {
      TermPtr cur = mine.nodes[i].term;
      for (DerivStep& rw : kh_rewrites(cur)) {
        std::string key = canonical_key(rw.after);
        auto hit = other.seen.find(key);
        if (hit != other.seen.end()) {
          mine.nodes.push_back({rw.after, static_cast<int>(i), rw, mine.nodes[i].dist + 1});
          int mine_at = static_cast<int>(mine.nodes.size()) - 1;
          Derivation d;
          if (s == 0) {
            d.steps = chain_forward(sides[0], mine_at);
            auto back = chain_backward(sides[1], hit->second);
            d.steps.insert(d.steps.end(), back.begin(), back.end());
          } else {
            d.steps = chain_forward(sides[0], hit->second);
            auto back = chain_backward(sides[1], mine_at);
            d.steps.insert(d.steps.end(), back.begin(), back.end());
          }
          return d;
        }
        if (mine.seen.emplace(std::move(key), static_cast<int>(mine.nodes.size())).second) {
          mine.nodes.push_back({rw.after, static_cast<int>(i), std::move(rw),
                                mine.nodes[i].dist + 1});
          if (mine.nodes.size() + other.nodes.size() > kMaxSearchStates) return std::nullopt;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace shiftlab
