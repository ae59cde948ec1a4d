#include "shiftlab/closures.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "shiftlab/semantics.hpp"

namespace shiftlab {

bool Environment::add(TermPtr left, TermPtr right) {
  bool lv = is_value(left), rv = is_value(right);
  if (!is_closed(left) || !is_closed(right))
    throw std::invalid_argument("Environment: entries must be closed");
  if (lv != rv) throw std::invalid_argument("Environment: mismatched pair kinds");
  if (!lv) {
    if (mode_ == Mode::Program)
      throw std::invalid_argument("Environment: program mode relates values only");
    if (!is_stuck(left) || !is_stuck(right))
      throw std::invalid_argument("Environment: non-value entries must be stuck");
  }
  if (!keys_.insert(canonical_pair_key(left, right)).second) return false;
  pairs_.emplace_back(std::move(left), std::move(right));
  return true;
}

bool Environment::contains(const TermPtr& left, const TermPtr& right) const {
  return keys_.count(canonical_pair_key(left, right)) > 0;
}

namespace {

// Common skeleton of both sides of a generated pair. The enumeration is
// memoized on (left budget, right budget, binder depth): binder names are
// canonical per depth, so deeper contexts never change the result set.
struct PairGen {
  const Environment& env;
  int max_nodes;
  std::map<std::tuple<int, int, int>, std::vector<TermPair>> memo;

  static std::string binder_at(int depth) { return "b" + std::to_string(depth); }

  const std::vector<TermPair>& gen(int bl, int br, int depth) {
    auto key = std::make_tuple(bl, br, depth);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<TermPair> out;
    if (bl >= 1 && br >= 1) {
      // base rule: a pair from the environment
      for (const auto& [l, r] : env.pairs())
        if (static_cast<int>(node_count(l)) <= bl && static_cast<int>(node_count(r)) <= br)
          out.emplace_back(l, r);
      // same bound variable on both sides
      for (int d = 0; d < depth; ++d) {
        TermPtr v = var(binder_at(d));
        out.emplace_back(v, v);
      }
    }
    if (bl >= 2 && br >= 2) {
      std::string b = binder_at(depth);
      for (const auto& [l, r] : gen(bl - 1, br - 1, depth + 1)) {
        out.emplace_back(lam(b, l), lam(b, r));
        out.emplace_back(shift(b, l), shift(b, r));
      }
      for (const auto& [l, r] : gen(bl - 1, br - 1, depth))
        out.emplace_back(reset(l), reset(r));
    }
    if (bl >= 3 && br >= 3) {
      // application: split the remaining budget between function and argument
      const auto& fns = gen(bl - 2, br - 2, depth);
      for (const auto& [fl, fr] : fns) {
        int used_l = static_cast<int>(node_count(fl));
        int used_r = static_cast<int>(node_count(fr));
        for (const auto& [al, ar] : gen(bl - 1 - used_l, br - 1 - used_r, depth))
          out.emplace_back(app(fl, al), app(fr, ar));
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  }
};

std::vector<TermPair> dedup_sort_cap(std::vector<TermPair> pairs, int max_pairs) {
  std::vector<std::pair<std::string, TermPair>> keyed;
  keyed.reserve(pairs.size());
  std::unordered_set<std::string> seen;
  for (auto& p : pairs) {
    std::string key = canonical_pair_key(p.first, p.second);
    if (seen.insert(key).second) keyed.emplace_back(std::move(key), std::move(p));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    std::size_t sa = node_count(a.second.first) + node_count(a.second.second);
    std::size_t sb = node_count(b.second.first) + node_count(b.second.second);
    if (sa != sb) return sa < sb;
    return a.first < b.first;
  });
  std::vector<TermPair> out;
  for (auto& [k, p] : keyed) {
    if (static_cast<int>(out.size()) >= max_pairs) break;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

std::vector<TermPair> term_closure_pairs(const Environment& env, const ClosureBudget& budget) {
  if (budget.max_nodes <= 0 || budget.max_pairs <= 0)
    throw std::invalid_argument("term_closure_pairs: budget must be positive");
  PairGen g{env, budget.max_nodes, {}};
  return dedup_sort_cap(g.gen(budget.max_nodes, budget.max_nodes, 0), budget.max_pairs);
}

std::vector<TermPair> value_closure_pairs(const Environment& env, const ClosureBudget& budget) {
  if (budget.max_nodes <= 0 || budget.max_pairs <= 0)
    throw std::invalid_argument("value_closure_pairs: budget must be positive");
  PairGen g{env, budget.max_nodes, {}};
  std::vector<TermPair> vals;
  for (auto& p : g.gen(budget.max_nodes, budget.max_nodes, 0))
    if (is_value(p.first) && is_value(p.second)) vals.push_back(std::move(p));
  return dedup_sort_cap(std::move(vals), budget.max_pairs);
}

namespace {

struct CtxPairGen {
  PairGen terms;
  bool allow_reset;
  std::map<std::pair<int, int>, std::vector<CtxPair>> memo;

  const std::vector<CtxPair>& gen(int bl, int br) {
    auto key = std::make_pair(bl, br);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<CtxPair> out;
    if (bl >= 1 && br >= 1) out.emplace_back(eval_hole(), eval_hole());
    if (bl >= 2 && br >= 2 && allow_reset) {
      for (const auto& [l, r] : gen(bl - 1, br - 1))
        out.emplace_back(eval_reset(l), eval_reset(r));
    }
    if (bl >= 3 && br >= 3) {
      for (const auto& [tl, tr] : terms.gen(bl - 2, br - 2, 0)) {
        int used_l = static_cast<int>(node_count(tl));
        int used_r = static_cast<int>(node_count(tr));
        const auto& inners = gen(bl - 1 - used_l, br - 1 - used_r);
        for (const auto& [il, ir] : inners) {
          // v F with both values from the term closure
          if (is_value(tl) && is_value(tr))
            out.emplace_back(eval_app_r(tl, il), eval_app_r(tr, ir));
          // F t with both terms from the term closure
          out.emplace_back(eval_app_l(il, tl), eval_app_l(ir, tr));
        }
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  }
};

}  // namespace

std::vector<CtxPair> ctx_closure_pairs(const Environment& env, const ClosureBudget& budget,
                                       CtxSelect kind) {
  if (budget.max_nodes <= 0 || budget.max_pairs <= 0)
    throw std::invalid_argument("ctx_closure_pairs: budget must be positive");
  CtxPairGen g{PairGen{env, budget.max_nodes, {}}, kind == CtxSelect::Eval, {}};
  std::vector<std::pair<std::string, CtxPair>> keyed;
  std::unordered_set<std::string> seen;
  for (const auto& p : g.gen(budget.max_nodes, budget.max_nodes)) {
    std::string key = ctx_canonical_key(p.first) + "|" + ctx_canonical_key(p.second);
    if (seen.insert(key).second) keyed.emplace_back(std::move(key), p);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    std::size_t sa = ctx_node_count(a.second.first) + ctx_node_count(a.second.second);
    std::size_t sb = ctx_node_count(b.second.first) + ctx_node_count(b.second.second);
    if (sa != sb) return sa < sb;
    return a.first < b.first;
  });
  std::vector<CtxPair> out;
  for (auto& [k, p] : keyed) {
    if (static_cast<int>(out.size()) >= budget.max_pairs) break;
    out.push_back(std::move(p));
  }
  return out;
}

TermPtr open_extension_close(const TermPtr& t) {
  std::set<std::string> fv = free_vars(t);
  TermPtr out = t;
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) out = lam(*it, out);
  return out;
}

TermPair open_extension_close_pair(const TermPtr& t0, const TermPtr& t1) {
  std::set<std::string> fv = free_vars(t0);
  std::set<std::string> fv1 = free_vars(t1);
  fv.insert(fv1.begin(), fv1.end());
  TermPtr a = t0, b = t1;
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) {
    a = lam(*it, a);
    b = lam(*it, b);
  }
  return {a, b};
}

}  // namespace shiftlab
