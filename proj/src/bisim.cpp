#include "shiftlab/bisim.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "shiftlab/parse.hpp"
#include "shiftlab/semantics.hpp"

namespace shiftlab {

void GameConfig::validate() const {
  if (fuel <= 0 || closure_budget <= 0 || ctx_size <= 0 || max_pairs <= 0 || max_depth <= 0 ||
      max_obligations <= 0)
    throw std::invalid_argument("GameConfig: all bounds must be positive");
}

const char* verdict_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Distinguished:
      return "distinguished";
    case Verdict::Kind::LikelyDistinguished:
      return "likely-distinguished";
    case Verdict::Kind::NoCounterexample:
      return "no-counterexample";
  }
  return "?";
}

std::vector<std::string> trace_lines(const GameTrace& trace) {
  std::vector<std::string> out;
  auto side_tag = [](int side) {
    return side == 0 ? std::string(" side=left") : side == 1 ? std::string(" side=right")
                                                             : std::string();
  };
  for (const auto& m : trace.moves) {
    switch (m.kind) {
      case GameMove::Kind::Reduce:
        out.push_back("reduce" + side_tag(m.side) + " steps=" + std::to_string(m.steps));
        break;
      case GameMove::Kind::ValueReached: {
        std::string line = "value-reached" + side_tag(m.side);
        if (m.a0) line += " left=" + print(m.a0);
        if (m.a1) line += " right=" + print(m.a1);
        out.push_back(line);
        break;
      }
      case GameMove::Kind::StuckReached: {
        std::string line = "stuck-reached" + side_tag(m.side);
        if (m.a0) line += " left=" + print(m.a0);
        if (m.a1) line += " right=" + print(m.a1);
        out.push_back(line);
        break;
      }
      case GameMove::Kind::TimeoutNoted:
        out.push_back("timeout" + side_tag(m.side) + " fuel=" + std::to_string(m.steps));
        break;
      case GameMove::Kind::TestValue:
        out.push_back("test-value arg-left=" + print(m.a0) + " arg-right=" + print(m.a1));
        break;
      case GameMove::Kind::TestStuck:
        out.push_back("test-stuck ctx-left=" + print(m.e0) + " ctx-right=" + print(m.e1));
        break;
      case GameMove::Kind::WrapReset:
        out.push_back("wrap-reset ctx-left=" + print(m.e0) + " ctx-right=" + print(m.e1));
        break;
    }
  }
  return out;
}

namespace {

bool is_program(const TermPtr& t) { return t->kind == TermKind::Reset; }

// Strips identical closed evaluation-context frames from both sides.
// Used by the up-to-context skip: the stripped frames form a pair in the
// context closure of any environment.
TermPair strip_common_frames(TermPtr t0, TermPtr t1) {
  for (;;) {
    if (t0.get() == t1.get()) break;
    if (t0->kind == TermKind::Reset && t1->kind == TermKind::Reset) {
      t0 = t0->sub0;
      t1 = t1->sub0;
      continue;
    }
    if (t0->kind == TermKind::App && t1->kind == TermKind::App) {
      if (is_value(t0->sub0) && is_value(t1->sub0) && is_closed(t0->sub0) &&
          alpha_eq(t0->sub0, t1->sub0)) {
        t0 = t0->sub1;
        t1 = t1->sub1;
        continue;
      }
      if (is_closed(t0->sub1) && alpha_eq(t0->sub1, t1->sub1)) {
        t0 = t0->sub0;
        t1 = t1->sub0;
        continue;
      }
    }
    break;
  }
  return {t0, t1};
}

struct Obligation {
  TermPtr t0, t1;
  int parent;       // index into the obligation list, -1 for the root
  GameMove origin;  // how this obligation was created
  bool has_origin;
  Outcome out0{Outcome::Kind::Timeout, nullptr, 0};
  Outcome out1{Outcome::Kind::Timeout, nullptr, 0};
  bool evaluated = false;
};

struct Engine {
  GameConfig cfg;
  Environment::Mode mode;
  Environment env;
  std::vector<Obligation> obs;
  std::deque<int> queue;
  std::unordered_set<std::string> seen;        // enqueued obligation pair keys
  std::unordered_set<std::string> discharged;  // processed or skipped, no mismatch
  std::vector<int> entry_origin;               // env entry index -> obligation id
  std::vector<int> nonprograms;                // program mode: pairs awaiting wrapping
  std::vector<CtxPair> ctx_cache;              // pure context pairs for the current env
  std::size_t ctx_cache_env = static_cast<std::size_t>(-1);
  std::unordered_set<std::string> done_tests;  // memo for entry x test keys
  bool fuel_caveat = false;
  bool truncated = false;  // obligation cap hit
  std::optional<Verdict> result;

  Engine(Environment::Mode m, const GameConfig& c) : cfg(c), mode(m), env(m) {}

  long round_base = 0;

  bool over_budget() const {
    return static_cast<long>(obs.size()) >= round_base + cfg.max_obligations;
  }

  // Alpha-identical pairs can never produce a mismatch (evaluation is
  // deterministic and every descendant obligation is identical again).
  // up-to-context: a pair that is a discharged pair under a common closed
  // evaluation context needs no play of its own either; the identical
  // frames are in the context closure of any environment.
  bool skippable(const TermPtr& t0, const TermPtr& t1) {
    if (alpha_eq(t0, t1)) return true;
    auto [s0, s1] = strip_common_frames(t0, t1);
    if (s0.get() != t0.get() || s1.get() != t1.get())
      return discharged.count(canonical_pair_key(s0, s1)) > 0;
    return false;
  }

  void enqueue(TermPtr t0, TermPtr t1, int parent, GameMove origin, bool has_origin) {
    if (result || over_budget()) {
      if (over_budget()) truncated = true;
      return;
    }
    std::string key = canonical_pair_key(t0, t1);
    if (seen.count(key)) return;
    if (skippable(t0, t1)) {
      seen.insert(key);
      discharged.insert(std::move(key));
      return;
    }
    seen.insert(std::move(key));
    obs.push_back({std::move(t0), std::move(t1), parent, std::move(origin), has_origin});
    queue.push_back(static_cast<int>(obs.size()) - 1);
  }

  GameTrace build_trace(int failing) {
    // Chain of creation moves from the root, then the outcome of every
    // evaluated obligation along the way.
    std::vector<int> chain;
    for (int i = failing; i >= 0; i = obs[i].parent) chain.push_back(i);
    std::reverse(chain.begin(), chain.end());
    GameTrace trace;
    for (int id : chain) {
      const Obligation& ob = obs[id];
      if (ob.has_origin) trace.moves.push_back(ob.origin);
      if (!ob.evaluated) continue;
      auto emit_side = [&](int side, const Outcome& o) {
        if (!cfg.big_step && o.fuel_spent > 0)
          trace.moves.push_back({GameMove::Kind::Reduce, side, o.fuel_spent, nullptr, nullptr,
                                 nullptr, nullptr});
        GameMove m;
        m.side = side;
        switch (o.kind) {
          case Outcome::Kind::Value:
            m.kind = GameMove::Kind::ValueReached;
            break;
          case Outcome::Kind::Stuck:
            m.kind = GameMove::Kind::StuckReached;
            break;
          case Outcome::Kind::Timeout:
            m.kind = GameMove::Kind::TimeoutNoted;
            m.steps = o.fuel_spent;
            break;
        }
        (side == 0 ? m.a0 : m.a1) = o.term;
        trace.moves.push_back(std::move(m));
      };
      emit_side(0, ob.out0);
      emit_side(1, ob.out1);
    }
    return trace;
  }

  void fail(int id, Verdict::Kind kind, const std::string& detail) {
    Verdict v;
    v.kind = kind;
    v.witness = build_trace(id);
    v.config = cfg;
    v.fuel_caveat = fuel_caveat;
    v.detail = detail;
    result = v;
  }

  void process(int id) {
    Obligation& ob = obs[id];
    std::string key = canonical_pair_key(ob.t0, ob.t1);
    // Pairs discharged since this one was enqueued may cover it now.
    if (skippable(ob.t0, ob.t1)) {
      discharged.insert(std::move(key));
      return;
    }
    if (mode == Environment::Mode::Program && !(is_program(ob.t0) && is_program(ob.t1))) {
      // Not evaluated: the pair is observed only through its reset-wrapped
      // forms, so it must not enter the discharged set. Wrapping is a
      // structural step, not an environment extension, so the wrapped
      // obligations join the current round immediately; rounds revisit the
      // pair later with contexts built from the grown environment.
      nonprograms.push_back(id);
      for (const CtxPair& ctx : current_ctxs()) {
        if (result || over_budget()) break;
        wrap_nonprogram(id, ctx);
      }
      return;
    }
    ob.out0 = evaluate_detect_cycles(ob.t0, cfg.fuel, cfg.max_term_nodes);
    ob.out1 = evaluate_detect_cycles(ob.t1, cfg.fuel, cfg.max_term_nodes);
    ob.evaluated = true;
    const Outcome& o0 = ob.out0;
    const Outcome& o1 = ob.out1;
    bool nf0 = o0.kind != Outcome::Kind::Timeout;
    bool nf1 = o1.kind != Outcome::Kind::Timeout;
    if (nf0 && nf1) {
      if (o0.kind != o1.kind) {
        fail(id, Verdict::Kind::Distinguished,
             "observable mismatch: " + std::string(o0.kind == Outcome::Kind::Value ? "value" : "stuck") +
                 " vs " + std::string(o1.kind == Outcome::Kind::Value ? "value" : "stuck"));
        return;
      }
      if (env.add(o0.term, o1.term)) {
        entry_origin.push_back(id);
        // The entry pair itself needs no separate play: both sides are
        // normal forms of the same kind and it extends the environment
        // with exactly itself. Recording it unlocks the up-to-context
        // skip for its context-plugged variants.
        discharged.insert(canonical_pair_key(o0.term, o1.term));
      }
      discharged.insert(key);
      return;
    }
    if (nf0 != nf1) {
      fuel_caveat = true;
      fail(id, Verdict::Kind::LikelyDistinguished,
           std::string(nf0 ? "left" : "right") + " side reached a normal form, the other ran out of fuel");
      return;
    }
    // Both sides exhausted their fuel: indistinguishable at this budget.
    fuel_caveat = true;
    discharged.insert(key);
  }

  void drain() {
    while (!queue.empty() && !result) {
      int id = queue.front();
      queue.pop_front();
      process(id);
    }
  }

  void test_value_entry(std::size_t i, const TermPair& arg) {
    const auto& [n0, n1] = env.pairs()[i];
    std::string tkey =
        canonical_pair_key(n0, n1) + "@" + canonical_pair_key(arg.first, arg.second);
    if (!done_tests.insert(tkey).second) return;
    GameMove mv{GameMove::Kind::TestValue, -1, 0, arg.first, arg.second, nullptr, nullptr};
    enqueue(subst(n0->sub0, n0->name, arg.first), subst(n1->sub0, n1->name, arg.second),
            entry_origin[i], std::move(mv), true);
  }

  void test_stuck_entry(std::size_t i, const CtxPair& ctx) {
    const auto& [n0, n1] = env.pairs()[i];
    std::string tkey = canonical_pair_key(n0, n1) + "#" + ctx_canonical_key(ctx.first) + "|" +
                       ctx_canonical_key(ctx.second);
    if (!done_tests.insert(tkey).second) return;
    Decomposition d0 = decompose(n0);
    Decomposition d1 = decompose(n1);
    std::string x = fresh_name("x", ctx_free_vars(d0.stuck_ctx));
    TermPtr k0 = lam(x, reset(plug_eval(ctx.first, plug_pure(d0.stuck_ctx, var(x)))));
    TermPtr k1 = lam(x, reset(plug_eval(ctx.second, plug_pure(d1.stuck_ctx, var(x)))));
    GameMove mv{GameMove::Kind::TestStuck, -1, 0, nullptr, nullptr, ctx.first, ctx.second};
    enqueue(reset(subst(d0.stuck_body, d0.stuck_binder, k0)),
            reset(subst(d1.stuck_body, d1.stuck_binder, k1)), entry_origin[i], std::move(mv),
            true);
  }

  const std::vector<CtxPair>& current_ctxs() {
    if (ctx_cache_env != env.size()) {
      ctx_cache = ctx_closure_pairs(env, ClosureBudget{cfg.ctx_size, cfg.max_pairs},
                                    CtxSelect::Pure);
      ctx_cache_env = env.size();
    }
    return ctx_cache;
  }

  void wrap_nonprogram(int id, const CtxPair& ctx) {
    std::string tkey = canonical_pair_key(obs[id].t0, obs[id].t1) + "!" +
                       ctx_canonical_key(ctx.first) + "|" + ctx_canonical_key(ctx.second);
    if (!done_tests.insert(tkey).second) return;
    GameMove mv{GameMove::Kind::WrapReset, -1, 0, nullptr, nullptr, ctx.first, ctx.second};
    enqueue(reset(plug_eval(ctx.first, obs[id].t0)), reset(plug_eval(ctx.second, obs[id].t1)),
            id, std::move(mv), true);
  }

  // One environment-extension round. Candidate tests are dovetailed by
  // total node count, so small entries meet small arguments before the
  // round budget runs out. Returns true if new obligations appeared.
  bool generate_tests() {
    std::size_t before = obs.size();
    ClosureBudget arg_budget{cfg.closure_budget, cfg.max_pairs};
    ClosureBudget ctx_budget{cfg.ctx_size, cfg.max_pairs};
    auto args = value_closure_pairs(env, arg_budget);
    auto ctxs = ctx_closure_pairs(env, ctx_budget, CtxSelect::Pure);
    std::size_t env_n = env.size();
    std::size_t nonprograms_n = nonprograms.size();

    std::vector<std::size_t> arg_sizes, ctx_sizes;
    for (const auto& [a0, a1] : args) arg_sizes.push_back(node_count(a0) + node_count(a1));
    for (const auto& [c0, c1] : ctxs)
      ctx_sizes.push_back(ctx_node_count(c0) + ctx_node_count(c1));

    enum CandKind { ValueTest = 0, StuckTest = 1, Wrap = 2 };
    struct Cand {
      std::size_t cost;
      int kind;
      std::size_t subject;
      std::size_t item;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < env_n; ++i) {
      const auto& [n0, n1] = env.pairs()[i];
      std::size_t base = node_count(n0) + node_count(n1);
      if (is_value(n0)) {
        for (std::size_t k = 0; k < args.size(); ++k)
          cands.push_back({base + arg_sizes[k], ValueTest, i, k});
      } else if (mode == Environment::Mode::Relaxed) {
        for (std::size_t k = 0; k < ctxs.size(); ++k)
          cands.push_back({base + ctx_sizes[k], StuckTest, i, k});
      }
    }
    if (mode == Environment::Mode::Program) {
      for (std::size_t j = 0; j < nonprograms_n; ++j) {
        const Obligation& ob = obs[nonprograms[j]];
        std::size_t base = node_count(ob.t0) + node_count(ob.t1);
        for (std::size_t k = 0; k < ctxs.size(); ++k)
          cands.push_back({base + ctx_sizes[k], Wrap, j, k});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      if (a.kind != b.kind) return a.kind < b.kind;
      if (a.subject != b.subject) return a.subject < b.subject;
      return a.item < b.item;
    });

    for (const Cand& c : cands) {
      if (result || over_budget()) break;
      switch (c.kind) {
        case ValueTest:
          test_value_entry(c.subject, args[c.item]);
          break;
        case StuckTest:
          test_stuck_entry(c.subject, ctxs[c.item]);
          break;
        case Wrap:
          wrap_nonprogram(nonprograms[c.subject], ctxs[c.item]);
          break;
      }
    }
    return obs.size() > before;
  }

  Verdict run(const TermPtr& t0, const TermPtr& t1) {
    const bool dbg = getenv("GAME_DEBUG") != nullptr;
    enqueue(t0, t1, -1, GameMove{}, false);
    drain();
    for (int round = 0; round < cfg.max_depth && !result; ++round) {
      round_base = static_cast<long>(obs.size());
      if (!generate_tests()) break;
      drain();
      if (dbg)
        fprintf(stderr, "round %d: obs=%zu env=%zu nonprograms=%zu\n", round, obs.size(),
                env.size(), nonprograms.size());
    }
    if (result) return *result;
    Verdict v;
    v.kind = Verdict::Kind::NoCounterexample;
    v.config = cfg;
    v.fuel_caveat = fuel_caveat;
    v.detail = "no counterexample within bounds (" + std::to_string(obs.size()) +
               " obligations, environment size " + std::to_string(env.size()) +
               (truncated ? ", obligation cap hit" : "") + ")";
    return v;
  }
};

Verdict run_game(Environment::Mode mode, const TermPtr& t0, const TermPtr& t1,
                 const GameConfig& cfg, const Environment* seed) {
  cfg.validate();
  if (!is_closed(t0) || !is_closed(t1))
    throw std::invalid_argument("bisimulation game: both terms must be closed");
  Engine engine(mode, cfg);
  if (seed) {
    for (const auto& [l, r] : seed->pairs())
      if (engine.env.add(l, r)) {
        engine.entry_origin.push_back(-1);
        engine.discharged.insert(canonical_pair_key(l, r));
      }
  }
  return engine.run(t0, t1);
}

}  // namespace

Verdict check_relaxed(const TermPtr& t0, const TermPtr& t1, const GameConfig& cfg) {
  return run_game(Environment::Mode::Relaxed, t0, t1, cfg, nullptr);
}

Verdict check_programs(const TermPtr& t0, const TermPtr& t1, const GameConfig& cfg) {
  return run_game(Environment::Mode::Program, t0, t1, cfg, nullptr);
}

Verdict check_relaxed_seeded(const TermPtr& t0, const TermPtr& t1, const GameConfig& cfg,
                             const Environment& seed) {
  return run_game(Environment::Mode::Relaxed, t0, t1, cfg, &seed);
}

Verdict check_programs_seeded(const TermPtr& t0, const TermPtr& t1, const GameConfig& cfg,
                              const Environment& seed) {
  return run_game(Environment::Mode::Program, t0, t1, cfg, &seed);
}

InclusionReport check_inclusion_property(const std::vector<TermPair>& pairs,
                                         const GameConfig& cfg) {
  InclusionReport report;
  for (const auto& [t0, t1] : pairs) {
    InclusionReport::Row row{t0, t1, check_relaxed(t0, t1, cfg), check_programs(t0, t1, cfg),
                             false};
    row.violation = row.relaxed.kind == Verdict::Kind::NoCounterexample &&
                    row.programs.kind != Verdict::Kind::NoCounterexample;
    if (row.violation) ++report.violations;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace shiftlab
