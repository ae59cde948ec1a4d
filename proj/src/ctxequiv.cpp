#include "shiftlab/ctxequiv.hpp"

#include <stdexcept>

#include "shiftlab/closures.hpp"
#include "shiftlab/parse.hpp"

namespace shiftlab {

const std::vector<TermPtr>& falsifier_value_alphabet() {
  static const std::vector<TermPtr> alphabet = {
      parse("\\x. x"),                      // identity
      parse("\\x. \\y. x"),                 // true
      parse("\\x. \\y. y"),                 // false
      parse("\\s. \\z. z"),                 // 0
      parse("\\s. \\z. s z"),               // 1
      parse("\\s. \\z. s (s z)"),           // 2
      parse("\\x. (\\d. d d) (\\d. d d)"),  // diverges when applied
      parse("\\x. S k. k x"),               // captures its continuation
  };
  return alphabet;
}

void FalsifyBudgets::validate() const {
  if (max_frames < 0 || fuel <= 0 || max_sigma <= 0)
    throw std::invalid_argument("FalsifyBudgets: bounds must be positive");
}

const char* falsify_name(FalsifyVerdict::Kind k) {
  switch (k) {
    case FalsifyVerdict::Kind::Counterexample:
      return "counterexample";
    case FalsifyVerdict::Kind::LikelyCounterexample:
      return "likely-counterexample";
    case FalsifyVerdict::Kind::NoneFound:
      return "none-found";
  }
  return "?";
}

namespace {

// One evaluation-context frame around the current hole.
struct Frame {
  enum class Kind { ApplyTo, Under, Delimit };
  Kind kind;
  int value_index;  // into the alphabet
};

std::vector<Frame> frame_alphabet() {
  std::vector<Frame> frames;
  int n = static_cast<int>(falsifier_value_alphabet().size());
  for (int i = 0; i < n; ++i) frames.push_back({Frame::Kind::ApplyTo, i});
  // In function position only the behaviors matter, not the result shapes:
  // pass the hole's value through, discard it into divergence, or capture
  // the continuation. Numerals or booleans applied to the hole add nothing
  // but iteration blowup.
  frames.push_back({Frame::Kind::Under, 0});  // identity
  frames.push_back({Frame::Kind::Under, 6});  // diverging
  frames.push_back({Frame::Kind::Under, 7});  // control
  frames.push_back({Frame::Kind::Delimit, 0});
  return frames;
}

EvalCtxPtr build_ctx(const std::vector<int>& frame_indices) {
  const auto& alphabet = falsifier_value_alphabet();
  static const std::vector<Frame> frames = frame_alphabet();
  EvalCtxPtr ctx = eval_hole();
  // indices run innermost first
  for (int idx : frame_indices) {
    const Frame& f = frames[idx];
    switch (f.kind) {
      case Frame::Kind::ApplyTo:
        ctx = eval_app_l(ctx, alphabet[f.value_index]);
        break;
      case Frame::Kind::Under:
        ctx = eval_app_r(alphabet[f.value_index], ctx);
        break;
      case Frame::Kind::Delimit:
        ctx = eval_reset(ctx);
        break;
    }
  }
  return ctx;
}

// All contexts with at most max_frames frames, in enumeration order:
// fewer frames first, then lexicographic on frame indices.
std::vector<EvalCtxPtr> enumerate_contexts(int max_frames) {
  std::vector<EvalCtxPtr> out;
  int n = static_cast<int>(frame_alphabet().size());
  std::vector<int> indices;
  for (int len = 0; len <= max_frames; ++len) {
    indices.assign(len, 0);
    for (;;) {
      out.push_back(build_ctx(indices));
      int pos = len - 1;
      while (pos >= 0 && indices[pos] == n - 1) {
        indices[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++indices[pos];
    }
  }
  return out;
}

std::vector<Substitution> enumerate_substitutions(const std::set<std::string>& domain,
                                                  long max_sigma) {
  const auto& alphabet = falsifier_value_alphabet();
  std::vector<std::string> names(domain.begin(), domain.end());
  std::vector<Substitution> out;
  std::vector<std::size_t> pick(names.size(), 0);
  for (;;) {
    Substitution sigma;
    for (std::size_t i = 0; i < names.size(); ++i) sigma[names[i]] = alphabet[pick[i]];
    out.push_back(std::move(sigma));
    if (static_cast<long>(out.size()) >= max_sigma) break;
    int pos = static_cast<int>(names.size()) - 1;
    while (pos >= 0 && pick[pos] == alphabet.size() - 1) {
      pick[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++pick[pos];
  }
  return out;
}

TermPtr apply_sigma(const TermPtr& t, const Substitution& sigma) {
  TermPtr out = t;
  for (const auto& [name, value] : sigma) out = subst(out, name, value);
  return out;
}

FalsifyVerdict falsify(const TermPtr& t0, const TermPtr& t1, const FalsifyBudgets& budgets,
                       bool top_level_reset) {
  budgets.validate();
  FalsifyVerdict none;
  none.kind = FalsifyVerdict::Kind::NoneFound;
  none.budgets = budgets;

  std::set<std::string> fv = free_vars(t0);
  {
    std::set<std::string> fv1 = free_vars(t1);
    fv.insert(fv1.begin(), fv1.end());
  }
  std::vector<Substitution> sigmas = enumerate_substitutions(fv, budgets.max_sigma);
  std::vector<EvalCtxPtr> contexts = enumerate_contexts(budgets.max_frames);

  FalsifyVerdict likely;
  bool have_likely = false;
  long tried = 0;
  for (const EvalCtxPtr& ctx : contexts) {
    for (const Substitution& sigma : sigmas) {
      ++tried;
      TermPtr lhs = plug_eval(ctx, apply_sigma(t0, sigma));
      TermPtr rhs = plug_eval(ctx, apply_sigma(t1, sigma));
      if (top_level_reset) {
        lhs = reset(lhs);
        rhs = reset(rhs);
      }
      Outcome o0 = evaluate_detect_cycles(lhs, budgets.fuel, budgets.max_term_nodes);
      Outcome o1 = evaluate_detect_cycles(rhs, budgets.fuel, budgets.max_term_nodes);
      bool nf0 = o0.kind != Outcome::Kind::Timeout;
      bool nf1 = o1.kind != Outcome::Kind::Timeout;
      if (nf0 && nf1 && o0.kind != o1.kind) {
        FalsifyVerdict v;
        v.kind = FalsifyVerdict::Kind::Counterexample;
        v.ctx = ctx;
        v.sigma = sigma;
        v.out0 = o0;
        v.out1 = o1;
        v.budgets = budgets;
        v.contexts_tried = tried;
        return v;
      }
      if (nf0 != nf1 && !have_likely) {
        have_likely = true;
        likely.kind = FalsifyVerdict::Kind::LikelyCounterexample;
        likely.ctx = ctx;
        likely.sigma = sigma;
        likely.out0 = o0;
        likely.out1 = o1;
        likely.budgets = budgets;
        likely.contexts_tried = tried;
      }
    }
  }
  if (have_likely) return likely;
  none.contexts_tried = tried;
  return none;
}

}  // namespace

FalsifyVerdict falsify_relaxed(const TermPtr& t0, const TermPtr& t1,
                               const FalsifyBudgets& budgets) {
  return falsify(t0, t1, budgets, false);
}

FalsifyVerdict falsify_programs(const TermPtr& t0, const TermPtr& t1,
                                const FalsifyBudgets& budgets) {
  if (is_closed(t0) && is_closed(t1)) return falsify(t0, t1, budgets, true);
  // Open pairs are closed by the open extension: abstract the union of
  // the free variables on both sides, then test the closed values.
  auto [c0, c1] = open_extension_close_pair(t0, t1);
  return falsify(c0, c1, budgets, true);
}

ComparisonReport compare_semantics(const TermPtr& t0, const TermPtr& t1,
                                   const FalsifyBudgets& budgets, const GameConfig& game_cfg) {
  TermPtr g0 = t0, g1 = t1;
  if (!is_closed(t0) || !is_closed(t1)) {
    auto closed = open_extension_close_pair(t0, t1);
    g0 = closed.first;
    g1 = closed.second;
  }
  ComparisonReport report{
      check_relaxed(g0, g1, game_cfg),
      check_programs(g0, g1, game_cfg),
      falsify_relaxed(t0, t1, budgets),
      falsify_programs(t0, t1, budgets),
  };
  return report;
}

}  // namespace shiftlab
