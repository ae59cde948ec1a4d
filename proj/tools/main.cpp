#include <chrono>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "shiftlab/bisim.hpp"
#include "shiftlab/corpus.hpp"
#include "shiftlab/cps.hpp"
#include "shiftlab/ctxequiv.hpp"
#include "shiftlab/parse.hpp"
#include "shiftlab/semantics.hpp"

// Command-line front end. Exit codes: 0 success, 1 corpus expectation
// mismatch, 2 term parse error, 3 open term where a closed one is
// required, 4 budget misconfiguration.

namespace {

using namespace shiftlab;
using ordered_json = nlohmann::ordered_json;

struct Options {
  long fuel = 2000;
  int closure_budget = 5;
  int depth = 3;
  int ctx_size = 6;
  int frames = 3;
  std::string semantics = "relaxed";
  std::string format = "text";
  bool big_step = false;
  std::string corpus_file = "corpus/corpus.txt";
};

void add_common_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--fuel", opt.fuel, "evaluation fuel (reduction steps)");
  cmd->add_option("--closure-budget", opt.closure_budget,
                  "node budget per side for generated test arguments");
  cmd->add_option("--depth", opt.depth, "game depth / derivation search depth");
  cmd->add_option("--ctx-size", opt.ctx_size, "node budget per side for generated contexts");
  cmd->add_option("--frames", opt.frames, "max context frames for the falsifier");
  cmd->add_option("--format", opt.format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_flag("--big-step", opt.big_step, "big-step game transcripts");
  cmd->add_option("--semantics", opt.semantics, "relaxed or original")
      ->check(CLI::IsMember({"relaxed", "original"}));
}

GameConfig game_config(const Options& opt) {
  GameConfig cfg;
  cfg.fuel = opt.fuel;
  cfg.closure_budget = opt.closure_budget;
  cfg.ctx_size = opt.ctx_size;
  cfg.max_depth = opt.depth;
  cfg.big_step = opt.big_step;
  return cfg;
}

FalsifyBudgets falsify_budgets(const Options& opt) {
  FalsifyBudgets budgets;
  budgets.max_frames = opt.frames;
  budgets.fuel = opt.fuel;
  return budgets;
}

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void validate_budgets(const Options& opt, bool needs_game, bool needs_falsify) {
  try {
    if (needs_game) game_config(opt).validate();
    if (needs_falsify) falsify_budgets(opt).validate();
    if (opt.fuel <= 0 || opt.depth < 0) throw std::invalid_argument("bounds must be positive");
  } catch (const std::invalid_argument& e) {
    throw BudgetError(e.what());
  }
}

struct OpenTermError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TermPtr parse_closed(const std::string& src) {
  TermPtr t = parse_with_aliases(src);
  if (!is_closed(t)) throw OpenTermError("open term: " + print(t));
  return t;
}

std::string outcome_line(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Value:
      return "value: " + print(o.term);
    case Outcome::Kind::Stuck:
      return "stuck: " + print(o.term);
    case Outcome::Kind::Timeout:
      return "timeout";
  }
  return "?";
}

std::string path_string(const std::vector<int>& path) {
  if (path.empty()) return "root";
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(path[i]);
  }
  return s;
}

std::vector<std::string> derivation_lines(const Derivation& d) {
  std::vector<std::string> lines;
  for (const auto& step : d.steps)
    lines.push_back(step.axiom + (step.left_to_right ? " -> " : " <- ") + "at " +
                    path_string(step.path) + ": " + print(step.after));
  return lines;
}

std::vector<std::string> falsify_lines(const FalsifyVerdict& v) {
  std::vector<std::string> lines;
  if (v.kind == FalsifyVerdict::Kind::NoneFound) return lines;
  lines.push_back("context: " + print(v.ctx));
  for (const auto& [name, value] : v.sigma)
    lines.push_back("sigma: " + name + " := " + print(value));
  lines.push_back("left: " + outcome_line(v.out0));
  lines.push_back("right: " + outcome_line(v.out1));
  return lines;
}

ordered_json budgets_json(const Options& opt) {
  return ordered_json{{"fuel", opt.fuel},
                      {"closure-budget", opt.closure_budget},
                      {"depth", opt.depth},
                      {"ctx-size", opt.ctx_size},
                      {"frames", opt.frames}};
}

// One JSON object per result line, fields in a stable order.
void emit_json(const std::string& command, const std::string& input, const std::string& verdict,
               const std::vector<std::string>& witness, const Options& opt, long millis) {
  ordered_json j{{"command", command},
                 {"input", input},
                 {"verdict", verdict},
                 {"witness", witness},
                 {"budgets", budgets_json(opt)},
                 {"millis", millis}};
  std::cout << j.dump() << "\n";
}

void emit(const std::string& command, const std::string& input, const std::string& verdict,
          const std::vector<std::string>& witness, const Options& opt, long millis) {
  if (opt.format == "json") {
    emit_json(command, input, verdict, witness, opt, millis);
    return;
  }
  std::cout << verdict << "\n";
  for (const auto& line : witness) std::cout << "  " << line << "\n";
}

long run_millis(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start)
      .count();
}

int run_corpus_cmd(const Options& opt) {
  auto entries = parse_corpus_file(opt.corpus_file);
  RunReport report = run_corpus(entries, game_config(opt), falsify_budgets(opt));
  for (const auto& r : report.entries) {
    if (opt.format == "json") {
      ordered_json j{{"command", "corpus"},
                     {"input", r.entry.name},
                     {"verdict", r.pass ? "ok" : "mismatch"},
                     {"witness",
                      ordered_json{{"relaxed-bisim", r.actual_relaxed_bisim},
                                   {"relaxed-falsify", r.actual_relaxed_falsify},
                                   {"original-bisim", r.actual_original_bisim},
                                   {"original-falsify", r.actual_original_falsify}}},
                     {"budgets", budgets_json(opt)},
                     {"millis", r.millis}};
      std::cout << j.dump() << "\n";
      continue;
    }
    if (r.pass) {
      std::cout << "[ok] " << r.entry.name << " (" << r.millis << " ms)\n";
    } else {
      auto cell = [&](const char* label, const std::string& expected, const std::string& got) {
        if (expected != got)
          std::cout << "[MISMATCH] " << r.entry.name << " " << label << ": expected " << expected
                    << ", got " << got << "\n";
      };
      cell("relaxed-bisim", r.entry.expect_relaxed_bisim, r.actual_relaxed_bisim);
      cell("relaxed-falsify", r.entry.expect_relaxed_falsify, r.actual_relaxed_falsify);
      cell("original-bisim", r.entry.expect_original_bisim, r.actual_original_bisim);
      cell("original-falsify", r.entry.expect_original_falsify, r.actual_original_falsify);
    }
  }
  if (opt.format == "text") {
    int passed = 0;
    for (const auto& r : report.entries) passed += r.pass;
    std::cout << "corpus: " << passed << "/" << report.entries.size() << " passed in "
              << report.total_millis << " ms\n";
  }
  return report.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for the call-by-value lambda calculus with shift and reset"};
  app.require_subcommand(1);

  Options opt;
  std::string term_a, term_b;

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a closed term");
  eval_cmd->add_option("term", term_a, "term")->required();
  add_common_flags(eval_cmd, opt);

  auto* trace_cmd = app.add_subcommand("trace", "print the reduction sequence");
  trace_cmd->add_option("term", term_a, "term")->required();
  add_common_flags(trace_cmd, opt);

  auto* stuck_cmd = app.add_subcommand("stuck", "is the term stuck?");
  stuck_cmd->add_option("term", term_a, "term")->required();
  add_common_flags(stuck_cmd, opt);

  auto* cps_cmd = app.add_subcommand("cps", "CPS-translate a term");
  cps_cmd->add_option("term", term_a, "term")->required();
  add_common_flags(cps_cmd, opt);

  auto* cpseq_cmd = app.add_subcommand("cps-equiv", "compare CPS translations up to beta-eta");
  cpseq_cmd->add_option("left", term_a, "left term")->required();
  cpseq_cmd->add_option("right", term_b, "right term")->required();
  add_common_flags(cpseq_cmd, opt);

  auto* kh_cmd = app.add_subcommand("kh", "search for an equational derivation");
  kh_cmd->add_option("left", term_a, "left term")->required();
  kh_cmd->add_option("right", term_b, "right term")->required();
  add_common_flags(kh_cmd, opt);

  auto* bisim_cmd = app.add_subcommand("bisim", "play the bisimulation game");
  bisim_cmd->add_option("left", term_a, "left term")->required();
  bisim_cmd->add_option("right", term_b, "right term")->required();
  add_common_flags(bisim_cmd, opt);

  auto* falsify_cmd = app.add_subcommand("falsify", "search for a distinguishing context");
  falsify_cmd->add_option("left", term_a, "left term")->required();
  falsify_cmd->add_option("right", term_b, "right term")->required();
  add_common_flags(falsify_cmd, opt);

  auto* compare_cmd = app.add_subcommand("compare", "all four checks side by side");
  compare_cmd->add_option("left", term_a, "left term")->required();
  compare_cmd->add_option("right", term_b, "right term")->required();
  add_common_flags(compare_cmd, opt);

  auto* corpus_cmd = app.add_subcommand("corpus", "run the example corpus");
  corpus_cmd->fallthrough();
  corpus_cmd->add_subcommand("run", "run all entries and check expectations");
  corpus_cmd->add_option("--file", opt.corpus_file, "corpus file path");
  add_common_flags(corpus_cmd, opt);
  corpus_cmd->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  auto start = std::chrono::steady_clock::now();
  try {
    if (eval_cmd->parsed()) {
      validate_budgets(opt, false, false);
      Outcome o = evaluate(parse_closed(term_a), opt.fuel);
      emit("eval", term_a, outcome_line(o), {}, opt, run_millis(start));
    } else if (trace_cmd->parsed()) {
      validate_budgets(opt, false, false);
      std::vector<std::string> lines;
      for (const auto& t : trace(parse_closed(term_a), opt.fuel)) lines.push_back(print(t));
      emit("trace", term_a, "trace of " + std::to_string(lines.size()) + " terms", lines, opt,
           run_millis(start));
    } else if (stuck_cmd->parsed()) {
      emit("stuck", term_a, is_stuck(parse_closed(term_a)) ? "true" : "false", {}, opt,
           run_millis(start));
    } else if (cps_cmd->parsed()) {
      TermPtr t = parse_with_aliases(term_a);
      emit("cps", term_a, print(cps_translate(t)), {}, opt, run_millis(start));
    } else if (cpseq_cmd->parsed()) {
      validate_budgets(opt, false, false);
      TermPtr t0 = parse_with_aliases(term_a);
      TermPtr t1 = parse_with_aliases(term_b);
      CpsVerdict v = cps_equiv(t0, t1, opt.fuel);
      const char* name = v == CpsVerdict::Equiv    ? "equiv"
                         : v == CpsVerdict::Inequiv ? "inequiv"
                                                    : "unknown";
      emit("cps-equiv", term_a + " | " + term_b, name, {}, opt, run_millis(start));
    } else if (kh_cmd->parsed()) {
      validate_budgets(opt, false, false);
      TermPtr t0 = parse_with_aliases(term_a);
      TermPtr t1 = parse_with_aliases(term_b);
      auto d = kh_search(t0, t1, opt.depth);
      if (!d) {
        emit("kh", term_a + " | " + term_b, "none", {}, opt, run_millis(start));
      } else {
        emit("kh", term_a + " | " + term_b,
             "derivation of length " + std::to_string(d->steps.size()), derivation_lines(*d), opt,
             run_millis(start));
      }
    } else if (bisim_cmd->parsed()) {
      validate_budgets(opt, true, false);
      TermPtr t0 = parse_closed(term_a);
      TermPtr t1 = parse_closed(term_b);
      Verdict v = opt.semantics == "original" ? check_programs(t0, t1, game_config(opt))
                                              : check_relaxed(t0, t1, game_config(opt));
      emit("bisim", term_a + " | " + term_b, verdict_name(v.kind), trace_lines(v.witness), opt,
           run_millis(start));
    } else if (falsify_cmd->parsed()) {
      validate_budgets(opt, false, true);
      TermPtr t0 = parse_with_aliases(term_a);
      TermPtr t1 = parse_with_aliases(term_b);
      FalsifyVerdict v = opt.semantics == "original"
                             ? falsify_programs(t0, t1, falsify_budgets(opt))
                             : falsify_relaxed(t0, t1, falsify_budgets(opt));
      emit("falsify", term_a + " | " + term_b, falsify_name(v.kind), falsify_lines(v), opt,
           run_millis(start));
    } else if (compare_cmd->parsed()) {
      validate_budgets(opt, true, true);
      TermPtr t0 = parse_with_aliases(term_a);
      TermPtr t1 = parse_with_aliases(term_b);
      ComparisonReport r = compare_semantics(t0, t1, falsify_budgets(opt), game_config(opt));
      if (opt.format == "json") {
        std::vector<std::string> cells{
            std::string("relaxed-bisim: ") + verdict_name(r.bisim_relaxed.kind),
            std::string("relaxed-falsify: ") + falsify_name(r.falsify_relaxed.kind),
            std::string("original-bisim: ") + verdict_name(r.bisim_programs.kind),
            std::string("original-falsify: ") + falsify_name(r.falsify_programs.kind)};
        emit_json("compare", term_a + " | " + term_b, "report", cells, opt, run_millis(start));
      } else {
        std::cout << "relaxed  bisim:   " << verdict_name(r.bisim_relaxed.kind) << "\n";
        std::cout << "relaxed  falsify: " << falsify_name(r.falsify_relaxed.kind) << "\n";
        std::cout << "original bisim:   " << verdict_name(r.bisim_programs.kind) << "\n";
        std::cout << "original falsify: " << falsify_name(r.falsify_programs.kind) << "\n";
      }
    } else if (corpus_cmd->parsed()) {
      validate_budgets(opt, true, true);
      return run_corpus_cmd(opt);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const OpenTermError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
