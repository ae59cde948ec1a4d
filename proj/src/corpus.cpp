#include "shiftlab/corpus.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "shiftlab/parse.hpp"

namespace shiftlab {

const std::map<std::string, TermPtr>& alias_table() {
  static const std::map<std::string, TermPtr> table = [] {
    std::map<std::string, TermPtr> t;
    t["ID"] = parse("\\x. x");
    t["TRUE"] = parse("\\x. \\y. x");
    t["FALSE"] = parse("\\x. \\y. y");
    t["OMEGA"] = parse("(\\x. x x) (\\x. x x)");
    // Turing-style call-by-value fixed point operator and its
    // continuation-capturing variant.
    t["THETA"] = parse("\\x. \\y. y (\\z. x x y z)");
    t["THETA_SHIFT"] = reset(app(t["THETA"], parse("S k. k k")));
    return t;
  }();
  return table;
}

TermPtr parse_with_aliases(const std::string& text) {
  TermPtr t = parse(text);
  for (const auto& [name, value] : alias_table())
    if (free_in(t, name)) t = subst_any(t, name, value);
  return t;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// "bisim=<verdict> falsify=<verdict>"
void parse_expectation(const std::string& text, const std::string& where, std::string* bisim,
                       std::string* falsify) {
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    std::size_t eq = tok.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("corpus: bad expectation token '" + tok + "' in " + where);
    std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
    if (key == "bisim")
      *bisim = value;
    else if (key == "falsify")
      *falsify = value;
    else
      throw std::runtime_error("corpus: unknown expectation key '" + key + "' in " + where);
  }
  if (bisim->empty() || falsify->empty())
    throw std::runtime_error("corpus: incomplete expectation in " + where);
}

}  // namespace

std::vector<CorpusEntry> parse_corpus(std::istream& in) {
  std::vector<CorpusEntry> entries;
  CorpusEntry cur;
  bool open = false;
  std::string line;
  auto flush = [&] {
    if (!open) return;
    if (cur.name.empty() || cur.left_src.empty() || cur.right_src.empty())
      throw std::runtime_error("corpus: incomplete entry '" + cur.name + "'");
    entries.push_back(cur);
    cur = CorpusEntry{};
    open = false;
  };
  while (std::getline(in, line)) {
    std::string s = trim(line);
    if (s.empty()) {
      flush();
      continue;
    }
    if (s[0] == '#') continue;
    std::size_t colon = s.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("corpus: expected 'key: value', got '" + s + "'");
    std::string key = trim(s.substr(0, colon));
    std::string value = trim(s.substr(colon + 1));
    open = true;
    if (key == "name")
      cur.name = value;
    else if (key == "left")
      cur.left_src = value;
    else if (key == "right")
      cur.right_src = value;
    else if (key == "expect-relaxed")
      parse_expectation(value, cur.name, &cur.expect_relaxed_bisim, &cur.expect_relaxed_falsify);
    else if (key == "expect-original")
      parse_expectation(value, cur.name, &cur.expect_original_bisim,
                        &cur.expect_original_falsify);
    else if (key == "ref")
      cur.ref = value;
    else
      throw std::runtime_error("corpus: unknown key '" + key + "' in entry '" + cur.name + "'");
  }
  flush();
  return entries;
}

std::vector<CorpusEntry> parse_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("corpus: cannot open '" + path + "'");
  return parse_corpus(in);
}

RunReport run_corpus(const std::vector<CorpusEntry>& entries, const GameConfig& game_cfg,
                     const FalsifyBudgets& budgets) {
  RunReport report;
  report.all_pass = true;
  report.total_millis = 0;
  for (const auto& entry : entries) {
    auto start = std::chrono::steady_clock::now();
    TermPtr t0 = parse_with_aliases(entry.left_src);
    TermPtr t1 = parse_with_aliases(entry.right_src);
    ComparisonReport cmp = compare_semantics(t0, t1, budgets, game_cfg);
    auto end = std::chrono::steady_clock::now();
    EntryResult r;
    r.entry = entry;
    r.actual_relaxed_bisim = verdict_name(cmp.bisim_relaxed.kind);
    r.actual_relaxed_falsify = falsify_name(cmp.falsify_relaxed.kind);
    r.actual_original_bisim = verdict_name(cmp.bisim_programs.kind);
    r.actual_original_falsify = falsify_name(cmp.falsify_programs.kind);
    r.pass = r.actual_relaxed_bisim == entry.expect_relaxed_bisim &&
             r.actual_relaxed_falsify == entry.expect_relaxed_falsify &&
             r.actual_original_bisim == entry.expect_original_bisim &&
             r.actual_original_falsify == entry.expect_original_falsify;
    r.millis =
        std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
    report.total_millis += r.millis;
    if (!r.pass) report.all_pass = false;
    report.entries.push_back(std::move(r));
  }
  return report;
}

}  // namespace shiftlab
