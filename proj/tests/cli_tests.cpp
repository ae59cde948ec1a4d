// End-to-end checks of the command-line tool: outputs, exit codes, and
// byte-for-byte determinism. Spawns the real binary.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

int failures = 0;

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(SHIFTLAB_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

void check(bool ok, const std::string& what, const RunResult& r) {
  if (ok) {
    std::printf("[ok] %s\n", what.c_str());
  } else {
    std::printf("[FAIL] %s\n  exit=%d output:\n%s\n", what.c_str(), r.exit_code,
                r.output.c_str());
    ++failures;
  }
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

int main() {
  {
    RunResult r = run("eval \"<S k. k>\"");
    check(r.exit_code == 0 && contains(r.output, "value: \\x") && contains(r.output, "<x"),
          "eval reduces a capture to the delimited identity", r);
  }
  {
    RunResult r = run("stuck \"S k. k\"");
    check(r.exit_code == 0 && r.output == "true\n", "stuck says true for a bare shift", r);
  }
  {
    RunResult r = run("eval --fuel 100 OMEGA");
    check(r.exit_code == 0 && r.output == "timeout\n", "eval times out on the alias OMEGA", r);
  }
  {
    RunResult r = run("trace --fuel 5 \"<\\y. y>\"");
    check(r.exit_code == 0 && contains(r.output, "<\\y. y>") && contains(r.output, "\n  \\y. y"),
          "trace lists both reduction states", r);
  }
  {
    RunResult r = run("cps-equiv \"<\\x. x>\" \"\\x. x\"");
    check(r.exit_code == 0 && r.output == "equiv\n", "cps-equiv validates the delimiter law", r);
  }
  {
    RunResult r = run("cps \"\\x. x\"");
    check(r.exit_code == 0 && contains(r.output, "\\k") && !contains(r.output, "<"),
          "cps prints a delimiter-free translation", r);
  }
  {
    RunResult r = run("kh --depth 2 \"<< \\x. x >>\" \"< \\x. x >\"");
    check(r.exit_code == 0 && contains(r.output, "derivation of length 1"),
          "kh finds the one-step derivation", r);
  }
  {
    RunResult r = run("bisim --semantics relaxed \"\\x. x\" \"S k. k (\\x. x)\"");
    check(r.exit_code == 0 && contains(r.output, "distinguished") &&
              contains(r.output, "stuck-reached"),
          "bisim distinguishes value from stuck and prints a trace", r);
  }
  {
    RunResult r = run("bisim --semantics original OMEGA \"S k. OMEGA\"");
    check(r.exit_code == 0 && contains(r.output, "no-counterexample"),
          "bisim under the original semantics accepts omega vs S k. omega", r);
  }
  {
    RunResult r = run("falsify --semantics relaxed \"\\x. x\" \"S k. k (\\x. x)\"");
    check(r.exit_code == 0 && contains(r.output, "counterexample") &&
              contains(r.output, "context: _"),
          "falsify reports the empty-context witness", r);
  }
  {
    RunResult r = run("compare OMEGA \"S k. OMEGA\"");
    check(r.exit_code == 0 && contains(r.output, "relaxed  bisim:   likely-distinguished") &&
              contains(r.output, "original falsify: none-found"),
          "compare prints the four-cell table", r);
  }

  // exit codes
  {
    RunResult r = run("eval \"((\"");
    check(r.exit_code == 2, "parse errors exit 2", r);
  }
  {
    RunResult r = run("eval \"x y\"");
    check(r.exit_code == 3, "open terms exit 3", r);
  }
  {
    RunResult r = run("bisim --fuel 0 \"\\x. x\" \"\\x. x\"");
    check(r.exit_code == 4, "nonpositive budgets exit 4", r);
  }

  // determinism: identical bytes across runs
  {
    RunResult a = run("bisim --semantics relaxed \"\\x. \\y. y\" \"\\x. \\y. x\"");
    RunResult b = run("bisim --semantics relaxed \"\\x. \\y. y\" \"\\x. \\y. x\"");
    check(a.exit_code == 0 && a.output == b.output && contains(a.output, "distinguished"),
          "bisim output is byte-deterministic", a);
  }

  // json mode: one object per line with the stable field order
  {
    RunResult r = run("eval --format json \"<\\x. x>\"");
    check(r.exit_code == 0 && r.output.rfind("{\"command\":\"eval\"", 0) == 0 &&
              contains(r.output, "\"verdict\":\"value: \\\\x. x\"") &&
              contains(r.output, "\"budgets\":{\"fuel\":2000") &&
              contains(r.output, "\"millis\":"),
          "json mode emits the expected object", r);
  }

  // corpus: a failing expectation makes the run exit 1
  {
    std::string good = std::string(getenv("TMPDIR") ? getenv("TMPDIR") : "/tmp") +
                       "/shiftlab_cli_corpus_ok.txt";
    std::ofstream(good) << "name: trivial\nleft: ID\nright: ID\n"
                           "expect-relaxed: bisim=no-counterexample falsify=none-found\n"
                           "expect-original: bisim=no-counterexample falsify=none-found\n"
                           "ref: identity\n";
    RunResult r = run("corpus run --file " + good + " --frames 1 --fuel 200");
    check(r.exit_code == 0 && contains(r.output, "[ok] trivial") &&
              contains(r.output, "corpus: 1/1 passed"),
          "corpus run passes on a correct expectation", r);

    std::string bad = std::string(getenv("TMPDIR") ? getenv("TMPDIR") : "/tmp") +
                      "/shiftlab_cli_corpus_bad.txt";
    std::ofstream(bad) << "name: broken\nleft: ID\nright: ID\n"
                          "expect-relaxed: bisim=distinguished falsify=none-found\n"
                          "expect-original: bisim=no-counterexample falsify=none-found\n"
                          "ref: wrong on purpose\n";
    RunResult rb = run("corpus run --file " + bad + " --frames 1 --fuel 200");
    check(rb.exit_code == 1 && contains(rb.output, "[MISMATCH] broken relaxed-bisim"),
          "corpus run exits 1 on an expectation mismatch", rb);
  }

  if (failures == 0) {
    std::printf("cli: all checks passed\n");
    return 0;
  }
  std::printf("cli: %d check(s) failed\n", failures);
  return 1;
}
