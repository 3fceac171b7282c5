// End-to-end checks of the command-line tool: record shapes, exact golden
// values, exit codes, and determinism. Invoked by ctest with the binary
// path and the fixture directory as arguments.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "l2approx/rational.hpp"

namespace {

int g_failures = 0;

void expect(bool cond, const std::string& what) {
  if (!cond) {
    ++g_failures;
    std::fprintf(stderr, "cli check failed: %s\n", what.c_str());
  }
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& cmd) {
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
  int status = pclose(pipe);
  if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  return res;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

// value of `key=...` in a text-mode record
std::string text_field(const std::string& line, const std::string& key) {
  std::string needle = key + "=";
  std::size_t pos = line.find(needle);
  if (pos != 0 && (pos == std::string::npos || line[pos - 1] != ' ')) return "";
  std::size_t start = pos + needle.size();
  std::size_t end = line.find(' ', start);
  return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: cli_tests <cli-binary> <data-dir>\n");
    return 1;
  }
  const std::string cli = argv[1];
  const std::string data = argv[2];

  // dimker over Z for 1 - t: 9 JSON records with the exact central binomial
  // upper bounds, all lower bounds zero, determministic reruns.
  {
    const std::string cmd =
        cli + " dimker --group " + data + "/z.grp --matrix " + data + "/oneminus_t.mat --iters 8 --json";
    RunResult r = run(cmd + " 2>/dev/null");
    expect(r.exit_code == 0, "dimker exit code");
    std::vector<std::string> lines = lines_of(r.out);
    expect(lines.size() == 9, "dimker record count");
    for (std::size_t p = 0; p < lines.size() && p <= 8; ++p) {
      using l2approx::Rational;
      Rational hi = Rational(l2approx::binomial(2 * p, p)) /
                    l2approx::pow_rational(Rational(4), static_cast<unsigned long>(p));
      std::string want = "{\"k\":" + std::to_string(p) + ",\"lo\":\"0\",\"hi\":\"" +
                         l2approx::rational_to_string(hi) + "\",\"status\":\"" +
                         (p == 8 ? "iterations_exhausted" : "running") + "\"}";
      expect(lines[p] == want, "dimker record " + std::to_string(p));
    }
    RunResult again = run(cmd + " 2>/dev/null");
    expect(again.exit_code == r.exit_code && again.out == r.out, "dimker rerun is byte-identical");
  }

  // text mode spells the same records as key=value lines
  {
    RunResult r = run(cli + " dimker --group " + data + "/z.grp --matrix " + data +
                      "/oneminus_t.mat --iters 4 2>/dev/null");
    expect(r.exit_code == 0, "dimker text exit code");
    std::vector<std::string> lines = lines_of(r.out);
    expect(!lines.empty() && lines[0] == "k=0 lo=0 hi=1 status=running", "dimker first text record");
    for (const std::string& line : lines) {
      using l2approx::rational_from_string;
      expect(rational_from_string(text_field(line, "hi")) >= rational_from_string(text_field(line, "lo")),
             "record with hi < lo: " + line);
    }
  }

  // trace of 2 + 3s picks out the identity coefficient
  {
    RunResult r = run(cli + " trace --group " + data + "/z2.grp --matrix " + data + "/m.mat 2>/dev/null");
    expect(r.exit_code == 0, "trace exit code");
    expect(r.out == "k=0 value=2 status=done\n", "trace record");
  }

  // bracket certifies the trivial kernel of the constant 2 exactly
  {
    RunResult r = run(cli + " bracket --group " + data + "/z.grp --matrix " + data +
                      "/two.mat --target 2^-10 2>/dev/null");
    expect(r.exit_code == 0, "exact bracket exit code");
    std::vector<std::string> lines = lines_of(r.out);
    expect(!lines.empty() && text_field(lines.back(), "status") == "exact", "exact bracket status");
    expect(!lines.empty() && text_field(lines.back(), "lo") == "0" &&
               text_field(lines.back(), "hi") == "0",
           "exact bracket value");
  }

  // an unreachable target exhausts the iterations: exit 2, valid partial
  {
    RunResult r = run(cli + " bracket --group " + data + "/z.grp --matrix " + data +
                      "/oneminus_t.mat --iters 6 --target 2^-20 2>/dev/null");
    expect(r.exit_code == 2, "exhausted bracket exit code");
    std::vector<std::string> lines = lines_of(r.out);
    expect(!lines.empty() && text_field(lines.back(), "status") == "iterations_exhausted",
           "exhausted bracket status");
    for (const std::string& line : lines) {
      using l2approx::rational_from_string;
      expect(rational_from_string(text_field(line, "hi")) >= rational_from_string(text_field(line, "lo")),
             "exhausted bracket record with hi < lo: " + line);
    }
  }

  // a missing input file is an input error: exit 1, diagnostic on stderr
  {
    RunResult r = run(cli + " dimker --group " + data + "/no_such_group.grp --matrix " + data +
                      "/two.mat 2>&1 1>/dev/null");
    expect(r.exit_code == 1, "missing file exit code");
    expect(r.out.find("error:") != std::string::npos, "missing file diagnostic");
    expect(r.out.find("no_such_group.grp") != std::string::npos, "missing file name in diagnostic");
  }

  if (g_failures == 0) {
    std::printf("cli integration: all checks passed\n");
    return 0;
  }
  std::printf("cli integration: %d check(s) failed\n", g_failures);
  return 1;
}
