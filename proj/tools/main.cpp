// Command-line front end: parse group/matrix/complex files, run a certified
// pipeline, stream one record per step. Records are plain `key=value` lines
// by default and JSON lines with --json; both are flushed per record and
// byte-identical across runs on identical inputs.
//
// Exit codes: 0 target met / run completed, 2 budget exhausted with valid
// partial output, 1 input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "l2approx/errors.hpp"
#include "l2approx/groupring.hpp"
#include "l2approx/homology.hpp"
#include "l2approx/io.hpp"
#include "l2approx/lueck.hpp"
#include "l2approx/oracles.hpp"
#include "l2approx/rational.hpp"
#include "l2approx/spectral.hpp"

namespace {

using nlohmann::ordered_json;
using namespace l2approx;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitBudget = 2;

// Accepts `p`, `p/q`, and `2^-N`.
Rational parse_dyadic(const std::string& text) {
  if (text.rfind("2^-", 0) == 0) {
    unsigned long n = std::stoul(text.substr(3));
    return Rational(1) / pow_rational(Rational(2), n);
  }
  return rational_from_string(text);
}

const char* status_name(BracketStatus s) {
  switch (s) {
    case BracketStatus::Exact: return "exact";
    case BracketStatus::TargetMet: return "target_met";
    case BracketStatus::IterationsExhausted: return "iterations_exhausted";
    case BracketStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "unknown";
}

// One output record; fields appear in insertion order in both formats.
class Record {
 public:
  Record& field(const std::string& key, const std::string& value) {
    keys_.push_back(key);
    values_.push_back(value);
    quoted_.push_back(true);
    return *this;
  }
  Record& field(const std::string& key, std::size_t value) {
    keys_.push_back(key);
    values_.push_back(std::to_string(value));
    quoted_.push_back(false);
    return *this;
  }
  Record& field(const std::string& key, const Rational& value) {
    return field(key, rational_to_string(value));
  }

  void emit(std::ostream& out, bool json) const {
    if (json) {
      ordered_json j;
      for (std::size_t i = 0; i < keys_.size(); ++i) {
        if (quoted_[i])
          j[keys_[i]] = values_[i];
        else
          j[keys_[i]] = std::stoull(values_[i]);
      }
      out << j.dump() << "\n";
    } else {
      for (std::size_t i = 0; i < keys_.size(); ++i)
        out << (i ? " " : "") << keys_[i] << "=" << values_[i];
      out << "\n";
    }
    out.flush();
  }

 private:
  std::vector<std::string> keys_;
  std::vector<std::string> values_;
  std::vector<bool> quoted_;
};

struct Job {
  std::string group_file;
  std::string matrix_file;
  std::string complex_file;
  std::size_t iters = 64;
  std::uint64_t fuel = WordOracle::kDefaultFuel;
  std::uint64_t mem_terms = 1000000;
  std::string target;
  std::string cert = "auto";
  std::uint32_t quotient_cap = 512;
  std::size_t degree = 1;
  std::size_t stages = 1;
  std::string norm_bound;
  std::string tail_ratio;
  std::string tail_c;
  std::string tail_alpha = "1/2";
  std::string output;
  bool json = false;

  Budget budget() const { return Budget{fuel, mem_terms}; }

  BracketOptions bracket_options(bool default_zero_target) const {
    BracketOptions opts;
    opts.max_iters = iters;
    opts.budget = budget();
    opts.quotient_cap = quotient_cap;
    if (!target.empty()) {
      opts.target = parse_dyadic(target);
      if (opts.target <= Rational(0) || opts.target > Rational(1))
        throw std::invalid_argument("--target must lie in (0, 1]");
    } else if (default_zero_target) {
      opts.target = Rational(0);
    }
    if (cert != "auto") {
      Rational q = parse_dyadic(cert);
      if (q < Rational(0)) throw std::invalid_argument("--cert must be non-negative");
      opts.cert = q;
    }
    return opts;
  }

  TailSpec tail_spec() const {
    TailSpec spec;
    if (!tail_ratio.empty() && !tail_c.empty())
      throw std::invalid_argument("--tail-ratio and --tail-c are mutually exclusive");
    if (!tail_ratio.empty()) {
      spec.kind = TailSpec::Kind::CertifiedRatio;
      spec.rho = rational_from_string(tail_ratio);
    } else if (!tail_c.empty()) {
      spec.kind = TailSpec::Kind::NovikovShubin;
      spec.c = rational_from_string(tail_c);
      Rational alpha = rational_from_string(tail_alpha);
      if (alpha <= Rational(0)) throw std::invalid_argument("--tail-alpha must be positive");
      spec.alpha_num = static_cast<unsigned long>(alpha.get_num().get_ui());
      spec.alpha_den = static_cast<unsigned long>(alpha.get_den().get_ui());
    }
    return spec;
  }
};

void emit_bracket_steps(const BracketResult& res, std::ostream& out, bool json) {
  for (std::size_t i = 0; i < res.steps.size(); ++i) {
    const BracketStep& s = res.steps[i];
    Record r;
    r.field("k", s.p).field("lo", s.lo).field("hi", s.hi);
    r.field("status", i + 1 == res.steps.size() ? status_name(res.status) : "running");
    r.emit(out, json);
  }
  if (res.steps.empty()) {
    Record r;
    r.field("k", std::size_t{0}).field("lo", res.lo).field("hi", res.hi);
    r.field("status", status_name(res.status));
    r.emit(out, json);
  }
}

int run_dimker(const Job& job, std::ostream& out, bool as_bracket) {
  OracleRef oracle = load_group(job.group_file);
  GroupRingMatrix a = load_matrix(job.matrix_file, oracle, job.budget());
  BracketOptions opts = job.bracket_options(!as_bracket);
  // `dimker --iters N` means indices 0..N inclusive.
  if (!as_bracket) opts.max_iters = job.iters + 1;
  BracketResult res = dimker_bracket(a, opts);
  emit_bracket_steps(res, out, job.json);
  switch (res.status) {
    case BracketStatus::Exact:
    case BracketStatus::TargetMet:
      return kExitOk;
    case BracketStatus::IterationsExhausted:
      return as_bracket ? kExitBudget : kExitOk;
    case BracketStatus::BudgetExceeded:
      return kExitBudget;
  }
  return kExitOk;
}

int run_lueck(const Job& job, std::ostream& out) {
  OracleRef oracle = load_group(job.group_file);
  GroupRingMatrix a = load_matrix(job.matrix_file, oracle, job.budget());
  LueckStream stream(oracle, a, job.budget(), job.quotient_cap);
  for (std::size_t i = 1; i <= job.iters; ++i) {
    std::optional<AdaptedStep> step;
    try {
      step = stream.next();
    } catch (const FuelExhausted& e) {
      Record().field("k", i).field("status", "budget_exceeded").emit(out, job.json);
      return kExitBudget;
    } catch (const TermBudgetExceeded& e) {
      Record().field("k", i).field("status", "budget_exceeded").emit(out, job.json);
      return kExitBudget;
    }
    if (!step) {
      Record().field("k", i).field("status", "quotient_cap_exhausted").emit(out, job.json);
      return kExitBudget;
    }
    Record r;
    r.field("k", step->k).field("value", step->value);
    if (step->bound) r.field("bound", *step->bound);
    r.field("order", std::size_t{step->quotient.order});
    r.field("status", i == job.iters ? "done" : "running");
    r.emit(out, job.json);
  }
  return kExitOk;
}

int run_detfk(const Job& job, std::ostream& out) {
  OracleRef oracle = load_group(job.group_file);
  GroupRingMatrix a = load_matrix(job.matrix_file, oracle, job.budget());
  std::optional<Rational> m_bound;
  if (!job.norm_bound.empty()) m_bound = rational_from_string(job.norm_bound);
  FkLogdetResult res = fk_logdet_partial(a, m_bound, job.iters, job.tail_spec(), job.budget());
  Record r;
  r.field("k", res.terms).field("lo", res.value.lo).field("hi", res.value.hi);
  r.field("width", res.value.hi - res.value.lo);
  r.field("provenance", res.heuristic ? "heuristic" : "certified");
  r.field("status", "done");
  r.emit(out, job.json);
  return kExitOk;
}

int run_torsion(const Job& job, std::ostream& out) {
  OracleRef oracle = load_group(job.group_file);
  FinPresComplex c = load_complex(job.complex_file, oracle, job.budget());
  if (auto bad = validate_complex(c, job.budget()))
    throw std::invalid_argument(job.complex_file + ": boundary " + std::to_string(bad->p) +
                                " entry (" + std::to_string(bad->i) + ", " +
                                std::to_string(bad->j) + "): " + bad->reason);
  TorsionInput input;
  input.boundaries = c.boundaries;
  if (!job.norm_bound.empty()) input.norm_bound = rational_from_string(job.norm_bound);
  input.tail = job.tail_spec();
  TorsionResult res = torsion_estimate(input, job.iters, job.budget());
  for (std::size_t p = 0; p < res.degrees.size(); ++p) {
    const FkLogdetResult& d = res.degrees[p];
    Record r;
    r.field("k", p + 1).field("stage", "degree");
    r.field("lo", d.value.lo).field("hi", d.value.hi);
    r.field("provenance", d.heuristic ? "heuristic" : "certified");
    r.field("status", "running");
    r.emit(out, job.json);
  }
  Record r;
  r.field("k", res.degrees.size()).field("stage", "total");
  r.field("lo", res.value.lo).field("hi", res.value.hi);
  r.field("width", res.value.hi - res.value.lo);
  r.field("provenance", res.heuristic ? "heuristic" : "certified");
  r.field("status", "done");
  r.emit(out, job.json);
  return kExitOk;
}

int run_betti(const Job& job, std::ostream& out) {
  OracleRef oracle = load_group(job.group_file);
  BettiBudgets budgets;
  budgets.stages = job.stages;
  budgets.bracket = job.bracket_options(false);
  BettiEstimate res = betti_estimate(oracle, job.degree, budgets);
  bool budget_hit = false;
  for (std::size_t idx = 0; idx < res.cells.size(); ++idx) {
    const BettiCell& cell = res.cells[idx];
    if (cell.status == BracketStatus::BudgetExceeded) budget_hit = true;
    Record r;
    r.field("k", idx).field("i", cell.i).field("j", cell.j);
    r.field("lo", cell.value.lo).field("hi", cell.value.hi);
    r.field("status", status_name(cell.status));
    r.emit(out, job.json);
  }
  Record r;
  r.field("k", res.cells.size()).field("stage", "sup_inf");
  r.field("lo", res.sup_inf.lo).field("hi", res.sup_inf.hi);
  r.field("stages_truncated", res.stages_truncated ? "true" : "false");
  r.field("grid_truncated", res.grid_truncated ? "true" : "false");
  r.field("status", "done");
  r.emit(out, job.json);
  return budget_hit ? kExitBudget : kExitOk;
}

int run_trace(const Job& job, std::ostream& out) {
  OracleRef oracle = load_group(job.group_file);
  GroupRingMatrix a = load_matrix(job.matrix_file, oracle, job.budget());
  Record r;
  r.field("k", std::size_t{0}).field("value", trace(a, job.budget()));
  r.field("status", "done");
  r.emit(out, job.json);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified brackets for kernel dimensions, log-determinants, torsion, and "
               "Betti numbers of matrices over group rings"};
  app.require_subcommand(1);

  Job job;
  std::string command;
  for (const char* name : {"dimker", "bracket", "lueck", "detfk", "torsion", "betti", "trace"}) {
    CLI::App* sub = app.add_subcommand(name, "");
    sub->callback([&command, name] { command = name; });
    sub->add_option("--group", job.group_file, "group description file")->required();
    if (std::string(name) == "torsion") {
      sub->add_option("--complex", job.complex_file, "chain complex file")->required();
    } else if (std::string(name) != "betti") {
      sub->add_option("--matrix", job.matrix_file, "matrix file")->required();
    }
    sub->add_option("--iters", job.iters, "iteration / series budget")
        ->check(CLI::PositiveNumber);
    sub->add_option("--fuel", job.fuel, "word-oracle fuel per query")
        ->check(CLI::PositiveNumber);
    sub->add_option("--mem-terms", job.mem_terms, "group-ring term budget")
        ->check(CLI::PositiveNumber);
    sub->add_option("--target", job.target, "bracket width target, `p/q` or `2^-N`");
    sub->add_option("--cert", job.cert, "determinant-class certificate, rational or `auto`");
    sub->add_option("--quotient-cap", job.quotient_cap, "finite-quotient search cap")
        ->check(CLI::PositiveNumber);
    sub->add_option("--degree", job.degree, "homological degree");
    sub->add_option("--stages", job.stages, "resolution stages for betti")
        ->check(CLI::PositiveNumber);
    sub->add_option("--norm-bound", job.norm_bound, "operator norm bound M");
    sub->add_option("--tail-ratio", job.tail_ratio, "certified spectral ratio for the tail");
    sub->add_option("--tail-c", job.tail_c, "Novikov-Shubin tail constant C");
    sub->add_option("--tail-alpha", job.tail_alpha, "Novikov-Shubin tail exponent");
    sub->add_option("--output", job.output, "write records to a file instead of stdout");
    sub->add_flag("--json", job.json, "emit JSON-lines records");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitInput : kExitOk;
  }

  std::ofstream file_out;
  if (!job.output.empty()) {
    file_out.open(job.output);
    if (!file_out) {
      std::cerr << "error: cannot open output file " << job.output << "\n";
      return kExitInput;
    }
  }
  std::ostream& out = job.output.empty() ? std::cout : file_out;

  try {
    if (command == "dimker") return run_dimker(job, out, false);
    if (command == "bracket") return run_dimker(job, out, true);
    if (command == "lueck") return run_lueck(job, out);
    if (command == "detfk") return run_detfk(job, out);
    if (command == "torsion") return run_torsion(job, out);
    if (command == "betti") return run_betti(job, out);
    if (command == "trace") return run_trace(job, out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const QuotientCapExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const FuelExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const TermBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
