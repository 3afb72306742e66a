// Copyright 2026 the perrin-palindromes authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "perrinpal/pipeline.hpp"

namespace {

using namespace perrinpal;

RootMode parse_mode(const std::string& s) {
  if (s == "corrected") return RootMode::corrected;
  if (s == "paper-replication" || s == "paper_replication") return RootMode::paper_replication;
  throw CLI::ValidationError("--mode", "expected corrected or paper-replication");
}

/// Big integers arrive as decimal or scientific literals ("2.8e48"); they
/// must denote an exact integer.
mpz_class parse_big_int(const std::string& s) {
  HPReal v = HPReal::of_decimal(s, 512);
  if (!v.is_finite() || !v.is_integer() || v.sign() <= 0) {
    throw CLI::ValidationError("--big-m", "must be a positive integer (scientific notation ok)");
  }
  return v.floor_to_mpz();
}

unsigned default_jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

void print_combo_row(const ComboOutcome& oc) {
  std::string combo;
  if (oc.combo.d1 >= 0) combo += "d1=" + std::to_string(oc.combo.d1);
  if (oc.combo.d2 >= 0) combo += " d2=" + std::to_string(oc.combo.d2);
  if (oc.combo.ell >= 0) combo += " l=" + std::to_string(oc.combo.ell);
  if (oc.combo.m >= 0) combo += " m=" + std::to_string(oc.combo.m);
  if (oc.failed) {
    std::cout << combo << "  FAILED: " << oc.error << "\n";
    return;
  }
  std::cout << combo << "  conv#" << oc.ladder_index << "  ";
  if (oc.homogeneous) {
    std::cout << "homogeneous";
  } else {
    std::cout << "eps=" << oc.epsilon_dec;
  }
  std::cout << "  k<=" << oc.k_bound << (oc.escalated ? "  (escalated)" : "") << "\n";
}

void print_stage_summary(const StageResult& s) {
  std::cout << "stage " << to_string(s.stage) << " [" << to_string(s.mode) << ", "
            << s.precision_digits << " digits]\n";
  std::cout << "  combos: " << s.combos_total << " (" << s.combos_homogeneous << " homogeneous, "
            << s.combos_advanced << " advanced, " << s.combos_failed << " failed, "
            << s.escalations << " escalated)\n";
  if (s.min_epsilon)
    std::cout << "  min eps: " << s.min_epsilon->to_decimal(15) << "  (d1=" << s.argmin_combo.d1
              << " d2=" << s.argmin_combo.d2 << " l=" << s.argmin_combo.ell
              << " m=" << s.argmin_combo.m << ")\n";
  if (s.max_epsilon)
    std::cout << "  max eps: " << s.max_epsilon->to_decimal(15) << "  (d1=" << s.argmax_combo.d1
              << " d2=" << s.argmax_combo.d2 << " l=" << s.argmax_combo.ell
              << " m=" << s.argmax_combo.m << ")\n";
  std::cout << "  aggregate bound: " << to_string(s.stage) << " <= " << s.aggregate_bound << "\n";
  if (s.combos_failed > 0) {
    std::cout << "  WARNING: " << s.combos_failed
              << " combos failed certification; the aggregate covers only the rest\n";
  }
}

int cmd_search(std::uint64_t n_max, bool strict, unsigned jobs) {
  auto hits = search_low_range(n_max, strict, jobs);
  std::cout << "n_max=" << n_max << (strict ? " strict" : "") << "  hits=" << hits.size() << "\n";
  for (const auto& h : hits) {
    const auto& p = h.pattern;
    std::cout << "n=" << h.index << "  P_n=" << h.value.get_str() << "  d1=" << p.d1 << "  d2=";
    if (p.d2) {
      std::cout << *p.d2;
    } else {
      std::cout << "-";
    }
    std::cout << "  l=" << p.ell << "  m=" << p.m << "\n";
  }
  return 0;
}

int cmd_prove(const PipelineOptions& opt, const std::string& out_path) {
  ProofReport rep = run_pipeline(opt);
  {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write report to " << out_path << "\n";
      return 1;
    }
    out << to_json(rep).dump(2) << "\n";
  }
  std::cout << render_text(rep);
  std::cout << "report written to " << out_path << "\n";
  if (!rep.error.empty()) return 1;
  return (rep.closure && hits_are_exactly_22(rep.low_range.hits)) ? 0 : 2;
}

int cmd_reduce(const std::string& stage, RootMode mode, long precision, long l_max, long m_max,
               const mpz_class& big_m, unsigned jobs, const std::string& out_path) {
  RealContext ctx = make_context(precision);
  PerrinRoots roots = plastic_root(ctx, mode);
  StageResult res;
  if (stage == "l") {
    res = stage_l(ctx, roots, big_m, jobs);
  } else if (stage == "m") {
    res = stage_m(ctx, roots, big_m, l_max, jobs);
  } else if (stage == "n") {
    res = stage_n(ctx, roots, big_m, l_max, m_max, jobs);
  } else {
    throw CLI::ValidationError("stage", "expected l, m or n");
  }
  for (const auto& oc : res.per_combo) print_combo_row(oc);
  print_stage_summary(res);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write stage result to " << out_path << "\n";
      return 1;
    }
    out << detail::json_stage(res).dump(2) << "\n";
  }
  return 0;
}

int cmd_cf(RootMode mode, long precision, long count, const mpz_class& big_m) {
  RealContext ctx = make_context(precision);
  PerrinRoots roots = plastic_root(ctx, mode);
  Ival tau = div(ln_iv(Ival::of_long(10, ctx.precision_bits())), ln_iv(roots.alpha_enc));
  std::cout << "mode=" << to_string(mode) << "  tau=" << tau.mid().to_decimal(30) << "\n";
  CfExpansion cf = cf_expand(tau, count);
  std::cout << "partial quotients:";
  for (const auto& a : cf.quotients) std::cout << " " << a.get_str();
  if (cf.termination == CfTermination::precision_exhausted) std::cout << " [truncated: precision]";
  if (cf.termination == CfTermination::exact_rational) std::cout << " [exact]";
  std::cout << "\n";
  auto convs = convergents(tau, count);
  for (const auto& c : convs) {
    std::cout << "k=" << c.index << "  p=" << c.p.get_str() << "  q=" << c.q.get_str() << "\n";
  }
  Convergent first = first_convergent_with(tau, 6 * big_m);
  std::cout << "first convergent with q > 6M (M=" << big_m.get_str() << "):\n";
  std::cout << "k=" << first.index << "\np=" << first.p.get_str() << "\nq=" << first.q.get_str()
            << "\n";
  return 0;
}

int cmd_bounds(long precision) {
  RealContext ctx = make_context(precision);
  PerrinRoots roots = plastic_root(ctx, RootMode::corrected);
  AbsoluteBoundsChain chain = absolute_bounds_chain(ctx, roots);
  std::printf("log alpha                 = %.15f\n", chain.log_alpha);
  std::printf("growth: n log a - log 10  < %.4g (log n)^3\n", chain.growth_coeff_published);
  std::printf("bootstrap T (published)   = %.6g  -> n < %.6g\n", chain.t_published,
              chain.n_via_published_t);
  std::printf("bootstrap T (derived)     = %.6g  -> n < %.6g\n", chain.t_derived,
              chain.n_via_derived_t);
  std::printf("absolute bounds: n < %.6g, l < %.6g, m < %.6g\n", chain.bounds.n_max,
              chain.bounds.l_max, chain.bounds.m_max);
  std::printf("matveev floor at n_max    = %.6g\n", chain.stage3_matveev_at_nmax);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verified search and reduction pipeline for Perrin numbers that are palindromic "
               "concatenations of two repdigits"};
  app.require_subcommand(1);

  std::string mode_str = "corrected";
  long precision = 1000;
  std::string big_m_str = "2.8e48";
  unsigned jobs = default_jobs();

  auto add_common = [&](CLI::App* cmd, bool with_mode = true) {
    if (with_mode)
      cmd->add_option("--mode", mode_str, "root constant: corrected | paper-replication")
          ->capture_default_str();
    cmd->add_option("--precision", precision, "working precision in decimal digits (>= 50)")
        ->capture_default_str();
    cmd->add_option("--jobs", jobs, "worker threads for combo loops")->capture_default_str();
  };

  // search
  auto* search = app.add_subcommand("search", "exhaustive low-range scan of P_n");
  std::uint64_t n_max = 700;
  bool strict = false;
  search->add_option("--n-max", n_max, "scan indices 3..n_max")->capture_default_str();
  search->add_flag("--strict", strict, "require the literal three-block shape (l, m >= 1)");
  search->add_option("--jobs", jobs, "worker threads")->capture_default_str();

  // prove
  auto* prove = app.add_subcommand("prove", "run the full proof pipeline and emit a certificate");
  std::string out_path = "proof_report.json";
  std::uint64_t threshold = 700;
  bool prove_strict = false;
  add_common(prove);
  prove->add_option("--n-max", threshold, "low-range threshold")->capture_default_str();
  prove->add_option("--big-m", big_m_str, "reduction bound M")->capture_default_str();
  prove->add_option("--out", out_path, "report path")->capture_default_str();
  prove->add_flag("--strict", prove_strict, "use the strict three-block search");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "run one reduction stage and print the combo table");
  std::string stage;
  long l_max = 54, m_max = 57;
  reduce->add_option("stage", stage, "which stage: l, m or n")->required();
  add_common(reduce);
  reduce->add_option("--l-max", l_max, "outer-block bound from the previous stage")
      ->capture_default_str();
  reduce->add_option("--m-max", m_max, "middle-block bound from the previous stage")
      ->capture_default_str();
  reduce->add_option("--big-m", big_m_str, "reduction bound M")->capture_default_str();
  std::string reduce_out;
  reduce->add_option("--out", reduce_out, "optional JSON output path");

  // cf
  auto* cf = app.add_subcommand("cf", "dump partial quotients and convergents of tau");
  long count = 20;
  add_common(cf);
  cf->add_option("--count", count, "how many quotients")->capture_default_str();
  cf->add_option("--big-m", big_m_str, "threshold M for the q > 6M convergent")
      ->capture_default_str();

  // bounds
  auto* bounds = app.add_subcommand("bounds", "print the absolute bound chain");
  bounds->add_option("--precision", precision, "working precision in decimal digits")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (search->parsed()) {
      if (n_max < 2) throw std::invalid_argument("search: --n-max must be >= 2");
      return cmd_search(n_max, strict, jobs);
    }
    if (prove->parsed()) {
      PipelineOptions opt;
      opt.mode = parse_mode(mode_str);
      opt.precision_digits = precision;
      opt.low_range_threshold = threshold;
      opt.strict_search = prove_strict;
      opt.big_m = parse_big_int(big_m_str);
      opt.jobs = jobs;
      (void)make_context(precision);  // validate precision before the long run
      return cmd_prove(opt, out_path);
    }
    if (reduce->parsed()) {
      return cmd_reduce(stage, parse_mode(mode_str), precision, l_max, m_max,
                        parse_big_int(big_m_str), jobs, reduce_out);
    }
    if (cf->parsed()) {
      return cmd_cf(parse_mode(mode_str), precision, count, parse_big_int(big_m_str));
    }
    if (bounds->parsed()) {
      return cmd_bounds(precision);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
