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

#pragma once

#include <gmpxx.h>

#include <atomic>
#include <cmath>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "perrinpal/contfrac.hpp"
#include "perrinpal/hpreal.hpp"
#include "perrinpal/repdigit.hpp"
#include "perrinpal/roots.hpp"

namespace perrinpal {

/// M = 2.8e48, the bound the reduction runs against in every stage.
inline mpz_class default_big_m() {
  mpz_class m = 28;
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, 47);
  return m * p;
}

/// One application of the convergent reduction: find q > 6M with
/// eps = ||mu q|| - M ||tau q|| > 0, certify it, and turn it into a bound.
struct ReductionInstance {
  Ival tau;
  Ival mu;
  Ival A;  // > 0
  Ival B;  // > 1
  mpz_class M;
  std::string label;
};

struct ReductionOutcome {
  Convergent convergent;
  HPReal epsilon;     // midpoint of the certified enclosure
  Ival epsilon_enc;
  long k_bound;       // floor(log(A q / eps) / log B)
  // contract: no solution of 0 < |k' tau - n + mu| < A B^(-k) with
  // k >= k_bound + 1 and k' < M
};

namespace detail {

inline constexpr int kAttemptCap = 50;

inline long to_long(const mpz_class& z, const char* where) {
  if (!z.fits_slong_p()) throw std::overflow_error(std::string(where) + ": bound does not fit a long");
  return z.get_si();
}

inline long certified_floor(const Ival& v, const char* where) {
  auto f = v.floor_unique();
  if (!f) throw precision_error(std::string(where) + ": floor unresolved at this precision");
  return to_long(*f, where);
}

}  // namespace detail

/// Generic Dujella-Petho step. Walks the certified convergents of tau past
/// q > 6M and returns the first with a certified eps > 0. An exhausted
/// attempt cap or an unresolvable sign means the caller has to escalate the
/// context (stage drivers do that automatically) or reconsider M.
inline ReductionOutcome bd_reduce(const ReductionInstance& inst, const RealContext& ctx) {
  (void)ctx;
  if (!inst.A.strictly_positive()) throw std::invalid_argument("bd_reduce: A > 0 required");
  if (!(inst.B.lo() > HPReal::of_long(1, 8))) throw std::invalid_argument("bd_reduce: B > 1 required");
  if (inst.M <= 1) throw std::invalid_argument("bd_reduce: integer M > 1 required");
  if (inst.tau.lo().sign() <= 0) {
    throw std::invalid_argument("bd_reduce: this pipeline only reduces against tau > 0");
  }

  const mpz_class six_m = 6 * inst.M;
  Ival log_b = ln_iv(inst.B);
  ConvergentStream stream(inst.tau);
  int attempts = 0;
  while (auto c = stream.next()) {
    if (c->q <= six_m) continue;
    if (++attempts > detail::kAttemptCap) break;
    Ival dist_tau = mul_z(inst.tau, c->q).nearest_dist();
    Ival dist_mu = mul_z(inst.mu, c->q).nearest_dist();
    Ival eps = sub(dist_mu, mul_z(dist_tau, inst.M));
    if (eps.nonpositive()) continue;
    if (eps.contains_zero()) {
      throw precision_error("bd_reduce: sign of epsilon unresolved; escalate the context");
    }
    Ival k_raw = div(ln_iv(div(mul_z(inst.A, c->q), eps)), log_b);
    long k = detail::certified_floor(k_raw, "bd_reduce");
    return ReductionOutcome{std::move(*c), eps.mid(), eps, k};
  }
  if (attempts > detail::kAttemptCap) {
    throw precision_error(
        "bd_reduce: no positive epsilon within the attempt cap; raise precision or revisit M (" +
        inst.label + ")");
  }
  throw precision_error("bd_reduce: certified convergents exhausted before a usable one (" +
                        inst.label + ")");
}

// ---------------------------------------------------------------------------
// Stage drivers: the three concrete reductions, with the per-stage mu grids,
// shared-convergent caching and the degenerate-combo route.
// ---------------------------------------------------------------------------

enum class StageKind { l_stage, m_stage, n_stage };

inline std::string to_string(StageKind s) {
  switch (s) {
    case StageKind::l_stage: return "l";
    case StageKind::m_stage: return "m";
    case StageKind::n_stage: return "n";
  }
  return "?";
}

/// A digit/length combination; fields not meaningful for a stage stay -1.
struct Combo {
  int d1 = -1;
  int d2 = -1;
  long ell = -1;
  long m = -1;
};

struct ComboOutcome {
  Combo combo;
  long ladder_index = 0;   // which shared convergent produced the bound
  bool homogeneous = false;  // mu == j tau exactly; Legendre route, no epsilon
  bool escalated = false;    // needed the doubled context to certify
  bool failed = false;       // uncertifiable even after escalation
  std::string error;         // failure reason when failed
  double epsilon_approx = 0; // NaN for homogeneous rows
  std::string epsilon_dec;   // 20 significant digits; empty for homogeneous rows
  long k_bound = 0;
};

struct StageResult {
  StageKind stage = StageKind::l_stage;
  RootMode mode = RootMode::corrected;
  long precision_digits = 0;
  mpz_class big_m;
  std::vector<ComboOutcome> per_combo;
  long aggregate_bound = 0;  // max k_bound over all combos
  Combo arg_bound_combo;     // combo achieving the aggregate
  std::optional<HPReal> min_epsilon, max_epsilon;  // over Dujella-Petho rows
  Combo argmin_combo, argmax_combo;
  std::vector<Convergent> ladder;  // shared convergents, by ladder index
  long combos_total = 0;
  long combos_homogeneous = 0;
  long combos_advanced = 0;  // needed a convergent beyond the first
  long combos_failed = 0;    // a nonzero count invalidates aggregate_bound
  long escalations = 0;
};

namespace detail {

/// mu arguments are exact rationals X/9; mu degenerates to an integer
/// multiple of tau exactly when X/9 is a power of ten (the all-nines
/// patterns and log(1) = 0), and then no convergent can ever certify
/// eps > 0 because ||mu q|| <= j ||tau q|| <= M ||tau q||.
inline bool is_power_of_ten(const mpq_class& v) {
  auto pow10_check = [](const mpz_class& z) {
    mpz_class w = z;
    while (mpz_divisible_ui_p(w.get_mpz_t(), 10)) mpz_divexact_ui(w.get_mpz_t(), w.get_mpz_t(), 10);
    return w == 1;
  };
  if (v.get_den() == 1) return pow10_check(v.get_num());
  if (v.get_num() == 1) return pow10_check(v.get_den());
  return false;
}

struct LadderEntry {
  Convergent conv;
  Ival dist_tau_q;
  Ival m_dist;  // M * ||tau q||
};

/// Everything shared across the combos of one stage run: the root, tau, and
/// the ladder of convergents past 6M with their cached distances. Ladder
/// growth is the only synchronized operation.
class StageWorkspace {
 public:
  StageWorkspace(const RealContext& ctx, const PerrinRoots& roots, mpz_class big_m)
      : ctx_(ctx),
        roots_(roots),
        big_m_(std::move(big_m)),
        log_alpha_(ln_iv(roots.alpha_enc)),
        ln_ten_(ln_iv(Ival::of_long(10, ctx.precision_bits()))),
        tau_(div(ln_ten_, log_alpha_)),
        stream_(tau_) {
    if (big_m_ <= 1) throw std::invalid_argument("stage: integer M > 1 required");
    const mpz_class six_m = 6 * big_m_;
    for (;;) {
      auto c = stream_.next();
      if (!c) {
        throw precision_error("stage: certified convergents exhausted before q > 6M");
      }
      if (c->q > six_m) {
        push(std::move(*c));
        break;
      }
    }
  }

  const RealContext& ctx() const { return ctx_; }
  const PerrinRoots& roots() const { return roots_; }
  const mpz_class& big_m() const { return big_m_; }
  const Ival& log_alpha() const { return log_alpha_; }
  const Ival& ln_ten() const { return ln_ten_; }
  const Ival& tau() const { return tau_; }

  const LadderEntry& entry(std::size_t i) {
    std::lock_guard<std::mutex> g(mu_);
    while (entries_.size() <= i) {
      auto c = stream_.next();
      if (!c) throw precision_error("stage: convergent ladder exhausted; escalate the context");
      push(std::move(*c));
    }
    return entries_[i];
  }

  std::vector<Convergent> ladder_prefix(std::size_t count) {
    std::lock_guard<std::mutex> g(mu_);
    std::vector<Convergent> out;
    for (std::size_t i = 0; i < count && i < entries_.size(); ++i) out.push_back(entries_[i].conv);
    return out;
  }

 private:
  void push(Convergent c) {
    Ival dt = mul_z(tau_, c.q).nearest_dist();
    Ival md = mul_z(dt, big_m_);
    entries_.push_back(LadderEntry{std::move(c), std::move(dt), std::move(md)});
  }

  RealContext ctx_;
  PerrinRoots roots_;
  mpz_class big_m_;
  Ival log_alpha_, ln_ten_, tau_;
  ConvergentStream stream_;
  std::deque<LadderEntry> entries_;
  std::mutex mu_;
};

struct ComboEval {
  ComboOutcome outcome;
  std::optional<HPReal> epsilon;  // exact midpoint for aggregation
};

/// One combo against one workspace. Throws precision_error when the
/// workspace's context cannot certify a decision.
inline ComboEval eval_combo(StageWorkspace& ws, const Combo& combo, const mpz_class& mu_num,
                            const Ival& A, const Ival& log_b) {
  mpq_class arg(mu_num, 9);
  arg.canonicalize();
  if (sgn(arg) <= 0) throw std::invalid_argument("stage: mu argument must be positive");

  ComboEval ev;
  ev.outcome.combo = combo;

  if (is_power_of_ten(arg)) {
    // mu = j tau: the form collapses to |K tau - n| with K < q_0, so
    // ||K tau|| >= ||q_0 tau|| and the convergent itself bounds k.
    const LadderEntry& e0 = ws.entry(0);
    Ival k_raw = div(ln_iv(div(A, e0.dist_tau_q)), log_b);
    ev.outcome.homogeneous = true;
    ev.outcome.ladder_index = 0;
    ev.outcome.epsilon_approx = std::nan("");
    ev.outcome.k_bound = certified_floor(k_raw, "stage homogeneous");
    return ev;
  }

  Ival mu = div(ln_iv(Ival::of_rational(arg, ws.ctx().precision_bits())), ws.log_alpha());
  for (int i = 0; i < kAttemptCap; ++i) {
    const LadderEntry& e = ws.entry(static_cast<std::size_t>(i));
    Ival dist_mu = mul_z(mu, e.conv.q).nearest_dist();
    Ival eps = sub(dist_mu, e.m_dist);
    if (eps.nonpositive()) continue;
    if (eps.contains_zero()) {
      throw precision_error("stage: sign of epsilon unresolved; escalate the context");
    }
    Ival k_raw = div(ln_iv(div(mul_z(A, e.conv.q), eps)), log_b);
    HPReal mid = eps.mid();
    ev.outcome.ladder_index = i;
    ev.outcome.epsilon_approx = mid.to_double();
    ev.outcome.epsilon_dec = mid.to_decimal(20);
    ev.outcome.k_bound = certified_floor(k_raw, "stage");
    ev.epsilon = std::move(mid);
    return ev;
  }
  throw precision_error("stage: no positive epsilon within the attempt cap");
}

/// The per-stage data: how a combo turns into a mu argument, and the A/B
/// constants of the corresponding linear-form inequality.
struct StageRecipe {
  StageKind kind;
  std::vector<Combo> combos;
  mpz_class (*mu_num)(const Combo&);
  Ival (*make_a)(StageWorkspace&);
  const Ival& (*log_b)(StageWorkspace&);
};

/// Partial aggregates over one block of combos. Blocks are merged in block
/// order afterwards, so the result is identical for any worker count.
struct BlockAgg {
  bool has_bound = false;
  long agg_k = 0;
  Combo arg_k;
  std::optional<HPReal> min_e, max_e;
  Combo argmin, argmax;
  long homogeneous = 0, advanced = 0, failed = 0, escalations = 0;
  std::size_t max_ladder = 0;
};

inline constexpr std::size_t kBlockSize = 64;

inline StageResult run_stage(const StageRecipe& recipe, const RealContext& ctx,
                             const PerrinRoots& roots, const mpz_class& big_m, unsigned jobs) {
  StageWorkspace ws(ctx, roots, big_m);
  Ival a_const = recipe.make_a(ws);
  const Ival& log_b = recipe.log_b(ws);

  // Escalated resources, built once on first demand.
  std::mutex esc_mu;
  std::unique_ptr<StageWorkspace> esc_ws;
  std::optional<Ival> esc_a;
  auto escalated = [&]() -> StageWorkspace& {
    std::lock_guard<std::mutex> g(esc_mu);
    if (!esc_ws) {
      RealContext ctx2 = ctx.doubled();
      PerrinRoots roots2 = plastic_root(ctx2, roots.mode);
      esc_ws = std::make_unique<StageWorkspace>(ctx2, roots2, big_m);
      esc_a = recipe.make_a(*esc_ws);
    }
    return *esc_ws;
  };

  const std::size_t total = recipe.combos.size();
  const std::size_t nblocks = (total + kBlockSize - 1) / kBlockSize;
  std::vector<ComboOutcome> rows(total);
  std::vector<BlockAgg> blocks(nblocks);

  auto eval_at = [&](std::size_t i, BlockAgg& agg) {
    const Combo& combo = recipe.combos[i];
    mpz_class num = recipe.mu_num(combo);
    ComboEval ev;
    try {
      ev = eval_combo(ws, combo, num, a_const, log_b);
    } catch (const precision_error&) {
      try {
        StageWorkspace& ws2 = escalated();
        ev = eval_combo(ws2, combo, num, *esc_a, recipe.log_b(ws2));
        ev.outcome.escalated = true;
      } catch (const precision_error& e2) {
        ev.outcome.combo = combo;
        ev.outcome.failed = true;
        ev.outcome.error = e2.what();
      }
    }
    const ComboOutcome& oc = ev.outcome;
    if (oc.failed) {
      ++agg.failed;
    } else {
      if (!agg.has_bound || oc.k_bound > agg.agg_k) {
        agg.agg_k = oc.k_bound;
        agg.arg_k = oc.combo;
        agg.has_bound = true;
      }
      if (oc.homogeneous) {
        ++agg.homogeneous;
      } else {
        if (!agg.min_e || *ev.epsilon < *agg.min_e) {
          agg.min_e = *ev.epsilon;
          agg.argmin = oc.combo;
        }
        if (!agg.max_e || *ev.epsilon > *agg.max_e) {
          agg.max_e = *ev.epsilon;
          agg.argmax = oc.combo;
        }
        if (oc.ladder_index > 0) ++agg.advanced;
      }
      if (oc.escalated) ++agg.escalations;
      agg.max_ladder = std::max(agg.max_ladder, static_cast<std::size_t>(oc.ladder_index));
    }
    rows[i] = std::move(ev.outcome);
  };

  auto eval_block = [&](std::size_t b) {
    std::size_t begin = b * kBlockSize;
    std::size_t end = std::min(total, begin + kBlockSize);
    for (std::size_t i = begin; i < end; ++i) eval_at(i, blocks[b]);
  };

  jobs = std::max(1u, jobs);
  if (jobs == 1 || nblocks < 2) {
    for (std::size_t b = 0; b < nblocks; ++b) eval_block(b);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> cursor{0};
    unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(jobs, nblocks));
    for (unsigned t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t b = cursor.fetch_add(1);
          if (b >= nblocks) return;
          eval_block(b);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  StageResult res;
  res.stage = recipe.kind;
  res.mode = roots.mode;
  res.precision_digits = ctx.precision_digits();
  res.big_m = big_m;
  res.combos_total = static_cast<long>(total);
  std::size_t max_ladder = 0;
  bool first_bound = true;
  for (const BlockAgg& agg : blocks) {
    if (agg.has_bound && (first_bound || agg.agg_k > res.aggregate_bound)) {
      res.aggregate_bound = agg.agg_k;
      res.arg_bound_combo = agg.arg_k;
      first_bound = false;
    }
    if (agg.min_e && (!res.min_epsilon || *agg.min_e < *res.min_epsilon)) {
      res.min_epsilon = agg.min_e;
      res.argmin_combo = agg.argmin;
    }
    if (agg.max_e && (!res.max_epsilon || *agg.max_e > *res.max_epsilon)) {
      res.max_epsilon = agg.max_e;
      res.argmax_combo = agg.argmax;
    }
    res.combos_homogeneous += agg.homogeneous;
    res.combos_advanced += agg.advanced;
    res.combos_failed += agg.failed;
    res.escalations += agg.escalations;
    max_ladder = std::max(max_ladder, agg.max_ladder);
  }
  res.per_combo = std::move(rows);
  res.ladder = ws.ladder_prefix(max_ladder + 1);
  return res;
}

inline const Ival& log_b_ten(StageWorkspace& ws) { return ws.ln_ten(); }
inline const Ival& log_b_alpha(StageWorkspace& ws) { return ws.log_alpha(); }

}  // namespace detail

/// Stage 1: mu(d1) = log(d1/9)/log(alpha), A = 42/log(alpha), B = 10,
/// bounding the outer block length. The inequality behind it assumes l >= 2
/// (so the linearization |log(1+G)| < 1.5|G| applies); l < 2 is absorbed by
/// the aggregate, which always comes out far larger.
inline StageResult stage_l(const RealContext& ctx, const PerrinRoots& roots, const mpz_class& big_m,
                           unsigned jobs = 1) {
  detail::StageRecipe r;
  r.kind = StageKind::l_stage;
  for (int d1 = 1; d1 <= 9; ++d1) r.combos.push_back(Combo{d1, -1, -1, -1});
  r.mu_num = [](const Combo& c) { return mpz_class(c.d1); };
  r.make_a = [](detail::StageWorkspace& ws) {
    return div(Ival::of_long(42, ws.ctx().precision_bits()), ws.log_alpha());
  };
  r.log_b = detail::log_b_ten;
  return detail::run_stage(r, ctx, roots, big_m, jobs);
}

/// Stage 2: mu(d1,d2,l) = log((d1 10^l - (d1-d2))/9)/log(alpha),
/// A = 30/log(alpha), B = 10, over l = 1..l_max, bounding the middle block.
inline StageResult stage_m(const RealContext& ctx, const PerrinRoots& roots, const mpz_class& big_m,
                           long l_max, unsigned jobs = 1) {
  if (l_max < 1) throw std::invalid_argument("stage_m: l_max >= 1 required");
  detail::StageRecipe r;
  r.kind = StageKind::m_stage;
  for (int d1 = 1; d1 <= 9; ++d1)
    for (int d2 = 0; d2 <= 9; ++d2)
      for (long l = 1; l <= l_max; ++l) r.combos.push_back(Combo{d1, d2, l, -1});
  r.mu_num = [](const Combo& c) {
    return mpz_class(c.d1 * pow10_z(c.ell) - (c.d1 - c.d2));
  };
  r.make_a = [](detail::StageWorkspace& ws) {
    return div(Ival::of_long(30, ws.ctx().precision_bits()), ws.log_alpha());
  };
  r.log_b = detail::log_b_ten;
  return detail::run_stage(r, ctx, roots, big_m, jobs);
}

/// Stage 3: mu(d1,d2,l,m) = log((d1 10^(l+m) - (d1-d2) 10^m + (d1-d2))/9) /
/// log(alpha), A = 20/(9 log(alpha)), B = alpha, bounding the index n
/// itself. Closure of the proof means this aggregate lands at or below the
/// exhaustively searched range.
inline StageResult stage_n(const RealContext& ctx, const PerrinRoots& roots, const mpz_class& big_m,
                           long l_max, long m_max, unsigned jobs = 1) {
  if (l_max < 1 || m_max < 1) throw std::invalid_argument("stage_n: l_max, m_max >= 1 required");
  detail::StageRecipe r;
  r.kind = StageKind::n_stage;
  for (int d1 = 1; d1 <= 9; ++d1)
    for (int d2 = 0; d2 <= 9; ++d2)
      for (long l = 1; l <= l_max; ++l)
        for (long m = 1; m <= m_max; ++m) r.combos.push_back(Combo{d1, d2, l, m});
  r.mu_num = [](const Combo& c) {
    mpz_class diff = c.d1 - c.d2;
    return mpz_class(c.d1 * pow10_z(c.ell + c.m) - diff * pow10_z(c.m) + diff);
  };
  r.make_a = [](detail::StageWorkspace& ws) {
    return div(Ival::of_long(20, ws.ctx().precision_bits()), mul_z(ws.log_alpha(), mpz_class(9)));
  };
  r.log_b = detail::log_b_alpha;
  return detail::run_stage(r, ctx, roots, big_m, jobs);
}

}  // namespace perrinpal
