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

#include <chrono>
#include <string>

#include "perrinpal/report.hpp"
#include "perrinpal/sequence.hpp"

namespace perrinpal {

struct PipelineOptions {
  RootMode mode = RootMode::corrected;
  long precision_digits = 1000;
  std::uint64_t low_range_threshold = 700;
  bool strict_search = false;
  mpz_class big_m = default_big_m();
  unsigned jobs = 1;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Whether the low-range hits are exactly the theorem's solution set {P_11 = 22}.
inline bool hits_are_exactly_22(const std::vector<SearchHit>& hits) {
  return hits.size() == 1 && hits[0].index == 11 && hits[0].value == 22;
}

/// The full proof pipeline: exhaustive low-range search, absolute bound
/// chain, then the three reduction stages feeding each other's bounds.
/// Throws nothing; failures land in report.error with the partial report
/// intact.
inline ProofReport run_pipeline(const PipelineOptions& opt) {
  ProofReport rep;
  rep.mode = opt.mode;
  rep.precision_digits = opt.precision_digits;
  rep.jobs = opt.jobs;
  auto t_start = std::chrono::steady_clock::now();

  try {
    RealContext ctx = make_context(opt.precision_digits);

    auto t0 = std::chrono::steady_clock::now();
    rep.low_range.threshold = opt.low_range_threshold;
    rep.low_range.strict = opt.strict_search;
    rep.low_range.hits = search_low_range(opt.low_range_threshold, opt.strict_search, opt.jobs);
    rep.timings.search_s = detail::seconds_since(t0);

    // The absolute bounds justify M; they are a statement about the true
    // root, so they always run in corrected mode.
    t0 = std::chrono::steady_clock::now();
    PerrinRoots corrected = plastic_root(ctx, RootMode::corrected);
    rep.initial_bounds = absolute_bounds_chain(ctx, corrected);
    rep.timings.bounds_s = detail::seconds_since(t0);
    if (static_cast<double>(opt.big_m.get_d()) < rep.initial_bounds->bounds.n_max) {
      throw std::invalid_argument("pipeline: M must be at least the absolute bound on n");
    }

    PerrinRoots roots =
        opt.mode == RootMode::corrected ? corrected : plastic_root(ctx, opt.mode);

    auto require_clean = [](const StageResult& s) {
      if (s.combos_failed > 0) {
        throw precision_error("stage " + to_string(s.stage) + ": " +
                              std::to_string(s.combos_failed) +
                              " combos could not be certified; the bound is not trustworthy");
      }
      return s.aggregate_bound;
    };

    t0 = std::chrono::steady_clock::now();
    rep.stage_l_result = stage_l(ctx, roots, opt.big_m, opt.jobs);
    rep.timings.stage_l_s = detail::seconds_since(t0);
    long l_max = require_clean(*rep.stage_l_result);
    rep.published_convergent_reproduced =
        !rep.stage_l_result->ladder.empty() &&
        rep.stage_l_result->ladder[0].q.get_str() == published_convergent_q();

    t0 = std::chrono::steady_clock::now();
    rep.stage_m_result = stage_m(ctx, roots, opt.big_m, l_max, opt.jobs);
    rep.timings.stage_m_s = detail::seconds_since(t0);
    long m_max = require_clean(*rep.stage_m_result);

    t0 = std::chrono::steady_clock::now();
    rep.stage_n_result = stage_n(ctx, roots, opt.big_m, l_max, m_max, opt.jobs);
    rep.timings.stage_n_s = detail::seconds_since(t0);
    require_clean(*rep.stage_n_result);

    rep.closure = rep.stage_n_result->aggregate_bound >= 0 &&
                  static_cast<std::uint64_t>(rep.stage_n_result->aggregate_bound) <=
                      opt.low_range_threshold;

    if (rep.closure && hits_are_exactly_22(rep.low_range.hits)) {
      rep.verdict =
          "verified: 22 = P_11 is the only Perrin number of the three-block palindromic "
          "repdigit form (reduced bound n <= " +
          std::to_string(rep.stage_n_result->aggregate_bound) + ", searched range n <= " +
          std::to_string(opt.low_range_threshold) + ")";
    } else if (!rep.closure) {
      rep.verdict = "not closed: the reduced bound on n (" +
                    std::to_string(rep.stage_n_result->aggregate_bound) +
                    ") does not fall inside the searched range (" +
                    std::to_string(opt.low_range_threshold) + ")";
    } else {
      rep.verdict = "not affirmed: the low-range hit set is not exactly {P_11 = 22}";
    }
  } catch (const std::exception& e) {
    rep.error = e.what();
    rep.verdict = "aborted: " + rep.error;
  }
  rep.timings.total_s = detail::seconds_since(t_start);
  return rep;
}

}  // namespace perrinpal
