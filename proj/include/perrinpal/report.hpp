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

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "perrinpal/bounds.hpp"
#include "perrinpal/reduction.hpp"
#include "perrinpal/repdigit.hpp"
#include "perrinpal/roots.hpp"

namespace perrinpal {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kReportVersion = 1;
inline constexpr long kEpsilonReportDigits = 30;

/// q of the 51-digit convergent printed in the source of the reduction data;
/// exactly one root mode reproduces it, and reports record which.
inline const char* published_convergent_q() {
  return "362926510191645833704423315164618426146198842188725";
}

struct LowRangeReport {
  std::uint64_t threshold = 0;
  bool strict = false;
  std::vector<SearchHit> hits;
};

struct StageTimings {
  double search_s = 0;
  double bounds_s = 0;
  double stage_l_s = 0;
  double stage_m_s = 0;
  double stage_n_s = 0;
  double total_s = 0;
};

/// The certificate every `prove` run emits: all pipeline stages, the
/// constant mode they ran under, and the verdict. High-precision values are
/// serialized as decimal strings tagged with the certifying precision.
struct ProofReport {
  RootMode mode = RootMode::corrected;
  long precision_digits = 0;
  unsigned jobs = 1;
  LowRangeReport low_range;
  std::optional<AbsoluteBoundsChain> initial_bounds;
  std::optional<StageResult> stage_l_result;
  std::optional<StageResult> stage_m_result;
  std::optional<StageResult> stage_n_result;
  bool published_convergent_reproduced = false;  // this mode hit the reference q
  bool closure = false;
  std::string verdict;
  std::string error;  // empty unless the pipeline aborted
  StageTimings timings;
};

namespace detail {

inline ordered_json json_hp(const HPReal& v, long digits, long certified_digits) {
  ordered_json j;
  j["decimal"] = v.to_decimal(digits);
  j["precision_digits"] = certified_digits;
  return j;
}

inline ordered_json json_combo(const Combo& c) {
  ordered_json j;
  j["d1"] = c.d1;
  j["d2"] = c.d2;
  j["ell"] = c.ell;
  j["m"] = c.m;
  return j;
}

inline ordered_json json_hit(const SearchHit& h) {
  ordered_json j;
  j["n"] = h.index;
  j["value"] = h.value.get_str();
  j["d1"] = h.pattern.d1;
  if (h.pattern.d2) {
    j["d2"] = *h.pattern.d2;
  } else {
    j["d2"] = nullptr;
  }
  j["ell"] = h.pattern.ell;
  j["m"] = h.pattern.m;
  return j;
}

inline ordered_json json_convergent(const Convergent& c) {
  ordered_json j;
  j["index"] = c.index;
  j["p"] = c.p.get_str();
  j["q"] = c.q.get_str();
  return j;
}

inline ordered_json json_outcome(const ComboOutcome& oc) {
  ordered_json j;
  j["combo"] = json_combo(oc.combo);
  if (oc.failed) {
    j["failed"] = oc.error;
    return j;
  }
  j["route"] = oc.homogeneous ? "homogeneous" : "dujella_petho";
  j["ladder_index"] = oc.ladder_index;
  if (!oc.homogeneous) j["epsilon"] = oc.epsilon_dec;
  j["k_bound"] = oc.k_bound;
  if (oc.escalated) j["escalated"] = true;
  return j;
}

inline constexpr std::size_t kPerComboReportCap = 64;

inline ordered_json json_stage(const StageResult& s) {
  ordered_json j;
  j["stage"] = to_string(s.stage);
  j["mode"] = to_string(s.mode);
  j["precision_digits"] = s.precision_digits;
  j["big_m"] = s.big_m.get_str();
  j["aggregate_bound"] = s.aggregate_bound;
  if (s.min_epsilon) {
    j["min_epsilon"] = json_hp(*s.min_epsilon, kEpsilonReportDigits, s.precision_digits);
    j["argmin_combo"] = json_combo(s.argmin_combo);
  }
  if (s.max_epsilon) {
    j["max_epsilon"] = json_hp(*s.max_epsilon, kEpsilonReportDigits, s.precision_digits);
    j["argmax_combo"] = json_combo(s.argmax_combo);
  }
  j["arg_bound_combo"] = json_combo(s.arg_bound_combo);
  j["combos_total"] = s.combos_total;
  j["combos_homogeneous"] = s.combos_homogeneous;
  j["combos_advanced"] = s.combos_advanced;
  j["combos_failed"] = s.combos_failed;
  j["escalations"] = s.escalations;
  ordered_json ladder = ordered_json::array();
  for (const auto& c : s.ladder) ladder.push_back(json_convergent(c));
  j["ladder"] = ladder;
  ordered_json rows = ordered_json::array();
  std::size_t cap = std::min(kPerComboReportCap, s.per_combo.size());
  for (std::size_t i = 0; i < cap; ++i) rows.push_back(json_outcome(s.per_combo[i]));
  j["per_combo"] = rows;
  j["per_combo_truncated"] = s.per_combo.size() > kPerComboReportCap;
  return j;
}

inline ordered_json json_chain(const AbsoluteBoundsChain& c) {
  ordered_json j;
  j["arithmetic"] = "ieee_double";
  j["log_alpha"] = c.log_alpha;
  j["growth_coeff"] = c.growth_coeff_published;
  j["t_published"] = c.t_published;
  j["t_derived"] = c.t_derived;
  j["n_via_published_t"] = c.n_via_published_t;
  j["n_via_derived_t"] = c.n_via_derived_t;
  j["n_max"] = c.bounds.n_max;
  j["l_max"] = c.bounds.l_max;
  j["m_max"] = c.bounds.m_max;
  return j;
}

}  // namespace detail

inline ordered_json to_json(const ProofReport& r, bool include_timings = true) {
  ordered_json j;
  j["report_version"] = kReportVersion;
  j["mode"] = to_string(r.mode);
  j["precision_digits"] = r.precision_digits;
  j["jobs"] = r.jobs;

  ordered_json low;
  low["threshold"] = r.low_range.threshold;
  low["strict"] = r.low_range.strict;
  ordered_json hits = ordered_json::array();
  for (const auto& h : r.low_range.hits) hits.push_back(detail::json_hit(h));
  low["hits"] = hits;
  j["low_range"] = low;

  j["initial_bounds"] = r.initial_bounds ? detail::json_chain(*r.initial_bounds) : ordered_json();
  j["stage_l"] = r.stage_l_result ? detail::json_stage(*r.stage_l_result) : ordered_json();
  j["stage_m"] = r.stage_m_result ? detail::json_stage(*r.stage_m_result) : ordered_json();
  j["stage_n"] = r.stage_n_result ? detail::json_stage(*r.stage_n_result) : ordered_json();
  j["published_convergent_reproduced"] = r.published_convergent_reproduced;
  j["closure"] = r.closure;
  j["verdict"] = r.verdict;
  j["error"] = r.error;
  if (include_timings) {
    ordered_json t;
    t["search_s"] = r.timings.search_s;
    t["bounds_s"] = r.timings.bounds_s;
    t["stage_l_s"] = r.timings.stage_l_s;
    t["stage_m_s"] = r.timings.stage_m_s;
    t["stage_n_s"] = r.timings.stage_n_s;
    t["total_s"] = r.timings.total_s;
    j["timings"] = t;
  }
  return j;
}

/// Human-readable rendering of the same certificate.
inline std::string render_text(const ProofReport& r) {
  std::string out;
  auto line = [&out](const std::string& s) {
    out += s;
    out += '\n';
  };
  line("mode:       " + to_string(r.mode));
  line("precision:  " + std::to_string(r.precision_digits) + " digits");
  line("low range:  n <= " + std::to_string(r.low_range.threshold) +
       (r.low_range.strict ? " (strict three-block)" : ""));
  for (const auto& h : r.low_range.hits) {
    std::string pat = "d1=" + std::to_string(h.pattern.d1);
    pat += h.pattern.d2 ? ", d2=" + std::to_string(*h.pattern.d2) : ", d2=-";
    pat += ", ell=" + std::to_string(h.pattern.ell) + ", m=" + std::to_string(h.pattern.m);
    line("  hit: P_" + std::to_string(h.index) + " = " + h.value.get_str() + "  (" + pat + ")");
  }
  if (r.low_range.hits.empty()) line("  (no hits)");
  if (r.initial_bounds) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "initial:    n < %.4g, l < %.4g, m < %.4g",
                  r.initial_bounds->bounds.n_max, r.initial_bounds->bounds.l_max,
                  r.initial_bounds->bounds.m_max);
    line(buf);
  }
  auto stage_line = [&](const char* name, const std::optional<StageResult>& s) {
    if (!s) {
      line(std::string(name) + ":    (not run)");
      return;
    }
    std::string msg = std::string(name) + ":    bound " + std::to_string(s->aggregate_bound);
    if (s->min_epsilon) msg += ", min eps " + s->min_epsilon->to_decimal(12);
    if (s->max_epsilon) msg += ", max eps " + s->max_epsilon->to_decimal(12);
    msg += ", combos " + std::to_string(s->combos_total);
    line(msg);
  };
  stage_line("stage l", r.stage_l_result);
  stage_line("stage m", r.stage_m_result);
  stage_line("stage n", r.stage_n_result);
  line(std::string("closure:    ") + (r.closure ? "true" : "false"));
  line("verdict:    " + r.verdict);
  if (!r.error.empty()) line("error:      " + r.error);
  return out;
}

}  // namespace perrinpal
