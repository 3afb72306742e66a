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

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "perrinpal/hpreal.hpp"
#include "perrinpal/roots.hpp"

namespace perrinpal {

// The published bound chain, kept as named quantities so any drift from the
// derivation is caught loudly rather than silently absorbed.
namespace chain {
inline constexpr double kLemmaLCoeff = 4.1e13;   // l <  kLemmaLCoeff * log n
inline constexpr double kLemmaMCoeff = 1.6e27;   // m <  kLemmaMCoeff * (log n)^2
inline constexpr double kStage1Matveev = 9.3e13; // log|G|  > -kStage1Matveev * log n
inline constexpr double kStage2Height = 1.9e14;  // h(l1)   <  kStage2Height * log n
inline constexpr double kStage2Matveev = 3.5e27; // log|G1| > -kStage2Matveev * (log n)^2
inline constexpr double kStage3Height = 6.0e27;  // h(l1)   <  kStage3Height * (log n)^2
inline constexpr double kStage3Growth = 1.1e41;  // n log a - log 10 < kStage3Growth * (log n)^3
inline constexpr double kGuzmanT = 3.9e41;       // T fed to the analytic bootstrap
inline constexpr double kNMaxCeiling = 2.8e48;
inline constexpr double kLMaxCeiling = 4.6e15;
inline constexpr double kMMaxCeiling = 2.0e31;
}  // namespace chain

/// Plastic constant and its natural log at double precision, for the bound
/// chain (two significant digits of headroom everywhere makes doubles ample).
inline double plastic_root_d() {
  double x = 1.3247;
  for (int i = 0; i < 50; ++i) x -= (x * x * x - x - 1.0) / (3.0 * x * x - 1.0);
  return x;
}

inline double log_alpha_d() { return std::log(plastic_root_d()); }

struct MatveevParams {
  int t = 0;                // number of logarithms
  int D = 0;                // field degree
  double B = 0;             // bound on the coefficient magnitudes
  std::vector<double> A;    // per-logarithm height bounds, each >= 0.16
};

/// -1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D)(1 + log B) A_1 ... A_t,
/// a lower bound on log|Gamma| for nonzero Gamma meeting the hypotheses.
/// The height side of each A_i >= max{D h, |log|, 0.16} is caller-certified.
inline double matveev_lower_bound(const MatveevParams& p) {
  if (p.t < 1 || p.D < 1 || p.B < 1) throw std::invalid_argument("matveev_lower_bound: t, D >= 1 and B >= 1 required");
  if (static_cast<int>(p.A.size()) != p.t) throw std::invalid_argument("matveev_lower_bound: need exactly t values A_i");
  double prod = 1.0;
  for (double a : p.A) {
    if (a < 0.16) throw std::invalid_argument("matveev_lower_bound: every A_i must be >= 0.16");
    prod *= a;
  }
  double d = p.D;
  return -1.4 * std::pow(30.0, p.t + 3) * std::pow(static_cast<double>(p.t), 4.5) * d * d *
         (1.0 + std::log(d)) * (1.0 + std::log(p.B)) * prod;
}

/// h(p/q) = log max(|p|, q) for a reduced fraction.
inline double log_height_rational(const mpz_class& p, const mpz_class& q) {
  if (sgn(q) < 1) throw std::invalid_argument("log_height_rational: q must be positive");
  mpz_class g, ap = abs(p);
  mpz_gcd(g.get_mpz_t(), ap.get_mpz_t(), q.get_mpz_t());
  if (g != 1) throw std::invalid_argument("log_height_rational: fraction not in lowest terms");
  const mpz_class& m = ap > q ? ap : q;
  // exact log of a big integer via a 64-bit float pass
  HPReal h = HPReal::of_mpz(m, 64);
  return ln(h).to_double();
}

enum class HeightOp { sum, product, power };

/// The standard height-calculus upper bounds:
///   sum     -> h1 + h2 + log 2
///   product -> h1 + h2
///   power   -> |s| * h1   (second argument is the integer exponent)
inline double height_combine(HeightOp op, double h1, double h2_or_s) {
  switch (op) {
    case HeightOp::sum:
      if (h1 < 0 || h2_or_s < 0) throw std::invalid_argument("height_combine: negative height");
      return h1 + h2_or_s + std::log(2.0);
    case HeightOp::product:
      if (h1 < 0 || h2_or_s < 0) throw std::invalid_argument("height_combine: negative height");
      return h1 + h2_or_s;
    case HeightOp::power:
      if (h1 < 0) throw std::invalid_argument("height_combine: negative height");
      return std::abs(h2_or_s) * h1;
  }
  throw std::logic_error("height_combine: unreachable");
}

namespace detail {

inline void require_beyond_low_range(double n, const char* op) {
  if (!(n > 700)) throw std::invalid_argument(std::string(op) + ": defined only for n > 700");
}

}  // namespace detail

/// Lemma bound l < 4.1e13 log n, with the derivation chain re-checked at n:
/// the Matveev evaluation for (9/d1) alpha^n 10^(-2l-m) stays above
/// -9.3e13 log n, and the bound that implies on l stays below the returned
/// closed form.
inline double lemma_l_bound(double n) {
  detail::require_beyond_low_range(n, "lemma_l_bound");
  const double logn = std::log(n);
  const double la = log_alpha_d();
  MatveevParams p{3, 3, n, {15.0, la, 3.0 * std::log(10.0)}};
  const double matveev = matveev_lower_bound(p);
  if (!(matveev >= -chain::kStage1Matveev * logn)) {
    throw std::logic_error("lemma_l_bound: Matveev step fell below the published ceiling");
  }
  // |Gamma| < 28 * 10^-l  together with the Matveev floor
  const double implied = (chain::kStage1Matveev * logn + std::log(28.0)) / std::log(10.0);
  const double bound = chain::kLemmaLCoeff * logn;
  if (!(implied <= bound)) {
    throw std::logic_error("lemma_l_bound: derivation chain exceeds the closed form");
  }
  return bound;
}

/// Lemma bound m < 1.6e27 (log n)^2, chain-checked the same way via the
/// height bound h(9/(d1 10^l - (d1-d2))) < 1.9e14 log n.
inline double lemma_m_bound(double n) {
  detail::require_beyond_low_range(n, "lemma_m_bound");
  const double logn = std::log(n);
  const double la = log_alpha_d();
  const double h_lambda1 = 8.0 * std::log(9.0) + 4.0 * std::log(2.0) +
                           2.0 * (chain::kLemmaLCoeff * logn) * std::log(10.0);
  if (!(h_lambda1 < chain::kStage2Height * logn)) {
    throw std::logic_error("lemma_m_bound: height bound exceeds the published ceiling");
  }
  MatveevParams p{3, 3, n, {3.0 * chain::kStage2Height * logn, la, 3.0 * std::log(10.0)}};
  const double matveev = matveev_lower_bound(p);
  if (!(matveev >= -chain::kStage2Matveev * logn * logn)) {
    throw std::logic_error("lemma_m_bound: Matveev step fell below the published ceiling");
  }
  const double implied = (chain::kStage2Matveev * logn * logn + std::log(19.0)) / std::log(10.0);
  const double bound = chain::kLemmaMCoeff * logn * logn;
  if (!(implied <= bound)) {
    throw std::logic_error("lemma_m_bound: derivation chain exceeds the closed form");
  }
  return bound;
}

/// Analytic bootstrap: if T > (4m^2)^m and T > Z/(log Z)^m then
/// Z < 2^m T (log T)^m.
inline double guzman_luca_bound(double T, int m) {
  if (m < 1) throw std::invalid_argument("guzman_luca_bound: m >= 1 required");
  const double threshold = std::pow(4.0 * m * m, m);
  if (!(T > threshold)) {
    throw std::invalid_argument("guzman_luca_bound: requires T > (4 m^2)^m");
  }
  return std::pow(2.0, m) * T * std::pow(std::log(T), m);
}

struct AbsoluteBounds {
  double l_max = 0;
  double m_max = 0;
  double n_max = 0;
};

/// Every step of the absolute-bound computation, for reporting.
struct AbsoluteBoundsChain {
  double log_alpha = 0;
  double stage3_matveev_at_nmax = 0;  // value of the Matveev floor at n = n_max
  double growth_coeff_published = chain::kStage3Growth;
  double t_published = chain::kGuzmanT;   // T as published
  double t_derived = 0;                   // kStage3Growth / log alpha + slack
  double n_via_published_t = 0;
  double n_via_derived_t = 0;
  AbsoluteBounds bounds;
};

/// The full absolute-bound chain: Matveev floor for the third linear form,
/// the growth inequality n log alpha - log 10 < 1.1e41 (log n)^3, the
/// bootstrap lemma at T, then the first two lemma bounds at the resulting
/// n_max. The published T = 3.9e41 is slightly below the T the growth
/// inequality actually yields (3.9118e41 with the corrected root), so the
/// derived T is carried alongside and the larger result is returned; both
/// land under the published ceilings.
inline AbsoluteBoundsChain absolute_bounds_chain(const RealContext& ctx, const PerrinRoots& roots) {
  if (roots.mode != RootMode::corrected) {
    throw std::invalid_argument("absolute_bounds: corrected-mode roots required");
  }
  (void)ctx;
  AbsoluteBoundsChain out;
  const double la = ln(roots.alpha).to_double();
  out.log_alpha = la;

  // Matveev floor -R(n) for Gamma_2 must stay above the growth ceiling:
  // R(n) + log(10/9) <= 1.1e41 (log n)^3 across the admissible range.
  for (double n : {701.0, 1e6, 1e12, 1e24, chain::kNMaxCeiling}) {
    const double logn = std::log(n);
    const double h1 = chain::kStage3Height * logn * logn;
    MatveevParams p{3, 3, n, {3.0 * h1, la, 3.0 * std::log(10.0)}};
    const double r = -matveev_lower_bound(p);
    if (!(r + std::log(10.0 / 9.0) <= chain::kStage3Growth * logn * logn * logn)) {
      throw std::logic_error("absolute_bounds: growth inequality violated by the Matveev floor");
    }
  }

  // n log alpha - log 10 < c (log n)^3  =>  n/(log n)^3 < c/log alpha + slack.
  const double logn_low = std::log(701.0);
  out.t_derived = chain::kStage3Growth / la + std::log(10.0) / (la * logn_low * logn_low * logn_low);
  out.n_via_published_t = guzman_luca_bound(chain::kGuzmanT, 3);
  out.n_via_derived_t = guzman_luca_bound(out.t_derived, 3);

  const double n_max = std::max(out.n_via_published_t, out.n_via_derived_t);
  if (!(n_max <= chain::kNMaxCeiling)) {
    throw std::logic_error("absolute_bounds: n_max exceeds the published ceiling");
  }
  out.bounds.n_max = n_max;
  out.bounds.l_max = lemma_l_bound(n_max);
  out.bounds.m_max = lemma_m_bound(n_max);
  if (!(out.bounds.l_max <= chain::kLMaxCeiling) || !(out.bounds.m_max <= chain::kMMaxCeiling)) {
    throw std::logic_error("absolute_bounds: l/m bounds exceed the published ceilings");
  }
  {
    const double logn = std::log(n_max);
    const double h1 = chain::kStage3Height * logn * logn;
    MatveevParams p{3, 3, n_max, {3.0 * h1, la, 3.0 * std::log(10.0)}};
    out.stage3_matveev_at_nmax = matveev_lower_bound(p);
  }
  return out;
}

inline AbsoluteBounds absolute_bounds(const RealContext& ctx, const PerrinRoots& roots) {
  return absolute_bounds_chain(ctx, roots).bounds;
}

}  // namespace perrinpal
