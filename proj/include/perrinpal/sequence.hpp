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

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "perrinpal/hpreal.hpp"
#include "perrinpal/roots.hpp"

namespace perrinpal {

struct PerrinValue {
  std::uint64_t index;
  mpz_class value;
};

/// P_n by the exact recurrence P_0=3, P_1=0, P_2=2, P_{n+3}=P_{n+1}+P_n.
inline mpz_class perrin(std::uint64_t n) {
  mpz_class a = 3, b = 0, c = 2;  // P_k, P_{k+1}, P_{k+2}
  for (std::uint64_t k = 0; k < n; ++k) {
    mpz_class next = a + b;  // P_{k+3}
    a = b;
    b = c;
    c = next;
  }
  return a;
}

/// P_0 .. P_limit in order.
inline std::vector<PerrinValue> perrin_stream(std::uint64_t limit) {
  std::vector<PerrinValue> out;
  out.reserve(limit + 1);
  mpz_class a = 3, b = 0, c = 2;
  for (std::uint64_t n = 0; n <= limit; ++n) {
    out.push_back({n, a});
    mpz_class next = a + b;
    a = b;
    b = c;
    c = next;
  }
  return out;
}

namespace detail {

inline void require_corrected(const PerrinRoots& roots, const char* op) {
  if (roots.mode != RootMode::corrected) {
    throw std::invalid_argument(std::string(op) +
                                ": only meaningful for the corrected root; the replication "
                                "constant fails the analytic estimates by construction");
  }
}

// The error term e(n) is of order alpha^(-n/2); alpha^n itself is of order
// 10^(0.123 n). Resolving e(n) therefore needs roughly 0.185 n digits.
inline void require_binet_precision(const RealContext& ctx, std::uint64_t n) {
  double needed = 0.1857 * static_cast<double>(n) + 30.0;
  if (static_cast<double>(ctx.precision_digits()) < needed) {
    throw precision_error("binet_error: context too small to resolve e(n) at this index");
  }
}

}  // namespace detail

/// e(n) = P_n - alpha^n. The returned value always satisfies
/// |e(n)| < 3 * alpha^(-n/2); a context too coarse to certify that scale
/// is rejected up front.
inline HPReal binet_error(std::uint64_t n, const PerrinRoots& roots, const RealContext& ctx) {
  detail::require_corrected(roots, "binet_error");
  detail::require_binet_precision(ctx, n);
  HPReal alpha_n = pow_ui(roots.alpha, n);
  HPReal pn = ctx.real(perrin(n));
  return pn - alpha_n;
}

/// Certified check of the growth bracket alpha^(n-2) <= P_n <= alpha^(n+1),
/// n >= 2. Evaluated on the root enclosure with outward rounding, so a true
/// result is a proof at the working precision.
inline bool growth_bounds_check(std::uint64_t n, const PerrinRoots& roots,
                                const RealContext& ctx) {
  detail::require_corrected(roots, "growth_bounds_check");
  if (n < 2) throw std::invalid_argument("growth_bounds_check: requires n >= 2");
  (void)ctx;
  mpz_class pn = perrin(n);
  Ival lower = pow_ui_iv(roots.alpha_enc, static_cast<unsigned long>(n - 2));
  Ival upper = pow_ui_iv(roots.alpha_enc, static_cast<unsigned long>(n + 1));
  return mpfr_cmp_z(lower.hi().raw(), pn.get_mpz_t()) <= 0 &&
         mpfr_cmp_z(upper.lo().raw(), pn.get_mpz_t()) >= 0;
}

}  // namespace perrinpal
