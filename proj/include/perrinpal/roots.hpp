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

#include <string>

#include "perrinpal/hpreal.hpp"

namespace perrinpal {

/// Which value of the dominant root the pipeline runs with.
///
/// `corrected` is the real root of x^3 - x - 1 (the plastic number),
/// bracketed in (1.32, 1.33). `paper_replication` is the literal constant
/// 31/24 that the published reduction scripts evaluate; it exists solely so
/// their printed convergents and epsilon values can be regressed against.
enum class RootMode { corrected, paper_replication };

inline std::string to_string(RootMode m) {
  return m == RootMode::corrected ? "corrected" : "paper_replication";
}

struct PerrinRoots {
  RootMode mode;
  HPReal alpha;        // round-to-nearest representative
  Ival alpha_enc;      // certified enclosure of the same constant
  HPReal beta_modulus; // alpha^(-1/2), modulus of the complex root pair
};

namespace detail {

// x^3 - x - 1 with every step rounded in one direction, so the sign of the
// result certifies the sign of the true value when it comes out strict.
inline HPReal phi_directed(const HPReal& x, mpfr_rnd_t rnd) {
  HPReal t(x.precision_bits());
  mpfr_mul(t.raw(), x.raw(), x.raw(), rnd);
  mpfr_mul(t.raw(), t.raw(), x.raw(), rnd);
  mpfr_sub(t.raw(), t.raw(), x.raw(), rnd);
  mpfr_sub_ui(t.raw(), t.raw(), 1, rnd);
  return t;
}

inline HPReal phi(const HPReal& x) {
  HPReal one = HPReal::of_long(1, x.precision_bits());
  return pow_ui(x, 3) - x - one;
}

inline HPReal phi_prime(const HPReal& x) {
  HPReal three = HPReal::of_long(3, x.precision_bits());
  HPReal one = HPReal::of_long(1, x.precision_bits());
  return three * x * x - one;
}

}  // namespace detail

/// The algebraic constants of the characteristic polynomial, under `mode`.
///
/// corrected: bisection on [1.32, 1.33] down to ~1e-10, then Newton, then a
/// sign-certified enclosure of width 2e-(digits). paper_replication: the
/// exact rational 31/24. Both populate beta_modulus = alpha^(-1/2).
inline PerrinRoots plastic_root(const RealContext& ctx, RootMode mode) {
  const mpfr_prec_t prec = ctx.precision_bits();
  if (mode == RootMode::paper_replication) {
    mpq_class a(31, 24);
    Ival enc = Ival::of_rational(a, prec);
    HPReal alpha = HPReal::of_mpq(a, prec);
    HPReal one = HPReal::of_long(1, prec);
    return PerrinRoots{mode, alpha, enc, one / sqrt(alpha)};
  }

  const long budget = 10 * ctx.precision_digits();
  long used = 0;

  HPReal lo = ctx.real("1.32");
  HPReal hi = ctx.real("1.33");
  HPReal two = ctx.real(2);
  HPReal coarse_tol = ctx.real("1e-10");
  while (hi - lo > coarse_tol) {
    if (++used > budget) throw precision_error("plastic_root: bisection exceeded iteration budget");
    HPReal mid = (lo + hi) / two;
    if (detail::phi(mid).sign() < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  HPReal x = (lo + hi) / two;
  // Newton converges quadratically from the 1e-10 bracket; stop when the
  // step falls below the target resolution.
  HPReal tol = ctx.real("1e-" + std::to_string(ctx.precision_digits() + 5));
  for (;;) {
    if (++used > budget) throw precision_error("plastic_root: Newton exceeded iteration budget");
    HPReal step = detail::phi(x) / detail::phi_prime(x);
    x = x - step;
    if (abs(step) < tol) break;
  }

  // Certify: phi changes sign across [x - delta, x + delta].
  HPReal delta = ctx.real("1e-" + std::to_string(ctx.precision_digits()));
  HPReal enc_lo(prec), enc_hi(prec);
  mpfr_sub(enc_lo.raw(), x.raw(), delta.raw(), MPFR_RNDD);
  mpfr_add(enc_hi.raw(), x.raw(), delta.raw(), MPFR_RNDU);
  if (detail::phi_directed(enc_lo, MPFR_RNDU).sign() >= 0 ||
      detail::phi_directed(enc_hi, MPFR_RNDD).sign() <= 0) {
    throw precision_error("plastic_root: could not certify the root enclosure");
  }

  HPReal one = ctx.real(1);
  return PerrinRoots{mode, x, Ival(enc_lo, enc_hi), one / sqrt(x)};
}

}  // namespace perrinpal
