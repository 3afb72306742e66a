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

#include <optional>
#include <stdexcept>
#include <vector>

#include "perrinpal/hpreal.hpp"

namespace perrinpal {

struct Convergent {
  long index = -1;  // position in the expansion; reported, never matched on
  mpz_class p;
  mpz_class q;
};

enum class CfTermination {
  count_reached,        // asked-for quotients all certified
  precision_exhausted,  // enclosure endpoints disagree on the next floor
  exact_rational,       // the input was rational and fully expanded
};

/// Certified continued-fraction expansion of an enclosed real.
///
/// The enclosure endpoints are carried as exact rationals; a partial
/// quotient is emitted only when both endpoints agree on the floor, so every
/// emitted quotient is a proven quotient of any number inside the enclosure.
/// When the endpoints disagree the stream ends rather than guess.
class CfStream {
 public:
  explicit CfStream(const Ival& x) : lo_(x.lo().to_mpq()), hi_(x.hi().to_mpq()) {
    if (x.lo().sign() <= 0) throw std::invalid_argument("CfStream: requires x > 0");
  }

  std::optional<mpz_class> next() {
    if (done_) return std::nullopt;
    mpz_class f1 = floor_q(lo_);
    mpz_class f2 = floor_q(hi_);
    if (f1 != f2) {
      done_ = true;
      termination_ = CfTermination::precision_exhausted;
      return std::nullopt;
    }
    mpq_class rem_lo = lo_ - mpq_class(f1);
    mpq_class rem_hi = hi_ - mpq_class(f1);
    if (sgn(rem_hi) == 0) {  // exact integer: expansion ends here
      done_ = true;
      termination_ = CfTermination::exact_rational;
    } else if (sgn(rem_lo) == 0) {
      // one endpoint hit an integer exactly; the next floor is unbounded
      done_ = true;
      termination_ = CfTermination::precision_exhausted;
    } else {
      lo_ = 1 / rem_hi;
      hi_ = 1 / rem_lo;
    }
    return f1;
  }

  CfTermination termination() const { return termination_; }

 private:
  static mpz_class floor_q(const mpq_class& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
  }

  mpq_class lo_, hi_;
  bool done_ = false;
  CfTermination termination_ = CfTermination::count_reached;
};

struct CfExpansion {
  std::vector<mpz_class> quotients;
  CfTermination termination = CfTermination::count_reached;
};

/// Up to `count` certified partial quotients of x.
inline CfExpansion cf_expand(const Ival& x, long count) {
  if (count < 1) throw std::invalid_argument("cf_expand: count >= 1 required");
  CfExpansion out;
  CfStream s(x);
  for (long i = 0; i < count; ++i) {
    auto a = s.next();
    if (!a) {
      out.termination = s.termination();
      return out;
    }
    out.quotients.push_back(std::move(*a));
  }
  out.termination =
      s.termination() == CfTermination::exact_rational ? s.termination() : CfTermination::count_reached;
  return out;
}

inline CfExpansion cf_expand(const HPReal& x, long count) {
  return cf_expand(Ival::ulp_ball(x), count);
}

/// Convergents p_k/q_k of a certified expansion, by the three-term
/// recurrences p_k = a_k p_{k-1} + p_{k-2}, q_k = a_k q_{k-1} + q_{k-2}.
class ConvergentStream {
 public:
  explicit ConvergentStream(const Ival& x) : cf_(x) {}

  std::optional<Convergent> next() {
    auto a = cf_.next();
    if (!a) return std::nullopt;
    mpz_class p = *a * p1_ + p2_;
    mpz_class q = *a * q1_ + q2_;
    p2_ = p1_;
    q2_ = q1_;
    p1_ = p;
    q1_ = q;
    return Convergent{++k_, std::move(p), std::move(q)};
  }

  CfTermination termination() const { return cf_.termination(); }

 private:
  CfStream cf_;
  mpz_class p2_{0}, q2_{1};  // p_{-2}, q_{-2}
  mpz_class p1_{1}, q1_{0};  // p_{-1}, q_{-1}
  long k_ = -1;
};

inline std::vector<Convergent> convergents(const Ival& x, long max_count) {
  std::vector<Convergent> out;
  ConvergentStream s(x);
  for (long i = 0; i < max_count; ++i) {
    auto c = s.next();
    if (!c) break;
    out.push_back(std::move(*c));
  }
  return out;
}

/// First convergent with q > min_q.
inline Convergent first_convergent_with(const Ival& x, const mpz_class& min_q) {
  ConvergentStream s(x);
  while (auto c = s.next()) {
    if (c->q > min_q) return std::move(*c);
  }
  throw precision_error(
      "first_convergent_with: certified quotients ran out before reaching the requested "
      "denominator; escalate the context");
}

inline Convergent first_convergent_with(const HPReal& x, const mpz_class& min_q) {
  return first_convergent_with(Ival::ulp_ball(x), min_q);
}

}  // namespace perrinpal
