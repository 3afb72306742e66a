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
#include <mpfr.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace perrinpal {

/// Thrown when a quantity cannot be certified at the working precision.
/// The recovery path is always the same: escalate the context and retry.
class precision_error : public std::runtime_error {
 public:
  explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

class HPReal;

/// Decimal working precision shared by a family of HPReal values.
///
/// Contexts are immutable; escalation produces a new context. The binary
/// precision carries 64 guard bits beyond the requested decimal digits so
/// that printing at `precision_digits` is stable.
class RealContext {
 public:
  static constexpr long kMinDigits = 50;

  explicit RealContext(long precision_digits) : digits_(precision_digits) {
    if (precision_digits < kMinDigits) {
      throw std::invalid_argument(
          "RealContext: fewer than 50 decimal digits makes the reduction arithmetic meaningless");
    }
  }

  long precision_digits() const { return digits_; }

  mpfr_prec_t precision_bits() const {
    return static_cast<mpfr_prec_t>(static_cast<double>(digits_) * 3.3219280948873626) + 64;
  }

  RealContext doubled() const { return RealContext(digits_ * 2); }

  // Factory helpers, defined after HPReal.
  HPReal real(long v) const;
  HPReal real(const mpz_class& v) const;
  HPReal real(const mpq_class& v) const;
  HPReal real(const std::string& decimal) const;

 private:
  long digits_;
};

inline RealContext make_context(long precision_digits) { return RealContext(precision_digits); }

/// Arbitrary-precision real: an immutable-by-convention RAII wrapper over
/// mpfr_t. Precision is fixed per value at construction; binary operators
/// round to nearest at the wider operand precision. Directed-rounding
/// arithmetic lives in Ival, which owns the endpoints' rounding discipline.
class HPReal {
 public:
  HPReal() { mpfr_init2(v_, 64); }  // NaN placeholder for containers

  explicit HPReal(mpfr_prec_t prec) { mpfr_init2(v_, prec); }

  HPReal(const HPReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);  // exact: same precision
  }

  HPReal(HPReal&& o) noexcept {
    mpfr_init2(v_, 2);
    mpfr_swap(v_, o.v_);
  }

  HPReal& operator=(const HPReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  HPReal& operator=(HPReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }

  ~HPReal() { mpfr_clear(v_); }

  static HPReal of_long(long v, mpfr_prec_t prec) {
    HPReal r(prec);
    mpfr_set_si(r.v_, v, MPFR_RNDN);
    return r;
  }

  static HPReal of_mpz(const mpz_class& v, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN) {
    HPReal r(prec);
    mpfr_set_z(r.v_, v.get_mpz_t(), rnd);
    return r;
  }

  static HPReal of_mpq(const mpq_class& v, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN) {
    HPReal r(prec);
    mpfr_set_q(r.v_, v.get_mpq_t(), rnd);
    return r;
  }

  static HPReal of_decimal(const std::string& s, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN) {
    HPReal r(prec);
    if (mpfr_set_str(r.v_, s.c_str(), 10, rnd) != 0) {
      throw std::invalid_argument("HPReal: unparsable decimal literal: " + s);
    }
    return r;
  }

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

  mpfr_prec_t precision_bits() const { return mpfr_get_prec(v_); }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Decimal rendering with `digits` significant digits ("%.*Rg").
  std::string to_decimal(long digits) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", static_cast<int>(digits), v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

  /// Nearest integer (ties to even).
  mpz_class round_to_mpz() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
    return z;
  }

  mpz_class floor_to_mpz() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
    return z;
  }

  /// Exact rational value of the float (binary mantissa/exponent).
  mpq_class to_mpq() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }

  friend HPReal operator+(const HPReal& a, const HPReal& b) {
    HPReal r(join_prec(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend HPReal operator-(const HPReal& a, const HPReal& b) {
    HPReal r(join_prec(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend HPReal operator*(const HPReal& a, const HPReal& b) {
    HPReal r(join_prec(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend HPReal operator/(const HPReal& a, const HPReal& b) {
    HPReal r(join_prec(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend HPReal operator-(const HPReal& a) {
    HPReal r(a.precision_bits());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const HPReal& a, const HPReal& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const HPReal& a, const HPReal& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const HPReal& a, const HPReal& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const HPReal& a, const HPReal& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
  friend bool operator==(const HPReal& a, const HPReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const HPReal& a, const HPReal& b) { return !(a == b); }

  friend HPReal abs(const HPReal& a) {
    HPReal r(a.precision_bits());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend HPReal ln(const HPReal& a, mpfr_rnd_t rnd = MPFR_RNDN) {
    HPReal r(a.precision_bits());
    mpfr_log(r.v_, a.v_, rnd);
    return r;
  }
  friend HPReal sqrt(const HPReal& a, mpfr_rnd_t rnd = MPFR_RNDN) {
    HPReal r(a.precision_bits());
    mpfr_sqrt(r.v_, a.v_, rnd);
    return r;
  }
  friend HPReal cbrt(const HPReal& a, mpfr_rnd_t rnd = MPFR_RNDN) {
    HPReal r(a.precision_bits());
    mpfr_cbrt(r.v_, a.v_, rnd);
    return r;
  }
  friend HPReal floor(const HPReal& a) {
    HPReal r(a.precision_bits());
    mpfr_floor(r.v_, a.v_);
    return r;
  }
  friend HPReal pow_ui(const HPReal& a, unsigned long e, mpfr_rnd_t rnd = MPFR_RNDN) {
    HPReal r(a.precision_bits());
    mpfr_pow_ui(r.v_, a.v_, e, rnd);
    return r;
  }
  friend HPReal pow_si(const HPReal& a, long e, mpfr_rnd_t rnd = MPFR_RNDN) {
    HPReal r(a.precision_bits());
    mpfr_pow_si(r.v_, a.v_, e, rnd);
    return r;
  }

  /// Largest representable value strictly below (above) this one.
  HPReal next_below() const {
    HPReal r(*this);
    mpfr_nextbelow(r.v_);
    return r;
  }
  HPReal next_above() const {
    HPReal r(*this);
    mpfr_nextabove(r.v_);
    return r;
  }

 private:
  static mpfr_prec_t join_prec(const HPReal& a, const HPReal& b) {
    return std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_));
  }

  mpfr_t v_;
};

inline HPReal RealContext::real(long v) const { return HPReal::of_long(v, precision_bits()); }
inline HPReal RealContext::real(const mpz_class& v) const {
  return HPReal::of_mpz(v, precision_bits());
}
inline HPReal RealContext::real(const mpq_class& v) const {
  return HPReal::of_mpq(v, precision_bits());
}
inline HPReal RealContext::real(const std::string& decimal) const {
  return HPReal::of_decimal(decimal, precision_bits());
}

namespace detail {
inline void require_exact(int ternary, const char* where) {
  if (ternary != 0) throw precision_error(std::string("inexact where exactness is required: ") + where);
}
}  // namespace detail

/// Certified enclosure [lo, hi] of a real number, with all endpoint
/// arithmetic rounded outward. This is the engine behind every sign and
/// floor decision that gates the reduction pipeline.
class Ival {
 public:
  Ival() = default;

  Ival(HPReal lo, HPReal hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.is_nan() || hi_.is_nan() || lo_ > hi_) {
      throw std::invalid_argument("Ival: endpoints out of order");
    }
  }

  static Ival point(const HPReal& x) { return Ival(x, x); }

  /// One-ulp ball around a round-to-nearest result, which always contains
  /// the true value (RNDN error is at most half an ulp).
  static Ival ulp_ball(const HPReal& x) { return Ival(x.next_below(), x.next_above()); }

  static Ival of_rational(const mpq_class& v, mpfr_prec_t prec) {
    return Ival(HPReal::of_mpq(v, prec, MPFR_RNDD), HPReal::of_mpq(v, prec, MPFR_RNDU));
  }
  static Ival of_mpz(const mpz_class& v, mpfr_prec_t prec) {
    return Ival(HPReal::of_mpz(v, prec, MPFR_RNDD), HPReal::of_mpz(v, prec, MPFR_RNDU));
  }
  static Ival of_long(long v, mpfr_prec_t prec) { return point(HPReal::of_long(v, prec)); }

  const HPReal& lo() const { return lo_; }
  const HPReal& hi() const { return hi_; }

  bool strictly_positive() const { return lo_.sign() > 0; }
  bool nonpositive() const { return hi_.sign() <= 0; }
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }

  HPReal mid() const {
    HPReal two = HPReal::of_long(2, lo_.precision_bits());
    return (lo_ + hi_) / two;
  }
  HPReal width() const { return hi_ - lo_; }

  friend Ival add(const Ival& a, const Ival& b) {
    HPReal lo(join(a, b)), hi(join(a, b));
    mpfr_add(lo.raw(), a.lo_.raw(), b.lo_.raw(), MPFR_RNDD);
    mpfr_add(hi.raw(), a.hi_.raw(), b.hi_.raw(), MPFR_RNDU);
    return Ival(std::move(lo), std::move(hi));
  }

  friend Ival sub(const Ival& a, const Ival& b) {
    HPReal lo(join(a, b)), hi(join(a, b));
    mpfr_sub(lo.raw(), a.lo_.raw(), b.hi_.raw(), MPFR_RNDD);
    mpfr_sub(hi.raw(), a.hi_.raw(), b.lo_.raw(), MPFR_RNDU);
    return Ival(std::move(lo), std::move(hi));
  }

  friend Ival neg(const Ival& a) {
    HPReal lo(a.lo_.precision_bits()), hi(a.lo_.precision_bits());
    mpfr_neg(lo.raw(), a.hi_.raw(), MPFR_RNDD);
    mpfr_neg(hi.raw(), a.lo_.raw(), MPFR_RNDU);
    return Ival(std::move(lo), std::move(hi));
  }

  friend Ival mul(const Ival& a, const Ival& b) {
    mpfr_prec_t p = join(a, b);
    const mpfr_srcptr as[2] = {a.lo_.raw(), a.hi_.raw()};
    const mpfr_srcptr bs[2] = {b.lo_.raw(), b.hi_.raw()};
    HPReal lo(p), hi(p), t(p);
    bool first = true;
    for (auto x : as) {
      for (auto y : bs) {
        mpfr_mul(t.raw(), x, y, MPFR_RNDD);
        if (first || t < lo) mpfr_set(lo.raw(), t.raw(), MPFR_RNDD);
        mpfr_mul(t.raw(), x, y, MPFR_RNDU);
        if (first || t > hi) mpfr_set(hi.raw(), t.raw(), MPFR_RNDU);
        first = false;
      }
    }
    return Ival(std::move(lo), std::move(hi));
  }

  friend Ival div(const Ival& a, const Ival& b) {
    if (b.contains_zero()) throw std::invalid_argument("Ival division by interval containing zero");
    mpfr_prec_t p = join(a, b);
    HPReal rlo(p), rhi(p);
    mpfr_ui_div(rlo.raw(), 1, b.hi_.raw(), MPFR_RNDD);
    mpfr_ui_div(rhi.raw(), 1, b.lo_.raw(), MPFR_RNDU);
    return mul(a, Ival(std::move(rlo), std::move(rhi)));
  }

  /// Multiplication by an exact integer.
  friend Ival mul_z(const Ival& a, const mpz_class& k) {
    mpfr_prec_t p = a.lo_.precision_bits();
    HPReal lo(p), hi(p);
    if (sgn(k) >= 0) {
      mpfr_mul_z(lo.raw(), a.lo_.raw(), k.get_mpz_t(), MPFR_RNDD);
      mpfr_mul_z(hi.raw(), a.hi_.raw(), k.get_mpz_t(), MPFR_RNDU);
    } else {
      mpfr_mul_z(lo.raw(), a.hi_.raw(), k.get_mpz_t(), MPFR_RNDD);
      mpfr_mul_z(hi.raw(), a.lo_.raw(), k.get_mpz_t(), MPFR_RNDU);
    }
    return Ival(std::move(lo), std::move(hi));
  }

  friend Ival ln_iv(const Ival& a) {
    if (a.lo_.sign() <= 0) throw std::invalid_argument("Ival ln of nonpositive interval");
    mpfr_prec_t p = a.lo_.precision_bits();
    HPReal lo(p), hi(p);
    mpfr_log(lo.raw(), a.lo_.raw(), MPFR_RNDD);
    mpfr_log(hi.raw(), a.hi_.raw(), MPFR_RNDU);
    return Ival(std::move(lo), std::move(hi));
  }

  friend Ival sqrt_iv(const Ival& a) {
    if (a.lo_.sign() < 0) throw std::invalid_argument("Ival sqrt of negative interval");
    mpfr_prec_t p = a.lo_.precision_bits();
    HPReal lo(p), hi(p);
    mpfr_sqrt(lo.raw(), a.lo_.raw(), MPFR_RNDD);
    mpfr_sqrt(hi.raw(), a.hi_.raw(), MPFR_RNDU);
    return Ival(std::move(lo), std::move(hi));
  }

  friend Ival pow_ui_iv(const Ival& a, unsigned long e) {
    if (a.lo_.sign() < 0) throw std::invalid_argument("Ival pow of negative interval");
    mpfr_prec_t p = a.lo_.precision_bits();
    HPReal lo(p), hi(p);
    mpfr_pow_ui(lo.raw(), a.lo_.raw(), e, MPFR_RNDD);
    mpfr_pow_ui(hi.raw(), a.hi_.raw(), e, MPFR_RNDU);
    return Ival(std::move(lo), std::move(hi));
  }

  /// floor(x) when it is the same integer across the whole enclosure.
  std::optional<mpz_class> floor_unique() const {
    mpz_class f1 = lo_.floor_to_mpz();
    mpz_class f2 = hi_.floor_to_mpz();
    if (f1 != f2) return std::nullopt;
    return f1;
  }

  /// Enclosure of the nearest-integer distance ||x|| over the interval.
  /// Requires width < 1/2 so at most one half-integer can be straddled.
  Ival nearest_dist() const;

 private:
  static mpfr_prec_t join(const Ival& a, const Ival& b) {
    return std::max(a.lo_.precision_bits(), b.lo_.precision_bits());
  }

  HPReal lo_, hi_;
};

namespace detail {

/// x - round(x), computed exactly (the difference is representable at
/// prec(x) + 64 whenever |x - round(x)| <= 1/2).
inline HPReal exact_sub_z(const HPReal& x, const mpz_class& n) {
  HPReal r(x.precision_bits() + 64);
  int t = mpfr_sub_z(r.raw(), x.raw(), n.get_mpz_t(), MPFR_RNDN);
  require_exact(t, "x - nearest_int(x)");
  return r;
}

}  // namespace detail

inline Ival Ival::nearest_dist() const {
  mpz_class n1 = lo_.round_to_mpz();
  mpz_class n2 = hi_.round_to_mpz();
  mpfr_prec_t p = lo_.precision_bits() + 64;
  HPReal half = HPReal::of_mpq(mpq_class(1, 2), p);
  if (n1 == n2) {
    HPReal rlo = detail::exact_sub_z(lo_, n1);
    HPReal rhi = detail::exact_sub_z(hi_, n1);
    if (rlo.sign() >= 0) return Ival(rlo, rhi);
    if (rhi.sign() <= 0) return Ival(-rhi, -rlo);
    HPReal zero = HPReal::of_long(0, p);
    HPReal m = std::max(-rlo, rhi);
    return Ival(zero, std::move(m));
  }
  if (n2 - n1 != 1) {
    throw precision_error("nearest_dist: enclosure wider than 1/2, cannot bound ||x||");
  }
  // The enclosure straddles the half-integer between n1 and n2; the distance
  // reaches its maximum 1/2 inside the interval.
  HPReal d1 = abs(detail::exact_sub_z(lo_, n1));
  HPReal d2 = abs(detail::exact_sub_z(hi_, n2));
  return Ival(std::min(d1, d2), std::move(half));
}

/// Distance from x to the nearest integer, in [0, 1/2].
///
/// Exact integers and exact half-integers pass through; otherwise the
/// distance must clear a ten-guard-digit margin above the representation
/// resolution of x, or the result cannot be trusted and the caller has to
/// escalate precision.
inline HPReal nearest_int_dist(const HPReal& x) {
  if (!x.is_finite()) throw std::invalid_argument("nearest_int_dist: non-finite input");
  mpz_class n = x.round_to_mpz();
  HPReal d = abs(detail::exact_sub_z(x, n));
  if (d.is_zero()) return d;
  mpfr_prec_t p = x.precision_bits();
  HPReal half = HPReal::of_mpq(mpq_class(1, 2), p + 64);
  if (d == half) return d;
  // margin: 10 decimal guard digits above one ulp of x
  HPReal margin(p + 64);
  mpfr_set_ui_2exp(margin.raw(), 10000000000UL, x.is_zero() ? -p : mpfr_get_exp(x.raw()) - p,
                   MPFR_RNDU);
  if (d < margin) {
    throw precision_error("nearest_int_dist: distance indistinguishable from 0 at this precision");
  }
  if (abs(d - half) < margin) {
    throw precision_error("nearest_int_dist: distance indistinguishable from 1/2 at this precision");
  }
  return d;
}

}  // namespace perrinpal
