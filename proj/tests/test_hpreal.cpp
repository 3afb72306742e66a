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

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "perrinpal/hpreal.hpp"

using namespace perrinpal;

namespace {

// |a - b| <= 10^-digits * max(|a|, 1)
bool agree_to_digits(const HPReal& a, const HPReal& b, long digits) {
  HPReal diff = abs(a - b);
  HPReal scale = std::max(abs(a), HPReal::of_long(1, a.precision_bits()));
  HPReal tol = HPReal::of_decimal("1e-" + std::to_string(digits), a.precision_bits()) * scale;
  return diff <= tol;
}

}  // namespace

TEST_CASE("make_context validates the precision floor") {
  CHECK(make_context(1000).precision_digits() == 1000);
  CHECK(make_context(50).precision_digits() == 50);
  CHECK_THROWS_AS(make_context(10), std::invalid_argument);
  CHECK_THROWS_AS(make_context(49), std::invalid_argument);
}

TEST_CASE("nearest_int_dist on exact rationals") {
  RealContext ctx = make_context(100);
  CHECK(nearest_int_dist(ctx.real(mpq_class(13, 4))) == ctx.real(mpq_class(1, 4)));
  CHECK(nearest_int_dist(ctx.real(mpq_class(-1, 2))) == ctx.real(mpq_class(1, 2)));
  CHECK(nearest_int_dist(ctx.real(7)).is_zero());
  CHECK(nearest_int_dist(ctx.real(0)).is_zero());
  CHECK(nearest_int_dist(ctx.real(mpq_class(-13, 4))) == ctx.real(mpq_class(1, 4)));
}

TEST_CASE("nearest_int_dist properties on random rationals") {
  RealContext ctx = make_context(80);
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<long> num(-100000, 100000);
  std::uniform_int_distribution<long> den_exp(0, 9);  // power-of-two denominators stay exact
  std::uniform_int_distribution<long> shift(-50, 50);
  HPReal half = ctx.real(mpq_class(1, 2));
  for (int i = 0; i < 300; ++i) {
    mpq_class x(num(rng), 1L << den_exp(rng));
    x.canonicalize();
    long k = shift(rng);
    HPReal d = nearest_int_dist(ctx.real(x));
    CHECK(d.sign() >= 0);
    CHECK(d <= half);
    CHECK(d == nearest_int_dist(ctx.real(mpq_class(-x))));
    CHECK(d == nearest_int_dist(ctx.real(mpq_class(x + k))));
  }
}

TEST_CASE("nearest_int_dist refuses unresolvable distances") {
  RealContext ctx = make_context(100);
  HPReal near_int = ctx.real(1) + ctx.real("1e-110");
  CHECK_THROWS_AS(nearest_int_dist(near_int), precision_error);
  HPReal near_half = ctx.real(mpq_class(1, 2)) + ctx.real("1e-110");
  CHECK_THROWS_AS(nearest_int_dist(near_half), precision_error);
  // the same distances resolve at a finer context
  RealContext fine = make_context(200);
  CHECK(nearest_int_dist(fine.real(1) + fine.real("1e-110")) > fine.real(0));
}

TEST_CASE("interval arithmetic keeps enclosures ordered and outward") {
  RealContext ctx = make_context(80);
  mpfr_prec_t prec = ctx.precision_bits();
  Ival a = Ival::of_rational(mpq_class(1, 3), prec);
  CHECK(a.lo() <= a.hi());
  CHECK(a.lo() < a.hi());  // 1/3 is not binary-representable

  Ival b = Ival::of_rational(mpq_class(-7, 5), prec);
  Ival s = add(a, b);
  CHECK(s.lo() <= ctx.real(mpq_class(1, 3)) + ctx.real(mpq_class(-7, 5)));
  Ival p = mul(a, b);
  CHECK(p.lo() <= p.hi());
  CHECK(p.hi().sign() < 0);  // (1/3) * (-7/5) < 0

  Ival q = div(b, a);  // -21/5
  CHECK(q.lo() <= ctx.real(mpq_class(-21, 5)));
  CHECK(ctx.real(mpq_class(-21, 5)) <= q.hi());
  CHECK_THROWS_AS(div(a, sub(a, a)), std::invalid_argument);

  Ival l = ln_iv(Ival::of_long(10, prec));
  CHECK(l.lo() < l.hi());
  CHECK(agree_to_digits(l.mid(), ctx.real("2.302585092994045684017991454684364207601"), 30));
}

TEST_CASE("interval nearest distance handles straddles") {
  RealContext ctx = make_context(80);
  mpfr_prec_t prec = ctx.precision_bits();
  // interval straddling an integer: distance reaches 0
  Ival around_int(ctx.real(mpq_class(127, 64)), ctx.real(mpq_class(129, 64)));
  Ival d1 = around_int.nearest_dist();
  CHECK(d1.lo().is_zero());
  CHECK(d1.hi() == ctx.real(mpq_class(1, 64)));
  // interval straddling a half-integer: distance reaches 1/2
  Ival around_half(ctx.real(mpq_class(159, 64)), ctx.real(mpq_class(162, 64)));
  Ival d2 = around_half.nearest_dist();
  CHECK(d2.hi() == ctx.real(mpq_class(1, 2)));
  CHECK(d2.lo() == ctx.real(mpq_class(30, 64)));
  // plain interval
  Ival plain(ctx.real(mpq_class(17, 8)), ctx.real(mpq_class(18, 8)));
  Ival d3 = plain.nearest_dist();
  CHECK(d3.lo() == ctx.real(mpq_class(1, 8)));
  CHECK(d3.hi() == ctx.real(mpq_class(1, 4)));
}

TEST_CASE("floor_unique resolves only unambiguous floors") {
  RealContext ctx = make_context(80);
  mpfr_prec_t prec = ctx.precision_bits();
  Ival a(ctx.real(mpq_class(7, 2)), ctx.real(mpq_class(15, 4)));
  REQUIRE(a.floor_unique().has_value());
  CHECK(*a.floor_unique() == 3);
  Ival b(ctx.real(mpq_class(7, 2)), ctx.real(mpq_class(9, 2)));
  CHECK_FALSE(b.floor_unique().has_value());
  Ival neg = Ival::of_rational(mpq_class(-5, 2), prec);
  CHECK(*neg.floor_unique() == -3);
}

TEST_CASE("values recomputed at doubled precision agree") {
  RealContext ctx = make_context(120);
  RealContext ctx2 = make_context(240);
  HPReal a = ln(ctx.real(10)) / ln(ctx.real(mpq_class(31, 24)));
  HPReal b = ln(ctx2.real(10)) / ln(ctx2.real(mpq_class(31, 24)));
  CHECK(agree_to_digits(a, b, ctx.precision_digits() - 10));
}
