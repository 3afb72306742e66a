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

#include <vector>

#include "perrinpal/contfrac.hpp"
#include "perrinpal/reduction.hpp"
#include "perrinpal/roots.hpp"

using namespace perrinpal;

namespace {

Ival tau_for(const RealContext& ctx, RootMode mode) {
  PerrinRoots roots = plastic_root(ctx, mode);
  return div(ln_iv(Ival::of_long(10, ctx.precision_bits())), ln_iv(roots.alpha_enc));
}

mpq_class fold_back(const std::vector<mpz_class>& quotients) {
  mpq_class acc(quotients.back());
  for (auto it = std::next(quotients.rbegin()); it != quotients.rend(); ++it) {
    acc = mpq_class(*it) + 1 / acc;
  }
  return acc;
}

// low-precision oracle prefixes for tau = log 10 / log alpha
const std::vector<long> kTauCorrectedPrefix{8, 5, 3, 3, 1, 5, 1, 8, 4, 6, 1, 4, 1,
                                            1, 1, 9, 1, 4, 4, 9, 1, 5, 1, 1, 1};
const std::vector<long> kTauReplicationPrefix{8, 1, 312, 1, 11, 1, 199, 1, 1, 2, 6, 1, 3,
                                              2, 1, 8,   1, 11, 3, 6,  1, 1, 40,  1, 2};

}  // namespace

TEST_CASE("golden ratio expands to all ones and Fibonacci convergents") {
  RealContext ctx = make_context(120);
  mpfr_prec_t prec = ctx.precision_bits();
  Ival golden = div(add(Ival::of_long(1, prec), sqrt_iv(Ival::of_long(5, prec))),
                    Ival::of_long(2, prec));
  CfExpansion cf = cf_expand(golden, 50);
  REQUIRE(cf.quotients.size() == 50);
  for (const auto& a : cf.quotients) CHECK(a == 1);

  auto convs = convergents(golden, 6);
  REQUIRE(convs.size() == 6);
  long fib_p[] = {1, 2, 3, 5, 8, 13};
  long fib_q[] = {1, 1, 2, 3, 5, 8};
  for (int i = 0; i < 6; ++i) {
    CHECK(convs[i].p == fib_p[i]);
    CHECK(convs[i].q == fib_q[i]);
  }

  Convergent first = first_convergent_with(golden, 4);
  CHECK(first.p == 8);
  CHECK(first.q == 5);
}

TEST_CASE("the first convergent is floor(x)/1") {
  RealContext ctx = make_context(80);
  for (RootMode mode : {RootMode::corrected, RootMode::paper_replication}) {
    auto convs = convergents(tau_for(ctx, mode), 1);
    REQUIRE(convs.size() == 1);
    CHECK(convs[0].p == 8);  // tau is 8.19 / 8.997 in the two modes
    CHECK(convs[0].q == 1);
  }
}

TEST_CASE("tau expansions match the low-precision oracles") {
  RealContext ctx = make_context(150);
  CfExpansion corr = cf_expand(tau_for(ctx, RootMode::corrected), 25);
  REQUIRE(corr.quotients.size() == kTauCorrectedPrefix.size());
  for (std::size_t i = 0; i < kTauCorrectedPrefix.size(); ++i) {
    CHECK(corr.quotients[i] == kTauCorrectedPrefix[i]);
  }
  CfExpansion rep = cf_expand(tau_for(ctx, RootMode::paper_replication), 25);
  REQUIRE(rep.quotients.size() == kTauReplicationPrefix.size());
  for (std::size_t i = 0; i < kTauReplicationPrefix.size(); ++i) {
    CHECK(rep.quotients[i] == kTauReplicationPrefix[i]);
  }
}

TEST_CASE("determinant identity and approximation quality hold") {
  RealContext ctx = make_context(400);
  for (RootMode mode : {RootMode::corrected, RootMode::paper_replication}) {
    Ival tau = tau_for(ctx, mode);
    auto convs = convergents(tau, 101);
    REQUIRE(convs.size() == 101);
    mpz_class pm1 = 1, qm1 = 0;  // p_{-1}, q_{-1}
    for (std::size_t k = 0; k < convs.size(); ++k) {
      mpz_class det = convs[k].p * qm1 - pm1 * convs[k].q;
      CHECK(det == (k % 2 == 0 ? -1 : 1));
      pm1 = convs[k].p;
      qm1 = convs[k].q;
    }
    // |x - p/q| < 1/(q_k q_{k+1}) < 1/q_k^2
    HPReal x = tau.mid();
    for (std::size_t k = 0; k + 1 < 20; ++k) {
      HPReal err = abs(x - ctx.real(mpq_class(convs[k].p, convs[k].q)));
      HPReal cap = ctx.real(1) / ctx.real(mpz_class(convs[k].q * convs[k + 1].q));
      CHECK(err < cap);
    }
  }
}

TEST_CASE("folding certified quotients reproduces the convergent") {
  RealContext ctx = make_context(200);
  Ival tau = tau_for(ctx, RootMode::corrected);
  CfExpansion cf = cf_expand(tau, 40);
  auto convs = convergents(tau, 40);
  mpq_class folded = fold_back(cf.quotients);
  CHECK(folded == mpq_class(convs.back().p, convs.back().q));
}

TEST_CASE("replication mode reproduces the published 51-digit convergent") {
  RealContext ctx = make_context(1000);
  mpz_class six_m = 6 * default_big_m();
  Convergent c = first_convergent_with(tau_for(ctx, RootMode::paper_replication), six_m);
  CHECK(c.q.get_str() == "362926510191645833704423315164618426146198842188725");
  CHECK(c.p.get_str() == "3265182491485655981489358337246995432669831208061478");
  CHECK(c.index == 87);
}

TEST_CASE("corrected mode yields its own recorded convergent past 6M") {
  RealContext ctx = make_context(1000);
  mpz_class six_m = 6 * default_big_m();
  Convergent c = first_convergent_with(tau_for(ctx, RootMode::corrected), six_m);
  // regression baseline from the first verified run
  CHECK(c.q.get_str() == "21695574963444524513646677911090250505443859600601");
  CHECK(c.p.get_str() == "177652856036642165557187989663314255133456297895465");
  CHECK(c.q > six_m);
}

TEST_CASE("doubling the context leaves certified quotients unchanged") {
  RealContext a = make_context(200);
  RealContext b = make_context(400);
  CfExpansion ca = cf_expand(tau_for(a, RootMode::corrected), 100);
  CfExpansion cb = cf_expand(tau_for(b, RootMode::corrected), 100);
  REQUIRE(ca.quotients.size() == 100);
  REQUIRE(cb.quotients.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) CHECK(ca.quotients[i] == cb.quotients[i]);
}

TEST_CASE("precision exhaustion ends the stream with a marker") {
  RealContext ctx = make_context(50);
  CfExpansion cf = cf_expand(tau_for(ctx, RootMode::corrected), 500);
  CHECK(cf.termination == CfTermination::precision_exhausted);
  CHECK(cf.quotients.size() < 500);
  CHECK(cf.quotients.size() > 20);  // still certifies a decent prefix
  CHECK_THROWS_AS(
      first_convergent_with(tau_for(ctx, RootMode::corrected), 6 * default_big_m() * default_big_m()),
      precision_error);
}

TEST_CASE("exact dyadic rationals terminate cleanly") {
  // 7/4 is exactly representable, so the point interval is the exact value
  Ival x = Ival::point(HPReal::of_mpq(mpq_class(7, 4), 64));
  CfExpansion cf = cf_expand(x, 10);
  CHECK(cf.termination == CfTermination::exact_rational);
  REQUIRE(cf.quotients.size() == 3);
  CHECK(cf.quotients[0] == 1);
  CHECK(cf.quotients[1] == 1);
  CHECK(cf.quotients[2] == 3);
  CHECK(fold_back(cf.quotients) == mpq_class(7, 4));
}
