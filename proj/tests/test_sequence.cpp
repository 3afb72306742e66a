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

#include <array>

#include "perrinpal/sequence.hpp"

using namespace perrinpal;

namespace {

// Independent oracle: companion-matrix power by repeated squaring.
struct Mat3 {
  mpz_class a[3][3];
  static Mat3 identity() {
    Mat3 m;
    for (int i = 0; i < 3; ++i) m.a[i][i] = 1;
    return m;
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r.a[i][j] += a[i][k] * o.a[k][j];
    return r;
  }
};

mpz_class perrin_matrix_oracle(std::uint64_t n) {
  Mat3 step;
  step.a[0][1] = 1;
  step.a[1][2] = 1;
  step.a[2][0] = 1;
  step.a[2][1] = 1;
  Mat3 acc = Mat3::identity();
  std::uint64_t e = n;
  while (e > 0) {
    if (e & 1) acc = acc * step;
    step = step * step;
    e >>= 1;
  }
  // state (P_0, P_1, P_2) = (3, 0, 2)
  return acc.a[0][0] * 3 + acc.a[0][1] * 0 + acc.a[0][2] * 2;
}

}  // namespace

TEST_CASE("the sequence starts 3, 0, 2, 3, 2, 5, 5, 7, 10, 12, 17, 22, 29, 39, 51") {
  const std::array<long, 15> expected{3, 0, 2, 3, 2, 5, 5, 7, 10, 12, 17, 22, 29, 39, 51};
  for (std::size_t n = 0; n < expected.size(); ++n) CHECK(perrin(n) == expected[n]);
  auto stream = perrin_stream(14);
  REQUIRE(stream.size() == 15);
  for (std::size_t n = 0; n < expected.size(); ++n) {
    CHECK(stream[n].index == n);
    CHECK(stream[n].value == expected[n]);
  }
}

TEST_CASE("recurrence agrees with the matrix-power oracle") {
  CHECK(perrin(100) == perrin_matrix_oracle(100));
  auto stream = perrin_stream(2000);
  for (std::uint64_t n = 0; n <= 2000; n += (n < 50 ? 1 : 37)) {
    CHECK(stream[n].value == perrin_matrix_oracle(n));
  }
}

TEST_CASE("perrin_stream shapes") {
  auto single = perrin_stream(0);
  REQUIRE(single.size() == 1);
  CHECK(single[0].value == 3);
  auto s = perrin_stream(700);
  REQUIRE(s.size() == 701);
  std::size_t digits = s[700].value.get_str().size();
  CHECK(digits >= 85);
  CHECK(digits <= 90);
}

TEST_CASE("binet error is tiny and within the stated envelope") {
  RealContext ctx = make_context(250);
  PerrinRoots roots = plastic_root(ctx, RootMode::corrected);

  HPReal e0 = binet_error(0, roots, ctx);
  CHECK(e0 == ctx.real(2));

  HPReal e11 = binet_error(11, roots, ctx);
  HPReal bound11 = ctx.real(3) / sqrt(pow_ui(roots.alpha, 11));
  CHECK(abs(e11) < bound11);

  HPReal e700 = binet_error(700, roots, ctx);
  CHECK(abs(e700) < ctx.real("1e-42"));
}

TEST_CASE("binet error bound holds for all n <= 1000") {
  RealContext ctx = make_context(250);
  PerrinRoots roots = plastic_root(ctx, RootMode::corrected);
  HPReal three = ctx.real(3);
  for (std::uint64_t n = 0; n <= 1000; ++n) {
    HPReal bound = three / sqrt(pow_ui(roots.alpha, n));
    if (!(abs(binet_error(n, roots, ctx)) < bound)) {
      FAIL("binet envelope broken at n = " << n);
    }
  }
}

TEST_CASE("growth bracket alpha^(n-2) <= P_n <= alpha^(n+1)") {
  RealContext ctx = make_context(250);
  PerrinRoots roots = plastic_root(ctx, RootMode::corrected);
  CHECK(growth_bounds_check(2, roots, ctx));
  CHECK(growth_bounds_check(700, roots, ctx));
  for (std::uint64_t n = 2; n <= 1000; ++n) {
    if (!growth_bounds_check(n, roots, ctx)) FAIL("growth bracket broken at n = " << n);
  }
}

TEST_CASE("analytic checks reject the replication constant and tiny contexts") {
  RealContext ctx = make_context(120);
  PerrinRoots rep = plastic_root(ctx, RootMode::paper_replication);
  CHECK_THROWS_AS(binet_error(5, rep, ctx), std::invalid_argument);
  CHECK_THROWS_AS(growth_bounds_check(5, rep, ctx), std::invalid_argument);
  CHECK_THROWS_AS(growth_bounds_check(1, plastic_root(ctx, RootMode::corrected), ctx),
                  std::invalid_argument);
  RealContext small = make_context(50);
  PerrinRoots roots = plastic_root(small, RootMode::corrected);
  CHECK_THROWS_AS(binet_error(1000, roots, small), precision_error);
}
