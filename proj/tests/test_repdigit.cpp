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
#include <string>

#include "perrinpal/repdigit.hpp"

using namespace perrinpal;

namespace {

// String-assembly oracle for patterns.
mpz_class assemble(const PalindromicPattern& p) {
  std::string s(p.ell, char('0' + p.d1));
  if (p.d2) s += std::string(p.m, char('0' + *p.d2));
  s += std::string(p.ell, char('0' + p.d1));
  return mpz_class(s);
}

}  // namespace

TEST_CASE("repdigit_value basics") {
  CHECK(repdigit_value(7, 3) == 777);
  CHECK(repdigit_value(1, 1) == 1);
  CHECK(repdigit_value(9, 5) == 99999);
  CHECK(repdigit_value(0, 4) == 0);
  CHECK_THROWS_AS(repdigit_value(10, 1), std::invalid_argument);
  CHECK_THROWS_AS(repdigit_value(3, 0), std::invalid_argument);
}

TEST_CASE("concat3 closed form equals string assembly") {
  CHECK(concat3({1, 5, 1, 1}) == 151);
  CHECK(concat3({6, 1, 1, 1}) == 616);
  CHECK(concat3({2, 7, 2, 1}) == 22722);
  CHECK(concat3({2, std::nullopt, 1, 0}) == 22);
  CHECK_THROWS_AS(concat3({2, std::nullopt, 1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(concat3({0, 1, 1, 1}), std::invalid_argument);
}

TEST_CASE("concat3 agrees with assembly on the whole small grid") {
  long cases = 0;
  for (int d1 = 1; d1 <= 9; ++d1) {
    for (long ell = 1; ell <= 4; ++ell) {
      PalindromicPattern degenerate{d1, std::nullopt, ell, 0};
      CHECK(concat3(degenerate) == assemble(degenerate));
      ++cases;
      for (int d2 = 0; d2 <= 9; ++d2) {
        for (long m = 1; m <= 4; ++m) {
          PalindromicPattern p{d1, d2, ell, m};
          mpz_class v = concat3(p);
          CHECK(v == assemble(p));
          // strictly above 10^(2l+m-1): the leading digit is nonzero
          CHECK(v > pow10_z(p.total_digits() - 1));
          // round-trip through match_pattern reproduces the same value
          auto back = match_pattern(v);
          REQUIRE(back.has_value());
          CHECK(concat3(*back) == v);
          ++cases;
        }
      }
    }
  }
  CHECK(cases == 9 * 4 * (1 + 10 * 4));
}

TEST_CASE("match_pattern picks the maximal outer block") {
  auto p = match_pattern(mpz_class(121));
  REQUIRE(p.has_value());
  CHECK(p->d1 == 1);
  CHECK(p->d2 == 2);
  CHECK(p->ell == 1);
  CHECK(p->m == 1);

  auto deg = match_pattern(mpz_class(22));
  REQUIRE(deg.has_value());
  CHECK(deg->d1 == 2);
  CHECK_FALSE(deg->d2.has_value());
  CHECK(deg->ell == 1);
  CHECK(deg->m == 0);

  CHECK_FALSE(match_pattern(mpz_class(123)).has_value());
  CHECK_THROWS_AS(match_pattern(mpz_class(0)), std::invalid_argument);

  auto widest = match_pattern(mpz_class(77777));
  REQUIRE(widest.has_value());
  CHECK(widest->ell == 2);
  CHECK(widest->m == 1);

  auto even_rep = match_pattern(mpz_class(4444));
  REQUIRE(even_rep.has_value());
  CHECK(even_rep->m == 0);
  CHECK(even_rep->ell == 2);
}

TEST_CASE("is_palindrome") {
  CHECK(is_palindrome(mpz_class(22)));
  CHECK_FALSE(is_palindrome(mpz_class(123)));
  CHECK(is_palindrome(mpz_class(7)));
  CHECK(is_palindrome(mpz_class(0)));
  CHECK_THROWS_AS(is_palindrome(mpz_class(-5)), std::invalid_argument);
}

TEST_CASE("non-palindromes never match") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(1, 100000000);
  int checked = 0;
  while (checked < 200) {
    mpz_class n(d(rng));
    if (is_palindrome(n)) continue;
    CHECK_FALSE(match_pattern(n).has_value());
    ++checked;
  }
}

TEST_CASE("two distinct repdigit blocks cannot form a palindrome") {
  for (int d1 = 1; d1 <= 9; ++d1) {
    for (int d2 = 0; d2 <= 9; ++d2) {
      if (d1 == d2) continue;
      for (long ell = 1; ell <= 3; ++ell) {
        for (long m = 1; m <= 3; ++m) {
          std::string s(ell, char('0' + d1));
          s += std::string(m, char('0' + d2));
          CHECK_FALSE(is_palindrome(mpz_class(s)));
        }
      }
    }
  }
}

TEST_CASE("low-range search finds exactly 22") {
  auto hits = search_low_range(700, false);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].index == 11);
  CHECK(hits[0].value == 22);
  CHECK(hits[0].pattern.m == 0);
  CHECK_FALSE(hits[0].pattern.d2.has_value());

  auto short_hits = search_low_range(14, false);
  REQUIRE(short_hits.size() == 1);
  CHECK(short_hits[0].value == 22);

  CHECK(search_low_range(700, true).empty());
  CHECK_THROWS_AS(search_low_range(1, false), std::invalid_argument);
}

TEST_CASE("search partitioning does not change the result") {
  auto a = search_low_range(1500, false, 1);
  auto b = search_low_range(1500, false, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].index == b[i].index);
    CHECK(a[i].value == b[i].value);
  }
}
