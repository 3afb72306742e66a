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

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace perrinpal {

/// The three-block digit shape d1^ell d2^m d1^ell. The degenerate two-block
/// case d1^(2 ell) is encoded as m = 0 with d2 absent; it is the only
/// reading under which the two-digit solution 22 is expressible, since a
/// two-block concatenation with distinct digits can never be a palindrome.
struct PalindromicPattern {
  int d1 = 0;
  std::optional<int> d2;
  long ell = 0;
  long m = 0;

  bool valid() const {
    if (d1 < 1 || d1 > 9 || ell < 1 || m < 0) return false;
    if (d2.has_value() && (*d2 < 0 || *d2 > 9)) return false;
    return d2.has_value() ? m >= 1 : m == 0;
  }

  long total_digits() const { return 2 * ell + m; }
};

inline mpz_class pow10_z(long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

/// d * (10^len - 1) / 9
inline mpz_class repdigit_value(int d, long len) {
  if (d < 0 || d > 9 || len < 1) throw std::invalid_argument("repdigit_value: bad digit or length");
  return d * (pow10_z(len) - 1) / 9;
}

/// Closed-form value of a pattern:
///   (d1*10^(2l+m) - (d1-d2)*10^(l+m) + (d1-d2)*10^l - d1) / 9,
/// degenerating to the plain repdigit of length 2l when m = 0.
inline mpz_class concat3(const PalindromicPattern& p) {
  if (!p.valid()) throw std::invalid_argument("concat3: malformed pattern");
  if (p.m == 0) return repdigit_value(p.d1, 2 * p.ell);
  mpz_class diff = p.d1 - *p.d2;
  mpz_class num = p.d1 * pow10_z(2 * p.ell + p.m) - diff * pow10_z(p.ell + p.m) +
                  diff * pow10_z(p.ell) - p.d1;
  mpz_class r;
  mpz_divexact_ui(r.get_mpz_t(), num.get_mpz_t(), 9);
  return r;
}

inline bool is_palindrome(const mpz_class& n) {
  if (sgn(n) < 0) throw std::invalid_argument("is_palindrome: negative input");
  std::string s = n.get_str();
  return std::equal(s.begin(), s.begin() + s.size() / 2, s.rbegin());
}

namespace detail {

inline bool all_same(const std::string& s, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin + 1; i < end; ++i) {
    if (s[i] != s[begin]) return false;
  }
  return true;
}

/// Maximal-ell three-block decomposition with m >= 1, if any.
inline std::optional<PalindromicPattern> match_three_block(const std::string& s) {
  const long len = static_cast<long>(s.size());
  for (long ell = (len - 1) / 2; ell >= 1; --ell) {
    long m = len - 2 * ell;
    if (s[0] == '0') break;
    if (!all_same(s, 0, ell)) continue;
    if (!std::equal(s.begin(), s.begin() + ell, s.end() - ell)) continue;
    if (!all_same(s, ell, ell + m)) continue;
    return PalindromicPattern{s[0] - '0', s[ell] - '0', ell, m};
  }
  return std::nullopt;
}

}  // namespace detail

/// The maximal-ell pattern whose concat3 equals N, degenerate two-block
/// patterns included (an even-length repdigit reports m = 0 rather than the
/// shorter three-block splits of the same string).
inline std::optional<PalindromicPattern> match_pattern(const mpz_class& N) {
  if (sgn(N) < 1) throw std::invalid_argument("match_pattern: requires N >= 1");
  std::string s = N.get_str();
  const long len = static_cast<long>(s.size());
  if (len >= 2 && len % 2 == 0 && detail::all_same(s, 0, s.size())) {
    return PalindromicPattern{s[0] - '0', std::nullopt, len / 2, 0};
  }
  return detail::match_three_block(s);
}

struct SearchHit {
  std::uint64_t index;
  mpz_class value;
  PalindromicPattern pattern;
};

namespace detail {

inline void scan_range(std::uint64_t begin, std::uint64_t end, mpz_class a, mpz_class b,
                       mpz_class c, bool strict, std::vector<SearchHit>& hits) {
  // (a, b, c) = (P_begin, P_begin+1, P_begin+2)
  for (std::uint64_t n = begin; n < end; ++n) {
    if (n >= 3) {
      std::optional<PalindromicPattern> pat;
      if (strict) {
        if (sgn(a) > 0) pat = match_three_block(a.get_str());
      } else {
        if (sgn(a) > 0) pat = match_pattern(a);
      }
      if (pat) {
        if (concat3(*pat) != a) throw std::logic_error("search: pattern/value mismatch");
        hits.push_back({n, a, *pat});
      }
    }
    mpz_class next = a + b;
    a = b;
    b = c;
    c = next;
  }
}

}  // namespace detail

/// Scan P_3 .. P_n_max for palindromic concatenations. strict_three_block
/// keeps the literal ell >= 1, m >= 1 shape; the default reading also admits
/// the degenerate two-block case. Partitioned across `jobs` workers and
/// merged in index order.
inline std::vector<SearchHit> search_low_range(std::uint64_t n_max, bool strict_three_block,
                                               unsigned jobs = 1) {
  if (n_max < 2) throw std::invalid_argument("search_low_range: requires n_max >= 2");
  jobs = std::max(1u, jobs);
  const std::uint64_t total = n_max + 1;
  const std::uint64_t chunk = std::max<std::uint64_t>(64, total / jobs + 1);

  // Seed each worker's rolling window sequentially, then scan in parallel.
  struct Segment {
    std::uint64_t begin, end;
    mpz_class a, b, c;
    std::vector<SearchHit> hits;
  };
  std::vector<Segment> segments;
  {
    mpz_class a = 3, b = 0, c = 2;
    std::uint64_t n = 0;
    while (n < total) {
      Segment s;
      s.begin = n;
      s.end = std::min<std::uint64_t>(total, n + chunk);
      s.a = a;
      s.b = b;
      s.c = c;
      for (std::uint64_t k = n; k < s.end; ++k) {
        mpz_class next = a + b;
        a = b;
        b = c;
        c = next;
      }
      n = s.end;
      segments.push_back(std::move(s));
    }
  }

  auto run = [&](Segment& s) {
    detail::scan_range(s.begin, s.end, s.a, s.b, s.c, strict_three_block, s.hits);
  };
  if (segments.size() == 1 || jobs == 1) {
    for (auto& s : segments) run(s);
  } else {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex mu;
    for (unsigned j = 0; j < std::min<std::size_t>(jobs, segments.size()); ++j) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> g(mu);
            if (next >= segments.size()) return;
            i = next++;
          }
          run(segments[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<SearchHit> out;
  for (auto& s : segments) {
    for (auto& h : s.hits) out.push_back(std::move(h));
  }
  return out;
}

}  // namespace perrinpal
