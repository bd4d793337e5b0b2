#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "chromaknn/array_mode.hpp"
#include "helpers.hpp"

using namespace chromaknn;

namespace {

std::vector<Color> random_colors(std::mt19937_64& rng, size_t n, int ncolors) {
  std::vector<Color> a(n);
  for (auto& c : a) c = static_cast<Color>(rng() % ncolors);
  return a;
}

}  // namespace

TEST_CASE("block table on a small array") {
  // r g r b r with block size 2
  BlockModeTable t({0, 1, 0, 2, 0}, 2);
  CHECK(t.size() == 5);
  CHECK(t.block_size() == 2);
  CHECK(t.block_count() == 3);

  auto span = t.block_span_mode(0, 2);
  CHECK(span.color == 0);
  CHECK(span.freq == 3);

  auto whole = t.mode(0, 4);
  CHECK(whole.color == 0);
  CHECK(whole.freq == 3);

  auto single = t.mode(1, 1);
  CHECK(single.color == 1);
  CHECK(single.freq == 1);

  CHECK(t.mode(1, 3).freq == 1);

  CHECK(t.color_count(0, 0, 4) == 3);
  CHECK(t.color_count(0, 1, 3) == 1);
  CHECK(t.color_count(2, 0, 2) == 0);
  CHECK(t.at(3) == 2);
  CHECK_THROWS_AS(t.mode(3, 1), std::out_of_range);
  CHECK_THROWS_AS(t.mode(0, 5), std::out_of_range);
}

TEST_CASE("default block size is about sqrt(n)") {
  std::vector<Color> a(100, 0);
  BlockModeTable t(std::move(a));
  CHECK(t.block_size() == 10);
  BlockModeTable t2(std::vector<Color>(7, 0));
  CHECK(t2.block_size() == 3);
}

TEST_CASE("degenerate color distributions") {
  BlockModeTable mono(std::vector<Color>(37, 4));
  for (long j = 0; j < 37; j += 5) {
    auto m = mono.mode(0, j);
    CHECK(m.color == 4);
    CHECK(m.freq == j + 1);
  }

  std::vector<Color> distinct(50);
  for (size_t i = 0; i < distinct.size(); ++i) distinct[i] = static_cast<Color>(i);
  BlockModeTable all_diff(std::move(distinct));
  auto m = all_diff.mode(10, 40);
  CHECK(m.freq == 1);
}

TEST_CASE("exhaustive agreement with brute force") {
  std::mt19937_64 rng(2026);
  for (int round = 0; round < 8; ++round) {
    size_t n = 8 + rng() % 56;
    int ncolors = 1 + static_cast<int>(rng() % 6);
    auto a = random_colors(rng, n, ncolors);
    BlockModeTable t(a);
    long budget = 4 * t.block_size() + 2;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i; j < n; ++j) {
        ModeQueryStats st;
        auto got = t.mode(static_cast<long>(i), static_cast<long>(j), &st);
        auto want = testutil::brute_array_mode(a, i, j);
        CHECK(got.freq == want.freq);
        CHECK(t.color_count(got.color, static_cast<long>(i), static_cast<long>(j)) ==
              got.freq);
        CHECK(st.candidate_scans <= budget);
      }
  }
}

TEST_CASE("threshold ladder for the approximate structure") {
  std::vector<Color> a{0, 0, 0};
  JumpListSet j(a, 0.5);
  CHECK(j.thresholds() == std::vector<long>{1, 2});

  auto l0 = j.jumps_at(0);
  REQUIRE(l0.size() == 2);
  CHECK(l0[0].pos == 0);
  CHECK(l0[0].threshold == 1);
  CHECK(l0[1].pos == 1);
  CHECK(l0[1].threshold == 2);

  auto ans = j.query(0, 2);
  CHECK(ans.color == 0);
  CHECK(ans.freq == 3);
  CHECK(ans.threshold == 2);

  auto first = j.query(0, 0);
  CHECK(first.freq == 1);
  CHECK(first.threshold == 1);
  CHECK(first.next_threshold == 2);
}

TEST_CASE("epsilon validation") {
  std::vector<Color> a{0, 1};
  CHECK_THROWS_AS(JumpListSet(a, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(JumpListSet(a, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(JumpListSet(a, -0.25), std::invalid_argument);
}

TEST_CASE("approximate frequency guarantee on random arrays") {
  std::mt19937_64 rng(4321);
  for (double eps : {0.1, 0.25, 0.5}) {
    for (int round = 0; round < 6; ++round) {
      size_t n = 16 + rng() % 120;
      int ncolors = 1 + static_cast<int>(rng() % 5);
      auto a = random_colors(rng, n, ncolors);
      BlockModeTable exact(a);
      JumpListSet approx(a, eps);
      for (int it = 0; it < 200; ++it) {
        long i = static_cast<long>(rng() % n);
        long j = static_cast<long>(rng() % n);
        if (i > j) std::swap(i, j);
        auto got = approx.query(i, j);
        long fstar = exact.mode(i, j).freq;
        CHECK(got.freq == exact.color_count(got.color, i, j));
        CHECK(got.freq >= static_cast<long>(std::ceil((1.0 - eps) * fstar)));
        CHECK(got.freq <= fstar);
        CHECK(fstar < got.next_threshold);
        CHECK(got.threshold <= got.freq);
      }
    }
  }
}

TEST_CASE("thresholds are strictly increasing and chained") {
  std::mt19937_64 rng(9);
  for (double eps : {0.1, 0.25, 0.5, 0.9}) {
    auto a = random_colors(rng, 500, 3);
    JumpListSet j(a, eps);
    const auto& th = j.thresholds();
    REQUIRE(!th.empty());
    CHECK(th.front() == 1);
    for (size_t t = 1; t < th.size(); ++t) {
      CHECK(th[t] > th[t - 1]);
      CHECK(th[t] <= 500);
      // consecutive thresholds close enough for the guarantee
      CHECK(static_cast<double>(th[t] - 1) * (1.0 - eps) <=
            static_cast<double>(th[t - 1]));
    }
  }
}
