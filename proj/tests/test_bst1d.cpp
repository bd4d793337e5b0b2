#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "chromaknn/bst1d.hpp"
#include "chromaknn/oracle.hpp"
#include "helpers.hpp"

using namespace chromaknn;

namespace {

void walk(const SplitView& v, int ref, std::vector<double>& out) {
  if (ref == -1) return;
  walk(v, v.left(ref), out);
  out.push_back(v.key(ref));
  walk(v, v.right(ref), out);
}

std::vector<double> half_keys(const SplitView& v, bool left_half) {
  std::vector<double> out;
  walk(v, left_half ? v.left_root() : v.right_root(), out);
  return out;
}

SizeTree tree_of(std::vector<double> keys) {
  std::sort(keys.begin(), keys.end());
  return SizeTree::from_sorted(keys);
}

}  // namespace

TEST_CASE("balanced tree construction") {
  auto t = tree_of({1.0, 2.0, 3.0});
  CHECK(t.size() == 3);
  CHECK(t.node(t.root()).key == 2.0);
  CHECK(t.height() == 2);
  CHECK(t.inorder() == std::vector<double>{1.0, 2.0, 3.0});

  auto t7 = tree_of({1, 2, 3, 4, 5, 6, 7});
  CHECK(t7.height() == 3);

  SizeTree empty;
  CHECK(empty.empty());
  CHECK(empty.size() == 0);

  std::vector<double> bad{3.0, 1.0};
  CHECK_THROWS_AS(SizeTree::from_sorted(bad), std::invalid_argument);
}

TEST_CASE("split partitions without mutating the source") {
  auto t = tree_of({1.0, 2.0, 3.0, 10.0});
  auto before = t.inorder();

  SplitView mid(t, 2.5);
  CHECK(half_keys(mid, true) == std::vector<double>{1.0, 2.0});
  CHECK(half_keys(mid, false) == std::vector<double>{3.0, 10.0});
  CHECK(mid.size_of(mid.left_root()) == 2);
  CHECK(mid.size_of(mid.right_root()) == 2);
  CHECK(mid.copied_nodes() <= t.height() + 1);

  SplitView at_key(t, 3.0);  // pivot equal to a key: the key goes right
  CHECK(half_keys(at_key, true) == std::vector<double>{1.0, 2.0});
  CHECK(half_keys(at_key, false) == std::vector<double>{3.0, 10.0});

  SplitView low(t, 0.5);
  CHECK(low.left_root() == -1);
  CHECK(half_keys(low, false).size() == 4);

  SplitView high(t, 11.0);
  CHECK(high.right_root() == -1);
  CHECK(half_keys(high, true).size() == 4);

  CHECK(t.inorder() == before);

  auto w = SplitView::whole(t);
  CHECK(w.left_root() == -1);
  CHECK(half_keys(w, false) == before);
  CHECK(w.copied_nodes() == 0);
}

TEST_CASE("splits preserve order and size on random trees") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 200; ++it) {
    size_t n = 1 + rng() % 128;
    std::set<double> uniq;
    while (uniq.size() < n) uniq.insert(testutil::grid_coord(rng));
    std::vector<double> keys(uniq.begin(), uniq.end());
    auto t = SizeTree::from_sorted(keys);
    double pivot = testutil::grid_coord(rng);

    SplitView v(t, pivot);
    auto l = half_keys(v, true);
    auto r = half_keys(v, false);
    CHECK(l.size() + r.size() == n);
    for (double x : l) CHECK(x < pivot);
    for (double x : r) CHECK(x >= pivot);
    CHECK(std::is_sorted(l.begin(), l.end()));
    CHECK(std::is_sorted(r.begin(), r.end()));
    CHECK(t.inorder() == keys);
    CHECK(v.copied_nodes() <= t.height() + 1);
  }
}

TEST_CASE("rank selection over two trees") {
  auto R = tree_of({1.0, 3.0, 5.0});
  auto B = tree_of({2.0, 4.0, 6.0});
  auto vr = SplitView::whole(R);
  auto vb = SplitView::whole(B);
  TreeCursor cr{&vr, vr.right_root(), false, 0.0};
  TreeCursor cb{&vb, vb.right_root(), false, 0.0};

  CHECK(rank_merge(cr, cb, 4) == 4.0);
  for (long k = 1; k <= 6; ++k) CHECK(rank_merge(cr, cb, k) == static_cast<double>(k));

  auto single = tree_of({1.0});
  SizeTree none;
  auto vs = SplitView::whole(single);
  auto vn = SplitView::whole(none);
  TreeCursor cs{&vs, vs.right_root(), false, 0.0};
  TreeCursor cn{&vn, vn.right_root(), false, 0.0};
  CHECK(rank_merge(cs, cn, 1) == 1.0);
  CHECK(rank_merge(cn, cs, 1) == 1.0);

  auto lowhalf = tree_of({1, 2, 3, 4, 5, 6, 7, 8});
  auto highhalf = tree_of({9, 10, 11, 12, 13, 14, 15, 16});
  auto vl = SplitView::whole(lowhalf);
  auto vh = SplitView::whole(highhalf);
  TreeCursor cl{&vl, vl.right_root(), false, 0.0};
  TreeCursor ch{&vh, vh.right_root(), false, 0.0};
  CHECK(rank_merge(cl, ch, 12) == 12.0);
}

TEST_CASE("rank selection equals the sorted union, comparisons bounded") {
  std::mt19937_64 rng(77);
  for (int it = 0; it < 60; ++it) {
    size_t nr = rng() % 40;
    size_t nb = 1 + rng() % 40;
    std::set<double> uniq;
    while (uniq.size() < nr + nb) uniq.insert(testutil::grid_coord(rng));
    std::vector<double> all(uniq.begin(), uniq.end());
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<double> r(all.begin(), all.begin() + nr);
    std::vector<double> b(all.begin() + nr, all.end());
    auto R = tree_of(r);
    auto B = tree_of(b);
    std::sort(all.begin(), all.end());

    auto vr = SplitView::whole(R);
    auto vb = SplitView::whole(B);
    TreeCursor cr{&vr, vr.right_root(), false, 0.0};
    TreeCursor cb{&vb, vb.right_root(), false, 0.0};
    long budget = 2 * (R.height() + B.height()) + 4;
    for (size_t k = 1; k <= all.size(); ++k) {
      RankMergeStats st;
      CHECK(rank_merge(cr, cb, static_cast<long>(k), &st) == all[k - 1]);
      CHECK(st.comparisons <= budget);
    }
  }
}

TEST_CASE("k-th absolute distance around a query") {
  auto t = tree_of({1.0, 2.0, 3.0, 10.0});
  RankMergeStats st;
  auto r2 = find_radius_1d(t, 2.5, 2, &st);
  CHECK(r2.radius == 0.5);
  CHECK(r2.lo == 2.0);
  CHECK(r2.hi == 3.0);
  CHECK(st.comparisons <= 4 * t.height() + 4);

  CHECK(find_radius_1d(t, 2.5, 4).radius == 7.5);
  auto exact = find_radius_1d(t, 1.0, 1);
  CHECK(exact.radius == 0.0);
  CHECK(exact.lo == 1.0);
  CHECK(exact.hi == 1.0);
  CHECK_THROWS_AS(find_radius_1d(t, 2.5, 0), std::out_of_range);
  CHECK_THROWS_AS(find_radius_1d(t, 2.5, 5), std::out_of_range);
}

TEST_CASE("k-th distance agrees with brute force for every k") {
  std::mt19937_64 rng(555);
  for (int it = 0; it < 40; ++it) {
    size_t n = 1 + rng() % 200;
    std::vector<ColoredPoint1> pts(n);
    std::vector<double> keys(n);
    for (size_t i = 0; i < n; ++i) {
      keys[i] = testutil::grid_coord(rng);
      pts[i] = {keys[i], 0, static_cast<int>(i)};
    }
    std::sort(keys.begin(), keys.end());
    auto t = SizeTree::from_sorted(keys);
    double q = testutil::grid_coord(rng);
    for (long k = 1; k <= static_cast<long>(n); ++k) {
      RankMergeStats st;
      auto res = find_radius_1d(t, q, k, &st);
      CHECK(res.radius == oracle_kth_radius(pts, q, k));
      CHECK(res.lo == q - res.radius);
      CHECK(res.hi == q + res.radius);
      CHECK(st.comparisons <= 4 * t.height() + 4);
    }
  }
}
