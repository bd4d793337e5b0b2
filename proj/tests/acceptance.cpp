// Release gate: one self-contained check per shipped guarantee. Each check
// prints a single PASS/FAIL line; the process exits nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chromaknn/cutting.hpp"
#include "chromaknn/dataset.hpp"
#include "chromaknn/disk_finder.hpp"
#include "chromaknn/oracle.hpp"
#include "chromaknn/pipeline.hpp"
#include "chromaknn/range_tree.hpp"

using namespace chromaknn;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  int id;
  bool pass;
  std::string detail;
};

std::vector<Criterion> g_results;

void record(int id, bool pass, const std::string& detail) {
  g_results.push_back({id, pass, detail});
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
}

double grid(std::mt19937_64& rng, double extent = 32.0) {
  long span = static_cast<long>(extent * 1024.0);
  long v = static_cast<long>(rng() % static_cast<unsigned long>(2 * span + 1)) - span;
  return static_cast<double>(v) / 1024.0;
}

// --- 1: chromatic queries vs brute force over random instances ------------

void criterion_equivalence() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(0xC1);
  long queries = 0, mismatches = 0;
  const int color_cfgs[] = {2, 8, -1};  // -1 picks ceil(sqrt(n))

  for (int cfg : color_cfgs) {
    for (int inst = 0; inst < 200; ++inst) {
      long n = 16 + static_cast<long>(rng() % (2000 - 16 + 1));
      int colors = cfg > 0 ? cfg : static_cast<int>(std::ceil(std::sqrt(n)));
      auto pts = make_points_1d(n, colors, rng());
      Pipeline1D pipe(pts);
      for (int qi = 0; qi < 5; ++qi) {
        double q = grid(rng);
        long k = 1 + static_cast<long>(rng() % n);
        auto got = pipe.query(q, k);
        auto want = oracle_chromatic(pts, q, k);
        ++queries;
        if (got.freq != want.mode_frequency || got.radius != want.kth_radius)
          ++mismatches;
      }
    }
  }

  const Metric metrics[] = {Metric::l2(), Metric::linf(), Metric::l1()};
  for (const Metric& metric : metrics) {
    for (int cfg : color_cfgs) {
      for (int inst = 0; inst < 200; ++inst) {
        long n = 16 + static_cast<long>(rng() % (1000 - 16 + 1));
        int colors = cfg > 0 ? cfg : static_cast<int>(std::ceil(std::sqrt(n)));
        auto pts = make_points_2d(n, colors, rng());
        // Coarse cutting: answers are exact for any r, and r=2 keeps the
        // 1800 builds inside the runtime budget.
        BuildOptions opt;
        opt.r = 2;
        Pipeline2D pipe(pts, metric, opt);
        for (int qi = 0; qi < 3; ++qi) {
          Point2 q{grid(rng), grid(rng)};
          long k = 1 + static_cast<long>(rng() % n);
          auto got = pipe.query(q, k);
          auto want = oracle_chromatic(pts, q, k, metric);
          ++queries;
          if (got.freq != want.mode_frequency || got.radius != want.kth_radius)
            ++mismatches;
        }
      }
    }
  }

  double secs = seconds_since(t0);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "random-instance equivalence: %ld queries, %ld mismatches, %.1fs",
                queries, mismatches, secs);
  record(1, mismatches == 0 && secs < 180.0, buf);
}

// --- 2: rank selection over two trees vs the sorted union ------------------

void criterion_rank_merge() {
  std::mt19937_64 rng(0xC2);
  long checks = 0, bad = 0, over_budget = 0;
  for (int pair = 0; pair < 100; ++pair) {
    size_t total = 2 + rng() % 255;
    size_t nr = rng() % (total + 1);
    std::set<double> uniq;
    while (uniq.size() < total) uniq.insert(grid(rng));
    std::vector<double> all(uniq.begin(), uniq.end());
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<double> r(all.begin(), all.begin() + nr);
    std::vector<double> b(all.begin() + nr, all.end());
    std::sort(r.begin(), r.end());
    std::sort(b.begin(), b.end());
    auto R = SizeTree::from_sorted(r);
    auto B = SizeTree::from_sorted(b);
    std::sort(all.begin(), all.end());

    auto vr = SplitView::whole(R);
    auto vb = SplitView::whole(B);
    TreeCursor cr{&vr, vr.right_root(), false, 0.0};
    TreeCursor cb{&vb, vb.right_root(), false, 0.0};
    long budget = 2 * (R.height() + B.height()) + 4;
    for (size_t k = 1; k <= total; ++k) {
      RankMergeStats st;
      double got = rank_merge(cr, cb, static_cast<long>(k), &st);
      ++checks;
      if (got != all[k - 1]) ++bad;
      if (st.comparisons > budget) ++over_budget;
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "two-tree rank selection: %ld ranks, %ld wrong, %ld over budget",
                checks, bad, over_budget);
  record(2, bad == 0 && over_budget == 0, buf);
}

// --- 3: exhaustive range-mode agreement --------------------------------------

void criterion_block_mode() {
  std::mt19937_64 rng(0xC3);
  long queries = 0, bad = 0, over_budget = 0;
  for (int inst = 0; inst < 50; ++inst) {
    long n = 1 + static_cast<long>(rng() % 512);
    int colors = 1 + static_cast<int>(rng() % 12);
    auto a = make_color_array(n, colors, rng());
    BlockModeTable table(a);
    long budget = 4 * table.block_size() + 2;

    for (long i = 0; i < n; ++i) {
      std::vector<long> counts(static_cast<size_t>(colors), 0);
      long best = 0;
      for (long j = i; j < n; ++j) {
        long c = ++counts[static_cast<size_t>(a[static_cast<size_t>(j)])];
        if (c > best) best = c;
        ModeQueryStats st;
        auto got = table.mode(i, j, &st);
        ++queries;
        if (got.freq != best || table.color_count(got.color, i, j) != got.freq) ++bad;
        if (st.candidate_scans > budget) ++over_budget;
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "exhaustive range modes: %ld queries, %ld wrong, %ld over budget",
                queries, bad, over_budget);
  record(3, bad == 0 && over_budget == 0, buf);
}

// --- 4: candidate scans grow like sqrt(n) ------------------------------------

double mean_scans(long n, std::uint64_t seed) {
  auto a = make_color_array(n, 8, seed);
  BlockModeTable table(a);
  std::mt19937_64 rng(seed ^ 0x5ca1ab1e);
  long total = 0;
  for (int it = 0; it < 1000; ++it) {
    long i = static_cast<long>(rng() % n);
    long j = static_cast<long>(rng() % n);
    if (i > j) std::swap(i, j);
    ModeQueryStats st;
    table.mode(i, j, &st);
    total += st.candidate_scans;
  }
  return static_cast<double>(total) / 1000.0;
}

void criterion_scan_scaling() {
  double big = mean_scans(4096, 0xC4);
  double small = mean_scans(1024, 0xC4);
  double ratio = big / small;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "scan scaling: mean %.1f at n=4096 vs %.1f at n=1024, ratio %.2f",
                big, small, ratio);
  record(4, ratio >= 1.6 && ratio <= 2.4, buf);
}

// --- 5: approximation guarantee ----------------------------------------------

void criterion_approx() {
  std::mt19937_64 rng(0xC5);
  long queries = 0, below_floor = 0, tight = 0, big_fstar = 0;
  for (double eps : {0.1, 0.25, 0.5}) {
    for (int inst = 0; inst < 4; ++inst) {
      long n = 2500;
      int colors[] = {2, 5, 12, 40};
      auto a = make_color_array(n, colors[inst], rng());
      BlockModeTable exact(a);
      JumpListSet approx(a, eps);
      for (int it = 0; it < 2500; ++it) {
        long i = static_cast<long>(rng() % n);
        long j = static_cast<long>(rng() % n);
        if (i > j) std::swap(i, j);
        auto got = approx.query(i, j);
        long fstar = exact.mode(i, j).freq;
        ++queries;
        long floor_req = static_cast<long>(std::ceil((1.0 - eps) * fstar));
        if (got.freq < floor_req) ++below_floor;
        if (fstar >= 10) {
          ++big_fstar;
          if (fstar < got.next_threshold) ++tight;  // within one threshold step
        }
      }
    }
  }
  double tight_frac = big_fstar > 0 ? static_cast<double>(tight) / big_fstar : 1.0;
  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "approximate modes: %ld queries, %ld below the (1-eps) floor, "
                "%.2f%% within one threshold step",
                queries, below_floor, 100.0 * tight_frac);
  record(5, below_floor == 0 && tight_frac >= 0.99, buf);
}

// --- 6: Linf radius search budget --------------------------------------------

void criterion_linf_radius() {
  std::mt19937_64 rng(0xC6);
  long n = 4096;
  auto pts = make_points_2d(n, 6, 0xC6C6);
  RangeTree2D tree(pts);
  long budget = 4 * static_cast<long>(std::ceil(std::log2(static_cast<double>(n) + 2.0)));
  long bad = 0, over = 0;
  for (int it = 0; it < 1000; ++it) {
    Point2 q{grid(rng), grid(rng)};
    long k = 1 + static_cast<long>(rng() % n);
    RadiusSearchStats st;
    double got = tree.kth_linf_radius(q, k, &st);
    if (got != oracle_kth_radius(pts, q, k, Metric::linf())) ++bad;
    if (st.counting_calls > budget) ++over;
  }
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "square radius search at n=4096: 1000 queries, %ld wrong, "
                "%ld over %ld counting calls",
                bad, over, budget);
  record(6, bad == 0 && over == 0, buf);
}

// --- 7: L2 finder exactness and sampling payoff ------------------------------

void criterion_disk_finder() {
  std::mt19937_64 rng(0xC7);
  long n = 2500;
  auto pts = make_points_2d(n, 5, 0xC7C7);
  long bad = 0, reported = 0, queries = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DiskFinder finder(pts, seed);
    for (int it = 0; it < 100; ++it) {
      Point2 q{grid(rng), grid(rng)};
      long k = 1 + static_cast<long>(rng() % n);
      FinderStats st;
      double got = finder.kth_l2_radius(q, k, &st);
      if (got != oracle_kth_radius(pts, q, k, Metric::l2())) ++bad;
      reported += st.annulus_reported;
      ++queries;
    }
  }
  double mean_annulus = static_cast<double>(reported) / static_cast<double>(queries);
  double cap = 3.0 * std::sqrt(static_cast<double>(n));
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "disk radius search: %ld queries, %ld wrong, mean annulus %.1f "
                "(cap %.1f)",
                queries, bad, mean_annulus, cap);
  record(7, bad == 0 && mean_annulus <= cap, buf);
}

// --- 8: cutting conflict bound -----------------------------------------------

void criterion_cutting() {
  std::mt19937_64 rng(0xC8);
  long capped = 0, leaf_bad = 0, query_over = 0, leaves_checked = 0, queries = 0;

  struct Cfg {
    long n;
    Metric metric;
  };
  const Cfg cfgs[] = {{2000, Metric::l2()}, {1500, Metric::linf()}};
  for (const Cfg& cfg : cfgs) {
    auto pts = make_points_2d(cfg.n, 7, rng());
    Pipeline2D pipe(pts, cfg.metric);
    const SurfaceCutting& cut = pipe.cutting();
    capped += cut.build_stats().capped_leaves;
    long tau = cut.tau();
    const auto& surfs = cut.surfaces();

    for (long i = 0; i < cut.leaf_count(); ++i) {
      auto leaf = cut.leaf(i);
      ++leaves_checked;
      std::set<int> expect;
      for (size_t s = 0; s < surfs.size(); ++s)
        if (classify_surface_box(surfs[s], leaf.box) == BoxCover::Partial)
          expect.insert(static_cast<int>(s));
      std::set<int> got(leaf.conflicts.begin(), leaf.conflicts.end());
      if (got != expect || static_cast<long>(got.size()) > tau) ++leaf_bad;
    }

    for (int it = 0; it < 300; ++it) {
      Point2 q{grid(rng), grid(rng)};
      long k = 1 + static_cast<long>(rng() % cfg.n);
      QueryCounters c;
      pipe.query(q, k, &c);
      ++queries;
      if (c.candidate_colors > tau + 1) ++query_over;
    }
  }
  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "cutting contract: %ld leaves audited, %ld capped, %ld conflict "
                "violations, %ld of %ld queries over the candidate bound",
                leaves_checked, capped, leaf_bad, query_over, queries);
  record(8, capped == 0 && leaf_bad == 0 && query_over == 0, buf);
}

// --- 9: traversal coloring equals naive coloring and does less work ----------

void criterion_coloring() {
  std::mt19937_64 rng(0xC9);
  long leaf_mismatch = 0;

  for (int inst = 0; inst < 50; ++inst) {
    long n = 200 + static_cast<long>(rng() % 500);
    bool planes = (inst % 2 == 0);
    auto pts = make_points_2d(n, 5, rng());
    std::vector<Surface> surfs;
    surfs.reserve(pts.size());
    for (const auto& p : pts)
      surfs.push_back(planes ? Surface::plane_of(p.pos, p.color, p.id)
                             : Surface::pyramid_of(p.pos, p.color, p.id));
    long r = 4 + static_cast<long>(rng() % 9);
    SurfaceCutting naive(surfs, r);
    SurfaceCutting trav = naive;
    naive.color_cells_naive();
    if (planes) {
      KdTree2D tree(pts);
      trav.color_cells_traversal(make_disk_symdiff_reporter(tree));
    } else {
      RangeTree2D tree(pts);
      trav.color_cells_traversal(make_square_symdiff_reporter(tree, pts));
    }
    for (long i = 0; i < naive.leaf_count(); ++i)
      if (naive.leaf(i).base_mode.freq != trav.leaf(i).base_mode.freq)
        ++leaf_mismatch;
  }

  // work comparison at n = 1000, r = 10, both surface families
  double worst_ratio = 1e9;
  for (int round = 0; round < 2; ++round) {
    bool planes = (round == 0);
    auto pts = make_points_2d(1000, 6, 0xC9C9 + static_cast<unsigned>(round));
    std::vector<Surface> surfs;
    for (const auto& p : pts)
      surfs.push_back(planes ? Surface::plane_of(p.pos, p.color, p.id)
                             : Surface::pyramid_of(p.pos, p.color, p.id));
    SurfaceCutting naive(surfs, 10);
    SurfaceCutting trav = naive;
    ColoringWork wn, wt;
    naive.color_cells_naive(&wn);
    if (planes) {
      KdTree2D tree(pts);
      trav.color_cells_traversal(make_disk_symdiff_reporter(tree), &wt);
    } else {
      RangeTree2D tree(pts);
      trav.color_cells_traversal(make_square_symdiff_reporter(tree, pts), &wt);
    }
    double ratio = static_cast<double>(wn.naive_scanned) /
                   static_cast<double>(std::max(wt.traversal_touched, 1L));
    worst_ratio = std::min(worst_ratio, ratio);
  }

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "incremental coloring: %ld leaf frequency mismatches over 50 "
                "instances, naive/traversal work ratio %.1fx at n=1000",
                leaf_mismatch, worst_ratio);
  record(9, leaf_mismatch == 0 && worst_ratio >= 2.0, buf);
}

// --- 10: array problems through the chromatic reduction ----------------------

void criterion_reductions() {
  std::mt19937_64 rng(0xCA);
  long mode_bad = 0;
  for (int inst = 0; inst < 20; ++inst) {
    long n = 16 + static_cast<long>(rng() % 985);
    int colors = 1 + static_cast<int>(rng() % 10);
    auto a = make_color_array(n, colors, rng());
    auto pipe = pipeline_from_array(a);
    BlockModeTable direct(a);
    for (int it = 0; it < 50; ++it) {
      long i = static_cast<long>(rng() % n);
      long j = static_cast<long>(rng() % n);
      if (i > j) std::swap(i, j);
      auto via = array_mode_via_chromatic(pipe, i, j);
      auto want = direct.mode(i, j);
      if (via.freq != want.freq) ++mode_bad;
    }
  }

  long count_bad = 0, count_over = 0;
  long n = 1024;
  auto pts = make_points_1d(n, 6, 0xCACA);
  Pipeline1D pipe(pts);
  long budget = static_cast<long>(std::ceil(std::log2(static_cast<double>(n) + 1.0))) + 1;
  for (int it = 0; it < 1000; ++it) {
    double q = grid(rng);
    double r = std::abs(grid(rng));
    long calls = 0;
    long got = pipe.count_in_ball(q, r, &calls);
    if (got != oracle_range_count(pts, Ball1{q, r})) ++count_bad;
    if (calls > budget) ++count_over;
  }

  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "reductions: %ld of 1000 range modes wrong, %ld of 1000 ball "
                "counts wrong, %ld over %ld radius searches",
                mode_bad, count_bad, count_over, budget);
  record(10, mode_bad == 0 && count_bad == 0 && count_over == 0, buf);
}

// --- 11: constant-time mode tracker differential ------------------------------

void criterion_tracker() {
  std::mt19937_64 rng(0xCB);
  const int ncolors = 40;
  FrequencyTracker t(ncolors, 100000);
  std::vector<long> counts(ncolors, 0);
  long bad = 0;
  for (int op = 0; op < 100000; ++op) {
    Color c = static_cast<Color>(rng() % ncolors);
    if (counts[c] > 0 && rng() % 2 == 0) {
      t.decrement(c);
      --counts[c];
    } else {
      t.increment(c);
      ++counts[c];
    }
    long fstar = *std::max_element(counts.begin(), counts.end());
    auto m = t.mode();
    if (t.max_frequency() != fstar) ++bad;
    if (m.freq != fstar) ++bad;
    if (fstar > 0 && counts[m.color] != fstar) ++bad;
    if (t.bucket_of(c) != counts[c]) ++bad;
    if (op % 16 == 0) {
      for (Color cc = 0; cc < ncolors; ++cc)
        if (t.bucket_of(cc) != counts[cc]) ++bad;
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "mode tracker differential: 100000 operations, %ld disagreements",
                bad);
  record(11, bad == 0, buf);
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  criterion_equivalence();
  criterion_rank_merge();
  criterion_block_mode();
  criterion_scan_scaling();
  criterion_approx();
  criterion_linf_radius();
  criterion_disk_finder();
  criterion_cutting();
  criterion_coloring();
  criterion_reductions();
  criterion_tracker();

  int failed = 0;
  for (const auto& c : g_results)
    if (!c.pass) ++failed;
  std::printf("%d of %zu criteria passed (%.1fs total)\n",
              static_cast<int>(g_results.size()) - failed, g_results.size(),
              seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
