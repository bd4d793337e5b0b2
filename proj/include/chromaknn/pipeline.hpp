#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chromaknn/array_mode.hpp"
#include "chromaknn/bst1d.hpp"
#include "chromaknn/cutting.hpp"
#include "chromaknn/disk_finder.hpp"
#include "chromaknn/oracle.hpp"
#include "chromaknn/range_tree.hpp"

namespace chromaknn {

struct ChromaticAnswer {
  Color color = -1;
  long freq = 0;
  double radius = 0.0;
};

// Work counters accumulated over one query; every field is a count of
// elementary probes in the relevant structure, not wall time.
struct QueryCounters {
  long rank_comparisons = 0;  // 1D radius search key comparisons
  long mode_scans = 0;        // 1D mode table candidate scans
  long counting_calls = 0;    // 2D radius search counting probes
  long annulus_reported = 0;  // 2D L2 bracketing annulus output size
  long candidate_colors = 0;  // 2D cell query colors counted exactly
  bool oracle_fallback = false;
};

struct BuildOptions {
  long r = 0;           // cutting parameter; 0 picks ceil(n^(1/3))
  int depth_cap = 40;
  RangeTree2D::FanoutMode fanout = RangeTree2D::FanoutMode::Binary;
  double delta = 0.25;  // fanout exponent when fanout == Delta
  std::uint64_t seed = 1;
  double epsilon = 0.0;  // > 0 additionally builds approximate 1D mode lists
};

// Chromatic k-nearest-neighbor queries on the line: a size-augmented search
// tree finds the k-th distance, then an exact range-mode table answers the
// color over the index interval the ball spans.
class Pipeline1D {
 public:
  explicit Pipeline1D(std::vector<ColoredPoint1> pts, BuildOptions opts = {});

  long size() const { return static_cast<long>(xs_.size()); }
  int color_bound() const { return table_->color_bound(); }

  ChromaticAnswer query(double q, long k, QueryCounters* counters = nullptr) const;
  // Approximate color via the jump lists; needs epsilon > 0 at build time.
  ChromaticAnswer query_approx(double q, long k, QueryCounters* counters = nullptr) const;

  // Points with |x - q| <= radius, using only k-th-distance searches: the
  // count is the largest k whose radius stays within the bound. Spends at
  // most 1 + ceil(log2 n) searches, reported through radius_calls.
  long count_in_ball(double q, double radius, long* radius_calls = nullptr) const;

  // Closed index range [lo, hi] of the ball around q with the given radius;
  // empty ranges come back with lo > hi.
  std::pair<long, long> ball_index_range(double q, double radius) const;

  const SizeTree& tree() const { return tree_; }
  const BlockModeTable& mode_table() const { return *table_; }
  bool has_jumps() const { return jumps_.has_value(); }
  const JumpListSet& jumps() const { return *jumps_; }
  std::span<const double> sorted_xs() const { return xs_; }
  std::span<const Color> sorted_colors() const { return colors_; }

 private:
  std::vector<double> xs_;   // ascending
  std::vector<Color> colors_;  // colors in xs_ order
  std::vector<int> ids_;     // original ids in xs_ order
  SizeTree tree_;
  std::optional<BlockModeTable> table_;
  std::optional<JumpListSet> jumps_;
};

// Chromatic k-nearest-neighbor queries in the plane for L1, L2 or Linf:
// a distance selector finds the k-th radius, and a colored subdivision of
// query space narrows the mode to a few candidate colors that are counted
// exactly. L1 runs entirely in rotated coordinates, where its balls are
// axis-aligned squares.
class Pipeline2D {
 public:
  Pipeline2D(std::vector<ColoredPoint2> pts, Metric metric, BuildOptions opts = {});

  long size() const { return static_cast<long>(work_.size()); }
  int color_bound() const { return counters_->colors(); }
  const Metric& metric() const { return metric_; }
  long r() const { return r_; }
  long tau() const { return cutting_->tau(); }

  ChromaticAnswer query(const Point2& q, long k, QueryCounters* counters = nullptr) const;

  const SurfaceCutting& cutting() const { return *cutting_; }
  const ColorCounterSet& color_counters() const { return *counters_; }
  const ColoringWork& coloring_work() const { return work_stats_; }
  // The point set the structures are built over (ids renumbered to input
  // order; coordinates rotated when the metric is L1).
  std::span<const ColoredPoint2> work_points() const { return work_; }

 private:
  double kth_radius(const Point2& wq, long k, QueryCounters* counters) const;

  Metric metric_;
  long r_ = 1;
  std::vector<ColoredPoint2> work_;
  std::optional<DiskFinder> finder_;    // L2
  std::optional<RangeTree2D> rtree_;    // L1 / Linf
  std::optional<SurfaceCutting> cutting_;
  std::optional<ColorCounterSet> counters_;
  ColoringWork work_stats_;
};

// The classical array problems, reduced to chromatic queries: treat A[i] as a
// colored point at x = i. The mode of A[i..j] is the chromatic query at the
// interval midpoint with k = j - i + 1.
Pipeline1D pipeline_from_array(std::span<const Color> a, BuildOptions opts = {});
ChromaticAnswer array_mode_via_chromatic(const Pipeline1D& pipe, long i, long j,
                                         QueryCounters* counters = nullptr);

}  // namespace chromaknn
