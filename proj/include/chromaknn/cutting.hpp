#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "chromaknn/kdtree.hpp"
#include "chromaknn/oracle.hpp"
#include "chromaknn/range_tree.hpp"

namespace chromaknn {

struct Box3 {
  double xlo = 0.0, xhi = 0.0;
  double ylo = 0.0, yhi = 0.0;
  double zlo = 0.0, zhi = 0.0;
  Point3 center() const { return {(xlo + xhi) / 2.0, (ylo + yhi) / 2.0, (zlo + zhi) / 2.0}; }
  bool contains(const QueryPoint3& w) const {
    return w.x >= xlo && w.x <= xhi && w.y >= ylo && w.y <= yhi && w.z >= zlo &&
           w.z <= zhi;
  }
};

enum class BoxCover { Full, None, Partial };

// Exact trichotomy of a surface against a box of query points: planes are
// linear in (x, y) so their extrema sit on the corners; the region above a
// distance pyramid is convex, so covering all eight corners covers the box,
// and missing it entirely reduces to the nearest Linf distance from the apex
// to the xy-rectangle exceeding the box top.
BoxCover classify_surface_box(const Surface& s, const Box3& box);

// Multiset of colors with O(1) insert, delete and mode: per-color counts plus
// one doubly linked list of colors per frequency value, and the largest
// non-empty frequency.
class FrequencyTracker {
 public:
  FrequencyTracker(int colors, long max_freq);

  void increment(Color c);
  void decrement(Color c);  // throws std::logic_error when the count is zero
  ModeAnswer mode() const;  // {-1, 0} when empty
  long frequency(Color c) const { return freq_[c]; }
  long max_frequency() const { return fstar_; }
  int bucket_of(Color c) const { return static_cast<int>(freq_[c]); }
  void reset();

 private:
  void unlink(Color c);
  void link(Color c, long f);

  std::vector<long> freq_;
  std::vector<int> head_;  // per frequency, first color in the bucket
  std::vector<int> prev_, next_;
  long fstar_ = 0;
};

// Exact per-color ball counting: one small spatial structure per color,
// queried through the same membership predicates as the brute-force
// reference.
class ColorCounterSet {
 public:
  ColorCounterSet(std::span<const ColoredPoint2> pts, Surface::Kind kind);

  long count(Color c, const QueryPoint3& w) const;
  // Full scan fallback; mode over every point the query point covers.
  std::optional<ModeAnswer> scan_mode(const QueryPoint3& w) const;

  Surface::Kind kind() const { return kind_; }
  int colors() const { return ncolors_; }

 private:
  Surface::Kind kind_;
  int ncolors_ = 0;
  std::vector<ColoredPoint2> pts_;
  std::vector<KdTree2D> disks_;       // per color, plane kind
  std::vector<RangeTree2D> squares_;  // per color, pyramid kind
};

struct CuttingBuildStats {
  long leaves = 0;
  long capped_leaves = 0;
  int max_depth = 0;
  long conflict_total = 0;
  long conflict_max = 0;
};

struct CellQueryStats {
  long candidate_colors = 0;
  bool capped_leaf = false;
  bool oracle_fallback = false;
};

struct ColoringWork {
  long naive_scanned = 0;       // leaf x surface classifications
  long traversal_touched = 0;   // reported surfaces plus per-leaf removals
};

// Reports the ids of surfaces whose covers() value differs between the two
// anchors; implementations over counting structures may gather candidates
// coarsely (touched counts them) but must filter their output down to the
// exact symmetric difference.
using SymDiffReporter =
    std::function<void(const QueryPoint3& a, const QueryPoint3& b, std::vector<int>& out,
                       long& touched)>;

// Two squares differ on at most eight rectangle pieces; candidates come from
// rectangle reporting and are filtered by the exact pyramid predicate. The
// point ids in pts must match the surface ids they stand for.
SymDiffReporter make_square_symdiff_reporter(const RangeTree2D& tree,
                                             std::span<const ColoredPoint2> pts);
// Disk symmetric differences come out of the spatial tree already exact.
SymDiffReporter make_disk_symdiff_reporter(const KdTree2D& tree);

// Adaptive box subdivision of (x, y, z) query space: each box splits in half
// along the axis whose slope-scaled extent dominates, until at most
// tau = ceil(n / r) surfaces cross it (or a depth cap bites, which is
// recorded, not hidden). Each leaf stores its crossing surfaces, an
// anchor at the box center, and - once colored - the mode of the surfaces
// that cover the whole box. A ball query descends to the leaf containing the
// ball's query point; the answer color is either the leaf's base mode or one
// of the crossing surfaces covering the query point, and every candidate is
// counted exactly.
class SurfaceCutting {
 public:
  SurfaceCutting(std::vector<Surface> surfaces, long r, int depth_cap = 40);

  long surface_count() const { return static_cast<long>(surfaces_.size()); }
  long tau() const { return tau_; }
  int depth_cap() const { return depth_cap_; }
  const Box3& root_box() const { return nodes_[0].box; }
  const std::vector<Surface>& surfaces() const { return surfaces_; }
  const CuttingBuildStats& build_stats() const { return stats_; }

  long leaf_count() const { return static_cast<long>(leaves_.size()); }
  struct LeafView {
    const Box3& box;
    QueryPoint3 anchor;
    std::span<const int> conflicts;
    ModeAnswer base_mode;
    bool capped;
  };
  LeafView leaf(long i) const;
  long locate(const QueryPoint3& w) const;  // leaf index, -1 outside the root box

  bool colored() const { return colored_; }
  void color_cells_naive(ColoringWork* work = nullptr);
  void color_cells_traversal(const SymDiffReporter& reporter, ColoringWork* work = nullptr);

  std::optional<ModeAnswer> query_mode_ball(const ColorCounterSet& counters,
                                            const Ball2& ball,
                                            CellQueryStats* stats = nullptr) const;

  // Face-adjacent leaf pairs (positive-area shared face), each pair once.
  std::vector<std::pair<int, int>> adjacent_leaf_pairs() const;

 private:
  struct NodeRec {
    Box3 box;
    int axis = -1;  // split axis of an internal node
    int child[2] = {-1, -1};
    int leaf = -1;
  };
  struct LeafRec {
    Box3 box;
    QueryPoint3 anchor;
    std::vector<int> conflicts;
    ModeAnswer base{-1, 0};
    bool capped = false;
  };

  int build(const Box3& box, std::vector<int>& crossing, int depth);
  void face_pairs(int na, int nb, int axis,
                  std::vector<std::pair<int, int>>& out) const;
  void collect_pairs(int nidx, std::vector<std::pair<int, int>>& out) const;

  std::vector<Surface> surfaces_;
  long r_ = 1;
  long tau_ = 1;
  double slope_x_ = 1.0;  // steepest |dz/dx| over all surfaces
  double slope_y_ = 1.0;
  int depth_cap_ = 40;
  int ncolors_ = 0;
  std::vector<NodeRec> nodes_;
  std::vector<LeafRec> leaves_;
  CuttingBuildStats stats_;
  bool colored_ = false;
};

}  // namespace chromaknn
