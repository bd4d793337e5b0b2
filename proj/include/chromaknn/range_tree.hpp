#pragma once

#include <span>
#include <vector>

#include "chromaknn/geom.hpp"

namespace chromaknn {

struct RadiusSearchStats {
  long counting_calls = 0;
};

// Closed axis-aligned rectangle.
struct Rect {
  double xlo = 0.0, xhi = 0.0;
  double ylo = 0.0, yhi = 0.0;
};

// Two-level orthogonal range tree: nodes partition the points by x and carry
// their canonical subset sorted by y, so a rectangle decomposes into a few
// fully covered nodes (answered by binary search on y) plus at most two
// partially covered root-to-leaf paths per level. Fanout is either 2 or
// ceil(n^(delta/2)) for a chosen delta, which trades a flatter tree against
// wider partial fringes.
class RangeTree2D {
 public:
  enum class FanoutMode { Binary, Delta };

  explicit RangeTree2D(std::span<const ColoredPoint2> pts,
                       FanoutMode mode = FanoutMode::Binary, double delta = 0.25);

  long size() const { return n_; }
  int fanout() const { return fanout_; }
  int depth() const { return depth_; }
  long node_count() const { return static_cast<long>(nodes_.size()); }

  long count(const Rect& rect) const;
  void report(const Rect& rect, std::vector<int>& out) const;

  // k-th smallest Linf distance from q to the point set. Candidate radii are
  // the per-axis gaps to the coordinates on each side of q (plus one sentinel
  // per sequence past the data extent); each of the four sequences is probed
  // by a last-success binary search over "does the square of this radius hold
  // at least k points", and the smallest winner is exact.
  double kth_linf_radius(const Point2& q, long k, RadiusSearchStats* stats = nullptr) const;

 private:
  struct Node {
    int begin = 0, end = 0;  // range in xorder_
    double xlo = 0.0, xhi = 0.0;
    std::vector<int> children;
    std::vector<double> ys;   // canonical subset, ascending y
    std::vector<int> yids;    // point ids parallel to ys
  };

  int build(int begin, int end, int level);
  long count_node(int nidx, const Rect& rect) const;
  void report_node(int nidx, const Rect& rect, std::vector<int>& out) const;
  static void check_rect(const Rect& rect);

  long n_ = 0;
  int fanout_ = 2;
  int depth_ = 0;
  int root_ = -1;
  std::vector<Node> nodes_;
  std::vector<double> px_, py_;  // coordinates in input order
  std::vector<int> ids_;         // reported ids in input order
  std::vector<int> xorder_;      // input positions sorted by (x, y)
  std::vector<double> xs_;       // ascending x multiset
  std::vector<double> ys_;       // ascending y multiset
};

// k-th smallest L1 distance in the original frame, answered by a tree built
// over rotate_l1_to_linf-transformed points.
double find_l1_radius(const RangeTree2D& rotated_tree, const Point2& q, long k,
                      RadiusSearchStats* stats = nullptr);

}  // namespace chromaknn
