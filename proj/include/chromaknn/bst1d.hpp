#pragma once

#include <span>
#include <vector>

#include "chromaknn/geom.hpp"

namespace chromaknn {

struct RankMergeStats {
  long comparisons = 0;
};

// Static, perfectly balanced search tree over sorted keys, with subtree sizes
// on every node. Queries never mutate it: split_at copies only the nodes on
// one root-to-leaf path and shares everything else with the source tree.
class SizeTree {
 public:
  struct Node {
    double key = 0.0;
    int left = -1;
    int right = -1;
    int size = 0;
  };

  SizeTree() = default;
  static SizeTree from_sorted(std::span<const double> keys);

  bool empty() const { return root_ < 0; }
  long size() const { return root_ < 0 ? 0 : nodes_[root_].size; }
  int height() const { return height_; }
  int root() const { return root_; }
  const Node& node(int i) const { return nodes_[i]; }
  long node_count() const { return static_cast<long>(nodes_.size()); }

  // Ascending key sequence; used by tests to audit immutability.
  std::vector<double> inorder() const;

 private:
  std::vector<Node> nodes_;
  int root_ = -1;
  int height_ = 0;
};

// The two halves of a SizeTree split at a pivot: keys < pivot on the left,
// keys >= pivot on the right. Node references are encoded ints: -1 is null,
// values >= 0 index private scratch copies, values <= -2 name node
// -(ref) - 2 of the source tree.
class SplitView {
 public:
  SplitView(const SizeTree& tree, double pivot);

  // A view of an unsplit tree: empty left half, the whole tree on the right.
  static SplitView whole(const SizeTree& tree);

  int left_root() const { return lroot_; }
  int right_root() const { return rroot_; }
  long size_of(int ref) const;
  double key(int ref) const;
  int left(int ref) const;
  int right(int ref) const;
  long copied_nodes() const { return static_cast<long>(scratch_.size()); }

 private:
  explicit SplitView(const SizeTree& tree) : base_(&tree) {}
  const SizeTree::Node& deref(int ref) const;
  int make_scratch(double key, int left, int right);
  std::pair<int, int> split(int ref, double pivot);

  const SizeTree* base_;
  std::vector<SizeTree::Node> scratch_;
  int lroot_ = -1;
  int rroot_ = -1;
};

// Read-only ordered handle on one half of a SplitView. The value of a node is
// key - origin when reversed is false and origin - key when it is true; in
// the reversed case the children swap roles, which turns the left half of a
// split (keys descending toward the pivot) into a sequence of ascending
// distances from the pivot.
struct TreeCursor {
  const SplitView* view = nullptr;
  int ref = -1;
  bool reversed = false;
  double origin = 0.0;

  bool null() const { return ref == -1; }  // refs <= -2 name source-tree nodes
  long size() const { return view->size_of(ref); }
  double value() const {
    return reversed ? origin - view->key(ref) : view->key(ref) - origin;
  }
  TreeCursor low() const {
    return {view, reversed ? view->right(ref) : view->left(ref), reversed, origin};
  }
  TreeCursor high() const {
    return {view, reversed ? view->left(ref) : view->right(ref), reversed, origin};
  }
};

// k-th smallest value (1-based) in the multiset union of two cursors. Each
// round compares the two root values and orients the pair so that a holds the
// larger one; with l = |a.low| + |b.low| + 1, either at least l values at most
// a's root survive below it (l >= k: drop a's root and upper side), or the
// |b.low| + 1 values up to b's root all precede the answer (l < k: drop them
// and continue with rank k - |b.low| - 1). One tree loses a level per round
// and plain rank selection finishes in the survivor, so the counted
// comparisons stay within 2*(height(a) + height(b)) + 4.
double rank_merge(TreeCursor a, TreeCursor b, long k, RankMergeStats* stats = nullptr);

struct RadiusResult1D {
  double radius = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// k-th smallest |x - q| over the tree's keys, together with the interval
// [q - r, q + r] it spans.
RadiusResult1D find_radius_1d(const SizeTree& tree, double q, long k,
                              RankMergeStats* stats = nullptr);

}  // namespace chromaknn
