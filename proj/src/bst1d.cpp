#include "chromaknn/bst1d.hpp"

#include <stdexcept>
#include <utility>

namespace chromaknn {

namespace {

int build_range(std::vector<SizeTree::Node>& nodes, std::span<const double> keys, int lo,
                int hi) {
  if (lo >= hi) return -1;
  const int mid = lo + (hi - lo) / 2;
  const int left = build_range(nodes, keys, lo, mid);
  const int right = build_range(nodes, keys, mid + 1, hi);
  const int idx = static_cast<int>(nodes.size());
  nodes.push_back({keys[mid], left, right, 0});
  int sz = 1;
  if (left >= 0) sz += nodes[left].size;
  if (right >= 0) sz += nodes[right].size;
  nodes[idx].size = sz;
  return idx;
}

}  // namespace

SizeTree SizeTree::from_sorted(std::span<const double> keys) {
  for (std::size_t i = 1; i < keys.size(); ++i)
    if (keys[i - 1] > keys[i])
      throw std::invalid_argument("SizeTree::from_sorted: keys are not sorted");
  SizeTree t;
  t.nodes_.reserve(keys.size());
  t.root_ = build_range(t.nodes_, keys, 0, static_cast<int>(keys.size()));
  int h = 0;
  for (long n = static_cast<long>(keys.size()); n > 0; n /= 2) ++h;
  t.height_ = h;
  return t;
}

std::vector<double> SizeTree::inorder() const {
  std::vector<double> out;
  out.reserve(nodes_.size());
  std::vector<int> stack;
  int cur = root_;
  while (cur >= 0 || !stack.empty()) {
    while (cur >= 0) {
      stack.push_back(cur);
      cur = nodes_[cur].left;
    }
    cur = stack.back();
    stack.pop_back();
    out.push_back(nodes_[cur].key);
    cur = nodes_[cur].right;
  }
  return out;
}

SplitView::SplitView(const SizeTree& tree, double pivot) : base_(&tree) {
  scratch_.reserve(static_cast<std::size_t>(tree.height()) + 1);
  const int root = tree.root();
  auto [l, r] = split(root < 0 ? -1 : -root - 2, pivot);
  lroot_ = l;
  rroot_ = r;
}

SplitView SplitView::whole(const SizeTree& tree) {
  SplitView v(tree);
  v.rroot_ = tree.root() < 0 ? -1 : -tree.root() - 2;
  return v;
}

const SizeTree::Node& SplitView::deref(int ref) const {
  return ref >= 0 ? scratch_[ref] : base_->node(-ref - 2);
}

int SplitView::make_scratch(double key, int left, int right) {
  const int idx = static_cast<int>(scratch_.size());
  int sz = 1;
  if (left != -1) sz += static_cast<int>(size_of(left));
  if (right != -1) sz += static_cast<int>(size_of(right));
  scratch_.push_back({key, left, right, sz});
  return idx;
}

std::pair<int, int> SplitView::split(int ref, double pivot) {
  if (ref == -1) return {-1, -1};
  const SizeTree::Node nd = deref(ref);
  const int enc_left = nd.left < 0 ? -1 : -nd.left - 2;
  const int enc_right = nd.right < 0 ? -1 : -nd.right - 2;
  if (nd.key < pivot) {
    auto [l, r] = split(enc_right, pivot);
    return {make_scratch(nd.key, enc_left, l), r};
  }
  auto [l, r] = split(enc_left, pivot);
  return {l, make_scratch(nd.key, r, enc_right)};
}

long SplitView::size_of(int ref) const { return ref == -1 ? 0 : deref(ref).size; }
double SplitView::key(int ref) const { return deref(ref).key; }

// Scratch nodes store encoded child refs; base nodes store raw indices into
// the source tree, which must be re-encoded on the way out.
int SplitView::left(int ref) const {
  const int child = deref(ref).left;
  if (ref >= 0) return child;
  return child < 0 ? -1 : -child - 2;
}
int SplitView::right(int ref) const {
  const int child = deref(ref).right;
  if (ref >= 0) return child;
  return child < 0 ? -1 : -child - 2;
}

double rank_merge(TreeCursor a, TreeCursor b, long k, RankMergeStats* stats) {
  const long total = a.size() + b.size();
  if (k < 1 || k > total) throw std::out_of_range("rank_merge: k out of range");
  RankMergeStats local;
  RankMergeStats& st = stats ? *stats : local;

  while (!a.null() && !b.null()) {
    ++st.comparisons;
    if (a.value() < b.value()) std::swap(a, b);
    const long l = a.low().size() + b.low().size() + 1;
    ++st.comparisons;
    if (l >= k) {
      a = a.low();
    } else {
      k -= b.low().size() + 1;
      b = b.high();
    }
  }

  TreeCursor t = a.null() ? b : a;
  for (;;) {
    ++st.comparisons;
    const long below = t.low().size();
    if (k == below + 1) return t.value();
    if (k <= below) {
      t = t.low();
    } else {
      k -= below + 1;
      t = t.high();
    }
  }
}

RadiusResult1D find_radius_1d(const SizeTree& tree, double q, long k,
                              RankMergeStats* stats) {
  if (k < 1 || k > tree.size())
    throw std::out_of_range("find_radius_1d: k out of range");
  const SplitView view(tree, q);
  const TreeCursor below{&view, view.left_root(), true, q};
  const TreeCursor above{&view, view.right_root(), false, q};
  const double r = rank_merge(below, above, k, stats);
  return {r, q - r, q + r};
}

}  // namespace chromaknn
