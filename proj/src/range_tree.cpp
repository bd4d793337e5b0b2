#include "chromaknn/range_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chromaknn {

RangeTree2D::RangeTree2D(std::span<const ColoredPoint2> pts, FanoutMode mode,
                         double delta) {
  n_ = static_cast<long>(pts.size());
  px_.resize(n_);
  py_.resize(n_);
  ids_.resize(n_);
  for (long i = 0; i < n_; ++i) {
    px_[i] = pts[i].pos.x;
    py_[i] = pts[i].pos.y;
    ids_[i] = pts[i].id;
  }

  if (mode == FanoutMode::Binary) {
    fanout_ = 2;
  } else {
    if (!(delta > 0.0 && delta <= 1.0))
      throw std::invalid_argument("delta must lie in (0, 1]");
    fanout_ = std::max<int>(
        2, static_cast<int>(std::ceil(std::pow(static_cast<double>(std::max<long>(n_, 2)),
                                               delta / 2.0))));
  }

  xorder_.resize(n_);
  for (long i = 0; i < n_; ++i) xorder_[i] = static_cast<int>(i);
  std::sort(xorder_.begin(), xorder_.end(), [&](int a, int b) {
    if (px_[a] != px_[b]) return px_[a] < px_[b];
    if (py_[a] != py_[b]) return py_[a] < py_[b];
    return a < b;
  });

  xs_.reserve(n_);
  for (int i : xorder_) xs_.push_back(px_[i]);
  ys_ = py_;
  std::sort(ys_.begin(), ys_.end());

  if (n_ > 0) root_ = build(0, static_cast<int>(n_), 1);
}

int RangeTree2D::build(int begin, int end, int level) {
  depth_ = std::max(depth_, level);
  const int idx = static_cast<int>(nodes_.size());
  nodes_.push_back({});
  {
    Node& nd = nodes_[idx];
    nd.begin = begin;
    nd.end = end;
    nd.xlo = px_[xorder_[begin]];
    nd.xhi = px_[xorder_[end - 1]];
    std::vector<int> order(xorder_.begin() + begin, xorder_.begin() + end);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (py_[a] != py_[b]) return py_[a] < py_[b];
      return a < b;
    });
    nd.ys.reserve(order.size());
    nd.yids.reserve(order.size());
    for (int i : order) {
      nd.ys.push_back(py_[i]);
      nd.yids.push_back(ids_[i]);
    }
  }
  if (end - begin > 1) {
    const int m = end - begin;
    const int parts = std::min(fanout_, m);
    std::vector<int> kids;
    kids.reserve(parts);
    for (int c = 0; c < parts; ++c) {
      const int lo = begin + static_cast<int>(static_cast<long>(m) * c / parts);
      const int hi = begin + static_cast<int>(static_cast<long>(m) * (c + 1) / parts);
      if (lo < hi) kids.push_back(build(lo, hi, level + 1));
    }
    nodes_[idx].children = std::move(kids);
  }
  return idx;
}

void RangeTree2D::check_rect(const Rect& rect) {
  if (!(rect.xlo <= rect.xhi) || !(rect.ylo <= rect.yhi))
    throw std::invalid_argument("rectangle bounds must satisfy lo <= hi");
}

long RangeTree2D::count_node(int nidx, const Rect& rect) const {
  const Node& nd = nodes_[nidx];
  if (nd.xhi < rect.xlo || nd.xlo > rect.xhi) return 0;
  if (rect.xlo <= nd.xlo && nd.xhi <= rect.xhi) {
    const auto lo = std::lower_bound(nd.ys.begin(), nd.ys.end(), rect.ylo);
    const auto hi = std::upper_bound(nd.ys.begin(), nd.ys.end(), rect.yhi);
    return hi - lo;
  }
  if (nd.children.empty()) {
    long c = 0;
    for (int i = nd.begin; i < nd.end; ++i) {
      const int p = xorder_[i];
      if (px_[p] >= rect.xlo && px_[p] <= rect.xhi && py_[p] >= rect.ylo &&
          py_[p] <= rect.yhi)
        ++c;
    }
    return c;
  }
  long c = 0;
  for (int child : nd.children) c += count_node(child, rect);
  return c;
}

long RangeTree2D::count(const Rect& rect) const {
  check_rect(rect);
  if (root_ < 0) return 0;
  return count_node(root_, rect);
}

void RangeTree2D::report_node(int nidx, const Rect& rect, std::vector<int>& out) const {
  const Node& nd = nodes_[nidx];
  if (nd.xhi < rect.xlo || nd.xlo > rect.xhi) return;
  if (rect.xlo <= nd.xlo && nd.xhi <= rect.xhi) {
    const auto lo = std::lower_bound(nd.ys.begin(), nd.ys.end(), rect.ylo);
    const auto hi = std::upper_bound(nd.ys.begin(), nd.ys.end(), rect.yhi);
    for (auto it = lo; it != hi; ++it)
      out.push_back(nd.yids[it - nd.ys.begin()]);
    return;
  }
  if (nd.children.empty()) {
    for (int i = nd.begin; i < nd.end; ++i) {
      const int p = xorder_[i];
      if (px_[p] >= rect.xlo && px_[p] <= rect.xhi && py_[p] >= rect.ylo &&
          py_[p] <= rect.yhi)
        out.push_back(ids_[p]);
    }
    return;
  }
  for (int child : nd.children) report_node(child, rect, out);
}

void RangeTree2D::report(const Rect& rect, std::vector<int>& out) const {
  check_rect(rect);
  if (root_ >= 0) report_node(root_, rect, out);
}

double RangeTree2D::kth_linf_radius(const Point2& q, long k,
                                    RadiusSearchStats* stats) const {
  if (k < 1 || k > n_) throw std::out_of_range("kth_linf_radius: k out of range");
  RadiusSearchStats local;
  RadiusSearchStats& st = stats ? *stats : local;

  const auto holds = [&](double r) {
    ++st.counting_calls;
    return count_node(root_, Rect{q.x - r, q.x + r, q.y - r, q.y + r}) >= k;
  };

  // Last index with the predicate true over a radius sequence in
  // non-increasing radius order; -1 when even the first (largest) fails.
  const auto last_true = [&](auto radius_at, long m) -> long {
    long a = -1, b = m - 1;
    while (a < b) {
      const long mid = a + (b - a + 1) / 2;
      if (holds(radius_at(mid))) a = mid;
      else b = mid - 1;
    }
    return a;
  };

  double best = -1.0;
  const auto offer = [&](double r) {
    if (best < 0.0 || r < best) best = r;
  };

  // Coordinates at or below q.x, farthest first, preceded by a sentinel one
  // unit past the data minimum. Sentinels only keep the sequences non-empty;
  // winners are validated by the count predicate, never by sentinel reach.
  {
    const long cnt = std::upper_bound(xs_.begin(), xs_.end(), q.x) - xs_.begin();
    const double sent = xs_.front() - 1.0;
    const auto radius_at = [&](long s) {
      return s == 0 ? q.x - sent : q.x - xs_[s - 1];
    };
    const long w = last_true(radius_at, cnt + 1);
    if (w >= 0) offer(radius_at(w));
  }
  // Coordinates above q.x, farthest first, sentinel past the data maximum.
  {
    const long first = std::upper_bound(xs_.begin(), xs_.end(), q.x) - xs_.begin();
    const long cnt = n_ - first;
    const double sent = xs_.back() + 1.0;
    const auto radius_at = [&](long s) {
      return s == 0 ? sent - q.x : xs_[n_ - s] - q.x;
    };
    const long w = last_true(radius_at, cnt + 1);
    if (w >= 0) offer(radius_at(w));
  }
  {
    const long cnt = std::upper_bound(ys_.begin(), ys_.end(), q.y) - ys_.begin();
    const double sent = ys_.front() - 1.0;
    const auto radius_at = [&](long s) {
      return s == 0 ? q.y - sent : q.y - ys_[s - 1];
    };
    const long w = last_true(radius_at, cnt + 1);
    if (w >= 0) offer(radius_at(w));
  }
  {
    const long first = std::upper_bound(ys_.begin(), ys_.end(), q.y) - ys_.begin();
    const long cnt = n_ - first;
    const double sent = ys_.back() + 1.0;
    const auto radius_at = [&](long s) {
      return s == 0 ? sent - q.y : ys_[n_ - s] - q.y;
    };
    const long w = last_true(radius_at, cnt + 1);
    if (w >= 0) offer(radius_at(w));
  }

  if (best < 0.0)
    throw std::logic_error("kth_linf_radius: no candidate radius qualified");
  return best;
}

double find_l1_radius(const RangeTree2D& rotated_tree, const Point2& q, long k,
                      RadiusSearchStats* stats) {
  return rotated_tree.kth_linf_radius(rotate_l1_to_linf(q), k, stats);
}

}  // namespace chromaknn
