#include "chromaknn/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chromaknn {

namespace {

double clamp_d2(const Point2& q, double xlo, double xhi, double ylo, double yhi) {
  const double dx = q.x < xlo ? xlo - q.x : (q.x > xhi ? q.x - xhi : 0.0);
  const double dy = q.y < ylo ? ylo - q.y : (q.y > yhi ? q.y - yhi : 0.0);
  return dx * dx + dy * dy;
}

double far_d2(const Point2& q, double xlo, double xhi, double ylo, double yhi) {
  const double dx = std::max(std::abs(q.x - xlo), std::abs(q.x - xhi));
  const double dy = std::max(std::abs(q.y - ylo), std::abs(q.y - yhi));
  return dx * dx + dy * dy;
}

}  // namespace

KdTree2D::KdTree2D(std::span<const ColoredPoint2> pts, int leaf_size) {
  n_ = static_cast<long>(pts.size());
  ids_.resize(n_);
  pos_.resize(n_);
  for (long i = 0; i < n_; ++i) {
    ids_[i] = pts[i].id;
    pos_[i] = pts[i].pos;
    mag_ = std::max(mag_, std::abs(pts[i].pos.x) + std::abs(pts[i].pos.y));
  }
  if (n_ > 0) root_ = build(0, static_cast<int>(n_), std::max(1, leaf_size));
}

int KdTree2D::build(int begin, int end, int leaf_size) {
  const int idx = static_cast<int>(nodes_.size());
  nodes_.push_back({});
  double xlo = pos_[begin].x, xhi = xlo, ylo = pos_[begin].y, yhi = ylo;
  for (int i = begin; i < end; ++i) {
    xlo = std::min(xlo, pos_[i].x);
    xhi = std::max(xhi, pos_[i].x);
    ylo = std::min(ylo, pos_[i].y);
    yhi = std::max(yhi, pos_[i].y);
  }
  nodes_[idx].xlo = xlo;
  nodes_[idx].xhi = xhi;
  nodes_[idx].ylo = ylo;
  nodes_[idx].yhi = yhi;
  nodes_[idx].begin = begin;
  nodes_[idx].end = end;
  if (end - begin > leaf_size) {
    const int mid = begin + (end - begin) / 2;
    const bool split_x = (xhi - xlo) >= (yhi - ylo);
    const auto first = ids_.begin() + begin;
    std::vector<int> perm(end - begin);
    for (int i = 0; i < end - begin; ++i) perm[i] = i;
    // sort positions and ids together through a permutation of the range
    std::nth_element(perm.begin(), perm.begin() + (mid - begin), perm.end(),
                     [&](int a, int b) {
                       const Point2& pa = pos_[begin + a];
                       const Point2& pb = pos_[begin + b];
                       return split_x ? pa.x < pb.x : pa.y < pb.y;
                     });
    std::vector<int> tmp_ids(first, ids_.begin() + end);
    std::vector<Point2> tmp_pos(pos_.begin() + begin, pos_.begin() + end);
    for (int i = 0; i < end - begin; ++i) {
      ids_[begin + i] = tmp_ids[perm[i]];
      pos_[begin + i] = tmp_pos[perm[i]];
    }
    const int l = build(begin, mid, leaf_size);
    const int r = build(mid, end, leaf_size);
    nodes_[idx].left = l;
    nodes_[idx].right = r;
  }
  return idx;
}

KdTree2D::BoxSide KdTree2D::box_side(const Node& nd, const Point2& q, double z) const {
  // dual_value(p, q) = |q|^2 - |p - q|^2 in exact arithmetic; bound it over
  // the box through the squared distance range and keep a guard band wide
  // enough to absorb the different roundings of the two expressions.
  const double qq = q.x * q.x + q.y * q.y;
  const double m = std::abs(q.x) + std::abs(q.y) + mag_;
  const double guard = 1e-9 * (1.0 + m * m);
  if (z == -std::numeric_limits<double>::infinity()) return BoxSide::In;
  if (z == std::numeric_limits<double>::infinity()) return BoxSide::Out;
  const double lo = qq - far_d2(q, nd.xlo, nd.xhi, nd.ylo, nd.yhi);
  const double hi = qq - clamp_d2(q, nd.xlo, nd.xhi, nd.ylo, nd.yhi);
  if (lo >= z + guard) return BoxSide::In;
  if (hi < z - guard) return BoxSide::Out;
  return BoxSide::Split;
}

long KdTree2D::count_rec(int nidx, const Point2& q, double z) const {
  const Node& nd = nodes_[nidx];
  switch (box_side(nd, q, z)) {
    case BoxSide::In: return nd.end - nd.begin;
    case BoxSide::Out: return 0;
    case BoxSide::Split: break;
  }
  if (nd.left < 0) {
    long c = 0;
    for (int i = nd.begin; i < nd.end; ++i)
      if (dual_value(pos_[i], q.x, q.y) >= z) ++c;
    return c;
  }
  return count_rec(nd.left, q, z) + count_rec(nd.right, q, z);
}

long KdTree2D::disk_count(const Point2& q, double r) const {
  return disk_count_z(q, l2_ball_z(q, r));
}

long KdTree2D::disk_count_z(const Point2& q, double z) const {
  if (root_ < 0) return 0;
  return count_rec(root_, q, z);
}

void KdTree2D::emit_all(int nidx, std::vector<int>& out) const {
  const Node& nd = nodes_[nidx];
  for (int i = nd.begin; i < nd.end; ++i) out.push_back(ids_[i]);
}

void KdTree2D::annulus_rec(int nidx, const Point2& q, double z_outer, double z_inner,
                           std::vector<int>& out) const {
  const Node& nd = nodes_[nidx];
  const BoxSide outer = box_side(nd, q, z_outer);
  if (outer == BoxSide::Out) return;
  const BoxSide inner = box_side(nd, q, z_inner);
  if (inner == BoxSide::In) return;  // everything inside the inner disk
  if (outer == BoxSide::In && inner == BoxSide::Out) {
    emit_all(nidx, out);
    return;
  }
  if (nd.left < 0) {
    for (int i = nd.begin; i < nd.end; ++i) {
      const double v = dual_value(pos_[i], q.x, q.y);
      if (v >= z_outer && v < z_inner) out.push_back(ids_[i]);
    }
    return;
  }
  annulus_rec(nd.left, q, z_outer, z_inner, out);
  annulus_rec(nd.right, q, z_outer, z_inner, out);
}

void KdTree2D::annulus_report_z(const Point2& q, double z_outer, double z_inner,
                                std::vector<int>& out) const {
  if (root_ < 0) return;
  annulus_rec(root_, q, z_outer, z_inner, out);
}

void KdTree2D::annulus_report(const Point2& q, double r_inner, double r_outer,
                              std::vector<int>& out) const {
  const double z_outer = l2_ball_z(q, r_outer);
  const double z_inner = r_inner < 0.0 ? std::numeric_limits<double>::infinity()
                                       : l2_ball_z(q, r_inner);
  annulus_report_z(q, z_outer, z_inner, out);
}

void KdTree2D::symdiff_rec(int nidx, const Point2& qa, double za, const Point2& qb,
                           double zb, std::vector<int>& out) const {
  const Node& nd = nodes_[nidx];
  const BoxSide sa = box_side(nd, qa, za);
  const BoxSide sb = box_side(nd, qb, zb);
  if (sa != BoxSide::Split && sb != BoxSide::Split) {
    if (sa == sb) return;
    emit_all(nidx, out);
    return;
  }
  if (nd.left < 0) {
    for (int i = nd.begin; i < nd.end; ++i) {
      const bool ina = dual_value(pos_[i], qa.x, qa.y) >= za;
      const bool inb = dual_value(pos_[i], qb.x, qb.y) >= zb;
      if (ina != inb) out.push_back(ids_[i]);
    }
    return;
  }
  symdiff_rec(nd.left, qa, za, qb, zb, out);
  symdiff_rec(nd.right, qa, za, qb, zb, out);
}

void KdTree2D::symdiff_report_z(const Point2& qa, double za, const Point2& qb, double zb,
                                std::vector<int>& out) const {
  if (root_ < 0) return;
  symdiff_rec(root_, qa, za, qb, zb, out);
}

}  // namespace chromaknn
