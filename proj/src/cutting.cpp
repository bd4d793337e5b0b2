#include "chromaknn/cutting.hpp"

#include <algorithm>
#include <stdexcept>

namespace chromaknn {

BoxCover classify_surface_box(const Surface& s, const Box3& box) {
  if (s.kind == Surface::Kind::Plane) {
    const double v1 = s.plane_value(box.xlo, box.ylo);
    const double v2 = s.plane_value(box.xlo, box.yhi);
    const double v3 = s.plane_value(box.xhi, box.ylo);
    const double v4 = s.plane_value(box.xhi, box.yhi);
    const double vmin = std::min(std::min(v1, v2), std::min(v3, v4));
    const double vmax = std::max(std::max(v1, v2), std::max(v3, v4));
    if (vmin >= box.zhi) return BoxCover::Full;
    if (vmax < box.zlo) return BoxCover::None;
    return BoxCover::Partial;
  }
  const double fdx =
      std::max(std::abs(s.apex.x - box.xlo), std::abs(s.apex.x - box.xhi));
  const double fdy =
      std::max(std::abs(s.apex.y - box.ylo), std::abs(s.apex.y - box.yhi));
  if (std::max(fdx, fdy) <= box.zlo) return BoxCover::Full;
  const double ndx = s.apex.x < box.xlo ? box.xlo - s.apex.x
                     : s.apex.x > box.xhi ? s.apex.x - box.xhi
                                          : 0.0;
  const double ndy = s.apex.y < box.ylo ? box.ylo - s.apex.y
                     : s.apex.y > box.yhi ? s.apex.y - box.yhi
                                          : 0.0;
  if (std::max(ndx, ndy) > box.zhi) return BoxCover::None;
  return BoxCover::Partial;
}

FrequencyTracker::FrequencyTracker(int colors, long max_freq) {
  if (colors < 0 || max_freq < 0)
    throw std::invalid_argument("FrequencyTracker: negative sizes");
  freq_.assign(colors, 0);
  head_.assign(static_cast<std::size_t>(max_freq) + 1, -1);
  prev_.assign(colors, -1);
  next_.assign(colors, -1);
  for (Color c = colors - 1; c >= 0; --c) link(c, 0);
}

void FrequencyTracker::link(Color c, long f) {
  next_[c] = head_[f];
  prev_[c] = -1;
  if (head_[f] >= 0) prev_[head_[f]] = c;
  head_[f] = c;
}

void FrequencyTracker::unlink(Color c) {
  const long f = freq_[c];
  if (prev_[c] >= 0) next_[prev_[c]] = next_[c];
  else head_[f] = next_[c];
  if (next_[c] >= 0) prev_[next_[c]] = prev_[c];
}

void FrequencyTracker::increment(Color c) {
  if (c < 0 || c >= static_cast<Color>(freq_.size()))
    throw std::out_of_range("FrequencyTracker: color out of range");
  const long f = freq_[c];
  if (f + 1 >= static_cast<long>(head_.size()))
    throw std::logic_error("FrequencyTracker: frequency above the declared maximum");
  unlink(c);
  freq_[c] = f + 1;
  link(c, f + 1);
  if (f + 1 > fstar_) fstar_ = f + 1;
}

void FrequencyTracker::decrement(Color c) {
  if (c < 0 || c >= static_cast<Color>(freq_.size()))
    throw std::out_of_range("FrequencyTracker: color out of range");
  const long f = freq_[c];
  if (f == 0) throw std::logic_error("FrequencyTracker: decrement at frequency zero");
  unlink(c);
  freq_[c] = f - 1;
  link(c, f - 1);
  // c now sits in bucket f-1, so f* can drop by at most one step.
  if (fstar_ == f && head_[f] < 0) fstar_ = f - 1;
}

ModeAnswer FrequencyTracker::mode() const {
  if (fstar_ == 0) return {-1, 0};
  return {head_[fstar_], fstar_};
}

void FrequencyTracker::reset() {
  std::fill(freq_.begin(), freq_.end(), 0);
  std::fill(head_.begin(), head_.end(), -1);
  std::fill(prev_.begin(), prev_.end(), -1);
  std::fill(next_.begin(), next_.end(), -1);
  fstar_ = 0;
  for (Color c = static_cast<Color>(freq_.size()) - 1; c >= 0; --c) link(c, 0);
}

namespace {

int color_bound(std::span<const ColoredPoint2> pts) {
  int hi = -1;
  for (const auto& p : pts) {
    if (p.color < 0) throw std::invalid_argument("colors must be non-negative");
    hi = std::max(hi, p.color);
  }
  return hi + 1;
}

bool pyramid_covers(const Point2& apex, const QueryPoint3& w) {
  const double dx = std::abs(apex.x - w.x);
  const double dy = std::abs(apex.y - w.y);
  return (dx > dy ? dx : dy) <= w.z;
}

}  // namespace

ColorCounterSet::ColorCounterSet(std::span<const ColoredPoint2> pts, Surface::Kind kind)
    : kind_(kind), pts_(pts.begin(), pts.end()) {
  ncolors_ = color_bound(pts_);
  std::vector<std::vector<ColoredPoint2>> groups(ncolors_);
  for (const auto& p : pts_) groups[p.color].push_back(p);
  if (kind_ == Surface::Kind::Plane) {
    disks_.reserve(ncolors_);
    for (const auto& g : groups) disks_.emplace_back(g);
  } else {
    squares_.reserve(ncolors_);
    for (const auto& g : groups) squares_.emplace_back(g);
  }
}

long ColorCounterSet::count(Color c, const QueryPoint3& w) const {
  if (c < 0 || c >= ncolors_) return 0;
  if (kind_ == Surface::Kind::Plane)
    return disks_[c].disk_count_z({w.x, w.y}, w.z);
  if (w.z < 0.0) return 0;
  return squares_[c].count(Rect{w.x - w.z, w.x + w.z, w.y - w.z, w.y + w.z});
}

std::optional<ModeAnswer> ColorCounterSet::scan_mode(const QueryPoint3& w) const {
  std::vector<long> counts(ncolors_, 0);
  for (const auto& p : pts_) {
    const bool covered = kind_ == Surface::Kind::Plane
                             ? dual_value(p.pos, w.x, w.y) >= w.z
                             : pyramid_covers(p.pos, w);
    if (covered) ++counts[p.color];
  }
  ModeAnswer best{-1, 0};
  for (Color c = 0; c < ncolors_; ++c)
    if (counts[c] > best.freq) best = {c, counts[c]};
  if (best.freq == 0) return std::nullopt;
  return best;
}

namespace {

bool rects_overlap(const Rect& a, const Rect& b) {
  return a.xlo <= b.xhi && b.xlo <= a.xhi && a.ylo <= b.yhi && b.ylo <= a.yhi;
}

// Closed rectangle pieces covering a \ b (they may graze b's boundary; the
// caller filters with the exact predicate).
void difference_pieces(const Rect& a, const Rect& b, std::vector<Rect>& out) {
  if (!rects_overlap(a, b)) {
    out.push_back(a);
    return;
  }
  if (a.xlo < b.xlo) out.push_back({a.xlo, b.xlo, a.ylo, a.yhi});
  if (a.xhi > b.xhi) out.push_back({b.xhi, a.xhi, a.ylo, a.yhi});
  const double mxlo = std::max(a.xlo, b.xlo);
  const double mxhi = std::min(a.xhi, b.xhi);
  if (a.ylo < b.ylo) out.push_back({mxlo, mxhi, a.ylo, b.ylo});
  if (a.yhi > b.yhi) out.push_back({mxlo, mxhi, b.yhi, a.yhi});
}

}  // namespace

SymDiffReporter make_square_symdiff_reporter(const RangeTree2D& tree,
                                             std::span<const ColoredPoint2> pts) {
  std::vector<Point2> apex(pts.size());
  for (const auto& p : pts) {
    if (p.id < 0 || p.id >= static_cast<int>(pts.size()))
      throw std::invalid_argument("surface ids must be dense for the reporter");
    apex[p.id] = p.pos;
  }
  return [&tree, apex = std::move(apex)](const QueryPoint3& a, const QueryPoint3& b,
                                         std::vector<int>& out, long& touched) {
    const bool ea = a.z < 0.0;
    const bool eb = b.z < 0.0;
    if (ea && eb) return;
    std::vector<int> raw;
    const Rect ra{a.x - a.z, a.x + a.z, a.y - a.z, a.y + a.z};
    const Rect rb{b.x - b.z, b.x + b.z, b.y - b.z, b.y + b.z};
    if (ea) {
      tree.report(rb, raw);
    } else if (eb) {
      tree.report(ra, raw);
    } else {
      std::vector<Rect> pieces;
      difference_pieces(ra, rb, pieces);
      difference_pieces(rb, ra, pieces);
      for (const Rect& piece : pieces) tree.report(piece, raw);
    }
    touched += static_cast<long>(raw.size());
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    for (int id : raw)
      if (pyramid_covers(apex[id], a) != pyramid_covers(apex[id], b))
        out.push_back(id);
  };
}

SymDiffReporter make_disk_symdiff_reporter(const KdTree2D& tree) {
  return [&tree](const QueryPoint3& a, const QueryPoint3& b, std::vector<int>& out,
                 long& touched) {
    tree.symdiff_report_z({a.x, a.y}, a.z, {b.x, b.y}, b.z, out);
    touched += static_cast<long>(out.size());
  };
}

SurfaceCutting::SurfaceCutting(std::vector<Surface> surfaces, long r, int depth_cap)
    : surfaces_(std::move(surfaces)), r_(r), depth_cap_(depth_cap) {
  const long n = static_cast<long>(surfaces_.size());
  if (n == 0) throw std::invalid_argument("cutting needs at least one surface");
  if (r_ < 1 || r_ > n) throw std::invalid_argument("r must lie in [1, n]");
  if (depth_cap_ < 0) throw std::invalid_argument("depth cap must be non-negative");
  const Surface::Kind kind = surfaces_[0].kind;
  int hi_color = -1;
  for (const auto& s : surfaces_) {
    if (s.kind != kind)
      throw std::invalid_argument("all surfaces must share one kind");
    if (s.color < 0) throw std::invalid_argument("colors must be non-negative");
    hi_color = std::max(hi_color, s.color);
  }
  ncolors_ = hi_color + 1;
  tau_ = (n + r_ - 1) / r_;

  if (kind == Surface::Kind::Plane) {
    slope_x_ = slope_y_ = 0.0;
    for (const auto& s : surfaces_) {
      slope_x_ = std::max(slope_x_, std::abs(s.a));
      slope_y_ = std::max(slope_y_, std::abs(s.b));
    }
  } else {
    slope_x_ = slope_y_ = 1.0;
  }

  double xlo = surfaces_[0].apex.x, xhi = xlo;
  double ylo = surfaces_[0].apex.y, yhi = ylo;
  for (const auto& s : surfaces_) {
    xlo = std::min(xlo, s.apex.x);
    xhi = std::max(xhi, s.apex.x);
    ylo = std::min(ylo, s.apex.y);
    yhi = std::max(yhi, s.apex.y);
  }
  const double diam = std::max(xhi - xlo, yhi - ylo);
  const double pad = diam > 0.0 ? diam : 1.0;

  Box3 root;
  root.xlo = xlo - pad;
  root.xhi = xhi + pad;
  root.ylo = ylo - pad;
  root.yhi = yhi + pad;
  if (kind == Surface::Kind::Plane) {
    // Query points of radius-r* balls satisfy z = plane value of the k-th
    // neighbor at (x, y), so the plane values over the padded rectangle span
    // every z a pipeline query can produce.
    double zmin = surfaces_[0].plane_value(root.xlo, root.ylo);
    double zmax = zmin;
    for (const auto& s : surfaces_) {
      for (const double cx : {root.xlo, root.xhi})
        for (const double cy : {root.ylo, root.yhi}) {
          const double v = s.plane_value(cx, cy);
          zmin = std::min(zmin, v);
          zmax = std::max(zmax, v);
        }
    }
    root.zlo = zmin - 1.0;
    root.zhi = zmax + 1.0;
  } else {
    root.zlo = 0.0;
    root.zhi = diam + pad + 1.0;
  }

  std::vector<int> crossing;
  for (long i = 0; i < n; ++i)
    if (classify_surface_box(surfaces_[i], root) == BoxCover::Partial)
      crossing.push_back(static_cast<int>(i));
  build(root, crossing, 0);

  stats_.leaves = static_cast<long>(leaves_.size());
  for (const auto& lf : leaves_) {
    if (lf.capped) ++stats_.capped_leaves;
    stats_.conflict_total += static_cast<long>(lf.conflicts.size());
    stats_.conflict_max =
        std::max(stats_.conflict_max, static_cast<long>(lf.conflicts.size()));
  }
}

int SurfaceCutting::build(const Box3& box, std::vector<int>& crossing, int depth) {
  stats_.max_depth = std::max(stats_.max_depth, depth);
  const int idx = static_cast<int>(nodes_.size());
  nodes_.push_back({});
  nodes_[idx].box = box;

  if (static_cast<long>(crossing.size()) <= tau_ || depth >= depth_cap_) {
    LeafRec lf;
    lf.box = box;
    const Point3 c = box.center();
    lf.anchor = {c.x, c.y, c.z};
    lf.capped = static_cast<long>(crossing.size()) > tau_;
    lf.conflicts = crossing;
    nodes_[idx].leaf = static_cast<int>(leaves_.size());
    leaves_.push_back(std::move(lf));
    return idx;
  }

  // Surface values vary across the box by at most slope_x*dx + slope_y*dy,
  // and a surface crosses only if that band meets the box's z-range, so
  // halving whichever of the three scaled extents dominates sheds crossers
  // fastest.
  const double lx = slope_x_ * (box.xhi - box.xlo);
  const double ly = slope_y_ * (box.yhi - box.ylo);
  const double lz = box.zhi - box.zlo;
  int axis = 2;
  if (lx >= ly && lx >= lz)
    axis = 0;
  else if (ly >= lz)
    axis = 1;
  nodes_[idx].axis = axis;

  const Point3 c = box.center();
  for (int o = 0; o < 2; ++o) {
    Box3 cb = box;
    if (axis == 0)
      (o ? cb.xlo : cb.xhi) = c.x;
    else if (axis == 1)
      (o ? cb.ylo : cb.yhi) = c.y;
    else
      (o ? cb.zlo : cb.zhi) = c.z;
    std::vector<int> sub;
    sub.reserve(crossing.size());
    for (int id : crossing)
      if (classify_surface_box(surfaces_[id], cb) == BoxCover::Partial)
        sub.push_back(id);
    const int ch = build(cb, sub, depth + 1);
    nodes_[idx].child[o] = ch;
  }
  return idx;
}

SurfaceCutting::LeafView SurfaceCutting::leaf(long i) const {
  const LeafRec& lf = leaves_.at(static_cast<std::size_t>(i));
  return {lf.box, lf.anchor, lf.conflicts, lf.base, lf.capped};
}

long SurfaceCutting::locate(const QueryPoint3& w) const {
  if (!nodes_[0].box.contains(w)) return -1;
  int cur = 0;
  while (nodes_[cur].leaf < 0) {
    const NodeRec& nd = nodes_[cur];
    const Point3 c = nd.box.center();
    const double wv = nd.axis == 0 ? w.x : nd.axis == 1 ? w.y : w.z;
    const double cv = nd.axis == 0 ? c.x : nd.axis == 1 ? c.y : c.z;
    cur = nd.child[wv >= cv ? 1 : 0];
  }
  return nodes_[cur].leaf;
}

void SurfaceCutting::color_cells_naive(ColoringWork* work) {
  ColoringWork local;
  ColoringWork& wk = work ? *work : local;
  std::vector<long> counts(ncolors_, 0);
  std::vector<Color> touched;
  for (auto& lf : leaves_) {
    for (Color c : touched) counts[c] = 0;
    touched.clear();
    ModeAnswer best{-1, 0};
    for (const Surface& s : surfaces_) {
      ++wk.naive_scanned;
      if (classify_surface_box(s, lf.box) != BoxCover::Full) continue;
      if (counts[s.color] == 0) touched.push_back(s.color);
      const long f = ++counts[s.color];
      if (f > best.freq || (f == best.freq && s.color < best.color))
        best = {s.color, f};
    }
    lf.base = best;
  }
  colored_ = true;
}

void SurfaceCutting::color_cells_traversal(const SymDiffReporter& reporter,
                                           ColoringWork* work) {
  ColoringWork local;
  ColoringWork& wk = work ? *work : local;
  const long nleaves = static_cast<long>(leaves_.size());
  std::vector<std::vector<int>> adj(nleaves);
  for (const auto& [a, b] : adjacent_leaf_pairs()) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  FrequencyTracker tracker(ncolors_, surface_count());
  std::vector<char> in(surfaces_.size(), 0);
  std::vector<char> visited(nleaves, 0);
  std::vector<int> reported, removed;

  // Invariant: tracker holds the multiset of surfaces covering the cursor
  // anchor. At a leaf, crossing surfaces covering the anchor are lifted out,
  // leaving exactly the surfaces that cover the whole box.
  const auto read_leaf = [&](int li) {
    LeafRec& lf = leaves_[li];
    removed.clear();
    for (int id : lf.conflicts)
      if (in[id]) {
        tracker.decrement(surfaces_[id].color);
        removed.push_back(id);
      }
    wk.traversal_touched += static_cast<long>(removed.size());
    lf.base = tracker.mode();
    for (int id : removed) tracker.increment(surfaces_[id].color);
  };

  const auto apply_move = [&](int from, int to) {
    reported.clear();
    long touched = 0;
    reporter(leaves_[from].anchor, leaves_[to].anchor, reported, touched);
    wk.traversal_touched += touched;
    for (int id : reported) {
      const bool was = in[id];
      const bool now = surfaces_[id].covers(leaves_[to].anchor);
      if (surfaces_[id].covers(leaves_[from].anchor) != was)
        throw std::runtime_error("cell traversal out of sync with its reporter");
      if (was == now)
        throw std::runtime_error("reporter returned a surface with unchanged coverage");
      if (now) {
        tracker.increment(surfaces_[id].color);
        in[id] = 1;
      } else {
        tracker.decrement(surfaces_[id].color);
        in[id] = 0;
      }
    }
  };

  for (long start = 0; start < nleaves; ++start) {
    if (visited[start]) continue;
    tracker.reset();
    std::fill(in.begin(), in.end(), 0);
    for (std::size_t id = 0; id < surfaces_.size(); ++id)
      if (surfaces_[id].covers(leaves_[start].anchor)) {
        tracker.increment(surfaces_[id].color);
        in[id] = 1;
      }
    wk.traversal_touched += static_cast<long>(surfaces_.size());

    std::vector<std::pair<int, std::size_t>> stack;
    visited[start] = 1;
    read_leaf(static_cast<int>(start));
    stack.emplace_back(static_cast<int>(start), 0);
    while (!stack.empty()) {
      const int u = stack.back().first;
      if (stack.back().second == adj[u].size()) {
        stack.pop_back();
        if (!stack.empty()) apply_move(u, stack.back().first);
        continue;
      }
      const int v = adj[u][stack.back().second++];
      if (visited[v]) continue;
      apply_move(u, v);
      visited[v] = 1;
      read_leaf(v);
      stack.emplace_back(v, 0);
    }
  }
  colored_ = true;
}

std::optional<ModeAnswer> SurfaceCutting::query_mode_ball(const ColorCounterSet& counters,
                                                          const Ball2& ball,
                                                          CellQueryStats* stats) const {
  if (!colored_) throw std::logic_error("cells are not colored yet");
  const QueryPoint3 w = ball_to_query_point(ball);
  const Surface::Kind want =
      ball.metric.tag == MetricTag::L2 ? Surface::Kind::Plane : Surface::Kind::Pyramid;
  if (surfaces_[0].kind != want || counters.kind() != want)
    throw std::invalid_argument("ball metric does not match the structure kind");
  CellQueryStats local;
  CellQueryStats& st = stats ? *stats : local;

  const long li = locate(w);
  if (li < 0) {
    st.oracle_fallback = true;
    return counters.scan_mode(w);
  }
  const LeafRec& lf = leaves_[li];
  st.capped_leaf = lf.capped;

  std::vector<Color> cand;
  if (lf.base.freq > 0) cand.push_back(lf.base.color);
  for (int id : lf.conflicts)
    if (surfaces_[id].covers(w)) cand.push_back(surfaces_[id].color);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  st.candidate_colors = static_cast<long>(cand.size());

  ModeAnswer best{-1, 0};
  for (Color c : cand) {
    const long f = counters.count(c, w);
    if (f > best.freq) best = {c, f};
  }
  if (best.freq <= 0) return std::nullopt;
  return best;
}

void SurfaceCutting::face_pairs(int na, int nb, int axis,
                                std::vector<std::pair<int, int>>& out) const {
  const NodeRec& a = nodes_[na];
  const NodeRec& b = nodes_[nb];
  const auto lo = [](const Box3& bx, int ax) {
    return ax == 0 ? bx.xlo : ax == 1 ? bx.ylo : bx.zlo;
  };
  const auto hi = [](const Box3& bx, int ax) {
    return ax == 0 ? bx.xhi : ax == 1 ? bx.yhi : bx.zhi;
  };
  for (int ax = 0; ax < 3; ++ax) {
    if (ax == axis) continue;
    if (std::min(hi(a.box, ax), hi(b.box, ax)) <= std::max(lo(a.box, ax), lo(b.box, ax)))
      return;  // shared face would have zero area
  }
  if (a.leaf >= 0 && b.leaf >= 0) {
    out.emplace_back(a.leaf, b.leaf);
    return;
  }
  if (a.leaf < 0) {
    if (a.axis == axis) {
      face_pairs(a.child[1], nb, axis, out);  // only the high half touches the face
    } else {
      face_pairs(a.child[0], nb, axis, out);
      face_pairs(a.child[1], nb, axis, out);
    }
  } else {
    if (b.axis == axis) {
      face_pairs(na, b.child[0], axis, out);  // only the low half touches the face
    } else {
      face_pairs(na, b.child[0], axis, out);
      face_pairs(na, b.child[1], axis, out);
    }
  }
}

void SurfaceCutting::collect_pairs(int nidx, std::vector<std::pair<int, int>>& out) const {
  const NodeRec& nd = nodes_[nidx];
  if (nd.leaf >= 0) return;
  collect_pairs(nd.child[0], out);
  collect_pairs(nd.child[1], out);
  face_pairs(nd.child[0], nd.child[1], nd.axis, out);
}

std::vector<std::pair<int, int>> SurfaceCutting::adjacent_leaf_pairs() const {
  std::vector<std::pair<int, int>> out;
  collect_pairs(0, out);
  return out;
}

}  // namespace chromaknn
