#include "chromaknn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chromaknn {

namespace {

void require_k(long k, long n) {
  if (k < 1 || k > n)
    throw std::out_of_range("k must be in [1, n], got " + std::to_string(k));
}

}  // namespace

Pipeline1D::Pipeline1D(std::vector<ColoredPoint1> pts, BuildOptions opts) {
  if (pts.empty()) throw std::invalid_argument("point set must not be empty");
  std::stable_sort(pts.begin(), pts.end(),
                   [](const auto& a, const auto& b) { return a.x < b.x; });
  xs_.reserve(pts.size());
  colors_.reserve(pts.size());
  ids_.reserve(pts.size());
  for (const auto& p : pts) {
    xs_.push_back(p.x);
    colors_.push_back(p.color);
    ids_.push_back(p.id);
  }
  tree_ = SizeTree::from_sorted(xs_);
  table_.emplace(colors_);
  if (opts.epsilon > 0.0) jumps_.emplace(colors_, opts.epsilon);
}

std::pair<long, long> Pipeline1D::ball_index_range(double q, double radius) const {
  const double lo = q - radius;
  const double hi = q + radius;
  const long i = std::lower_bound(xs_.begin(), xs_.end(), lo) - xs_.begin();
  const long j = std::upper_bound(xs_.begin(), xs_.end(), hi) - xs_.begin() - 1;
  return {i, j};
}

ChromaticAnswer Pipeline1D::query(double q, long k, QueryCounters* counters) const {
  require_k(k, size());
  RankMergeStats rs;
  const RadiusResult1D rad = find_radius_1d(tree_, q, k, &rs);
  const auto [i, j] = ball_index_range(q, rad.radius);
  ModeQueryStats ms;
  const ModeAnswer m = table_->mode(i, j, &ms);
  if (counters) {
    counters->rank_comparisons += rs.comparisons;
    counters->mode_scans += ms.candidate_scans;
  }
  return {m.color, m.freq, rad.radius};
}

ChromaticAnswer Pipeline1D::query_approx(double q, long k, QueryCounters* counters) const {
  if (!jumps_)
    throw std::logic_error("approximate queries need epsilon > 0 at build time");
  require_k(k, size());
  RankMergeStats rs;
  const RadiusResult1D rad = find_radius_1d(tree_, q, k, &rs);
  const auto [i, j] = ball_index_range(q, rad.radius);
  const JumpListSet::ApproxAnswer a = jumps_->query(i, j);
  if (counters) counters->rank_comparisons += rs.comparisons;
  return {a.color, a.freq, rad.radius};
}

long Pipeline1D::count_in_ball(double q, double radius, long* radius_calls) const {
  long calls = 0;
  const auto kth = [&](long k) {
    ++calls;
    return find_radius_1d(tree_, q, k).radius;
  };
  long count = 0;
  if (radius >= 0.0 && kth(1) <= radius) {
    long lo = 1, hi = size() + 1;  // kth(lo) <= radius < kth(hi)
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      (kth(mid) <= radius ? lo : hi) = mid;
    }
    count = lo;
  }
  if (radius_calls) *radius_calls += calls;
  return count;
}

Pipeline2D::Pipeline2D(std::vector<ColoredPoint2> pts, Metric metric, BuildOptions opts)
    : metric_(metric), work_(std::move(pts)) {
  if (work_.empty()) throw std::invalid_argument("point set must not be empty");
  if (metric_.tag == MetricTag::Lm)
    throw std::invalid_argument("general Lm metrics are only supported in 1D");
  const long n = static_cast<long>(work_.size());
  for (long i = 0; i < n; ++i) {
    work_[i].id = static_cast<int>(i);
    if (metric_.tag == MetricTag::L1) work_[i].pos = rotate_l1_to_linf(work_[i].pos);
  }
  r_ = opts.r > 0 ? opts.r : static_cast<long>(std::ceil(std::cbrt(double(n))));
  r_ = std::min(r_, n);

  std::vector<Surface> surfaces;
  surfaces.reserve(work_.size());
  SymDiffReporter reporter;
  if (metric_.tag == MetricTag::L2) {
    finder_.emplace(work_, opts.seed);
    for (const auto& p : work_)
      surfaces.push_back(Surface::plane_of(p.pos, p.color, p.id));
    counters_.emplace(work_, Surface::Kind::Plane);
    reporter = make_disk_symdiff_reporter(finder_->tree());
  } else {
    rtree_.emplace(work_, opts.fanout, opts.delta);
    for (const auto& p : work_)
      surfaces.push_back(Surface::pyramid_of(p.pos, p.color, p.id));
    counters_.emplace(work_, Surface::Kind::Pyramid);
    reporter = make_square_symdiff_reporter(*rtree_, work_);
  }
  cutting_.emplace(std::move(surfaces), r_, opts.depth_cap);
  cutting_->color_cells_traversal(reporter, &work_stats_);
}

double Pipeline2D::kth_radius(const Point2& wq, long k, QueryCounters* counters) const {
  if (metric_.tag == MetricTag::L2) {
    FinderStats fs;
    const double r = finder_->kth_l2_radius(wq, k, &fs);
    if (counters) {
      counters->counting_calls += fs.counting_calls;
      counters->annulus_reported += fs.annulus_reported;
    }
    return r;
  }
  RadiusSearchStats rs;
  const double r = rtree_->kth_linf_radius(wq, k, &rs);
  if (counters) counters->counting_calls += rs.counting_calls;
  return r;
}

ChromaticAnswer Pipeline2D::query(const Point2& q, long k, QueryCounters* counters) const {
  require_k(k, size());
  const Point2 wq = metric_.tag == MetricTag::L1 ? rotate_l1_to_linf(q) : q;
  const double radius = kth_radius(wq, k, counters);
  const Metric ball_metric =
      metric_.tag == MetricTag::L2 ? Metric::l2() : Metric::linf();
  CellQueryStats cs;
  const auto m = cutting_->query_mode_ball(*counters_, {wq, radius, ball_metric}, &cs);
  if (counters) {
    counters->candidate_colors += cs.candidate_colors;
    counters->oracle_fallback = counters->oracle_fallback || cs.oracle_fallback;
  }
  if (!m) throw std::logic_error("ball of the k-th distance came back empty");
  return {m->color, m->freq, radius};
}

Pipeline1D pipeline_from_array(std::span<const Color> a, BuildOptions opts) {
  std::vector<ColoredPoint1> pts;
  pts.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    pts.push_back({static_cast<double>(i), a[i], static_cast<int>(i)});
  return Pipeline1D(std::move(pts), opts);
}

ChromaticAnswer array_mode_via_chromatic(const Pipeline1D& pipe, long i, long j,
                                         QueryCounters* counters) {
  if (i < 0 || j >= pipe.size() || i > j)
    throw std::out_of_range("need 0 <= i <= j < n");
  // Integer positions: the ball of the (j - i + 1)-th distance around the
  // midpoint is exactly [i, j].
  const double q = (static_cast<double>(i) + static_cast<double>(j)) / 2.0;
  return pipe.query(q, j - i + 1, counters);
}

}  // namespace chromaknn
