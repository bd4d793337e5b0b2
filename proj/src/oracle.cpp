#include "chromaknn/oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace chromaknn {

namespace {

void check_k(long k, std::size_t n, const char* who) {
  if (k < 1 || k > static_cast<long>(n))
    throw std::out_of_range(std::string(who) + ": k must be in [1, n]");
}

template <typename It>
std::optional<ModeAnswer> mode_of(It first, It last) {
  std::map<Color, long> counts;
  for (It it = first; it != last; ++it) ++counts[*it];
  std::optional<ModeAnswer> best;
  for (const auto& [color, freq] : counts) {
    if (!best || freq > best->freq) best = ModeAnswer{color, freq};
  }
  return best;
}

}  // namespace

double oracle_kth_radius(std::span<const ColoredPoint1> pts, double q, long k,
                         const Metric& metric) {
  check_k(k, pts.size(), "oracle_kth_radius");
  std::vector<double> d;
  d.reserve(pts.size());
  for (const auto& p : pts) d.push_back(distance(p.x, q, metric));
  std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
  return d[k - 1];
}

double oracle_kth_radius(std::span<const ColoredPoint2> pts, const Point2& q, long k,
                         const Metric& metric) {
  check_k(k, pts.size(), "oracle_kth_radius");
  if (metric.tag == MetricTag::L2) {
    std::vector<double> d2;
    d2.reserve(pts.size());
    for (const auto& p : pts) d2.push_back(sq_l2(p.pos, q));
    std::nth_element(d2.begin(), d2.begin() + (k - 1), d2.end());
    return radius_from_d2(d2[k - 1]);
  }
  std::vector<double> d;
  d.reserve(pts.size());
  for (const auto& p : pts) d.push_back(distance(p.pos, q, metric));
  std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
  return d[k - 1];
}

std::optional<ModeAnswer> oracle_mode_in_ball(std::span<const ColoredPoint1> pts,
                                              const Ball1& ball) {
  std::vector<Color> inside;
  for (const auto& p : pts)
    if (ball.contains(p.x)) inside.push_back(p.color);
  return mode_of(inside.begin(), inside.end());
}

std::optional<ModeAnswer> oracle_mode_in_ball(std::span<const ColoredPoint2> pts,
                                              const Ball2& ball) {
  std::vector<Color> inside;
  for (const auto& p : pts)
    if (ball.contains(p.pos)) inside.push_back(p.color);
  return mode_of(inside.begin(), inside.end());
}

long oracle_range_count(std::span<const ColoredPoint1> pts, const Ball1& ball) {
  long c = 0;
  for (const auto& p : pts)
    if (ball.contains(p.x)) ++c;
  return c;
}

long oracle_range_count(std::span<const ColoredPoint2> pts, const Ball2& ball) {
  long c = 0;
  for (const auto& p : pts)
    if (ball.contains(p.pos)) ++c;
  return c;
}

OracleAnswer oracle_chromatic(std::span<const ColoredPoint1> pts, double q, long k,
                              const Metric& metric) {
  const double r = oracle_kth_radius(pts, q, k, metric);
  const Ball1 ball{q, r};
  OracleAnswer ans;
  ans.kth_radius = r;
  std::vector<std::pair<double, int>> in;
  for (const auto& p : pts)
    if (ball.contains(p.x)) in.emplace_back(distance(p.x, q, metric), p.id);
  std::sort(in.begin(), in.end());
  for (const auto& [d, id] : in) ans.knn_ids.push_back(id);
  if (auto m = oracle_mode_in_ball(pts, ball)) {
    ans.mode_color = m->color;
    ans.mode_frequency = m->freq;
  }
  return ans;
}

OracleAnswer oracle_chromatic(std::span<const ColoredPoint2> pts, const Point2& q, long k,
                              const Metric& metric) {
  const double r = oracle_kth_radius(pts, q, k, metric);
  const Ball2 ball{q, r, metric};
  OracleAnswer ans;
  ans.kth_radius = r;
  std::vector<std::pair<double, int>> in;
  for (const auto& p : pts)
    if (ball.contains(p.pos)) in.emplace_back(distance(p.pos, q, metric), p.id);
  std::sort(in.begin(), in.end());
  for (const auto& [d, id] : in) ans.knn_ids.push_back(id);
  if (auto m = oracle_mode_in_ball(pts, ball)) {
    ans.mode_color = m->color;
    ans.mode_frequency = m->freq;
  }
  return ans;
}

}  // namespace chromaknn
