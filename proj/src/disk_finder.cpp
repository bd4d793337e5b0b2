#include "chromaknn/disk_finder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace chromaknn {

DiskFinder::DiskFinder(std::span<const ColoredPoint2> pts, std::uint64_t seed)
    : n_(static_cast<long>(pts.size())), tree_(pts) {
  pos_.resize(n_);
  for (const auto& p : pts) {
    if (p.id < 0 || p.id >= n_)
      throw std::invalid_argument("point ids must be a permutation of 0..n-1");
    pos_[p.id] = p.pos;
  }
  if (n_ > 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double keep = 1.0 / std::sqrt(static_cast<double>(n_));
    for (long id = 0; id < n_; ++id)
      if (unit(rng) < keep) sample_.push_back(static_cast<int>(id));
  }
}

double DiskFinder::kth_l2_radius(const Point2& q, long k, FinderStats* stats) const {
  if (k < 1 || k > n_) throw std::out_of_range("kth_l2_radius: k out of range");
  FinderStats local;
  FinderStats& st = stats ? *stats : local;

  std::vector<double> sd2;
  sd2.reserve(sample_.size());
  for (int id : sample_) sd2.push_back(sq_l2(pos_[id], q));
  std::sort(sd2.begin(), sd2.end());

  const double qq = q.x * q.x + q.y * q.y;
  const auto count_at = [&](double d2) {
    ++st.counting_calls;
    return tree_.disk_count_z(q, qq - d2);
  };

  // First sample distance whose disk already holds k points.
  const long m = static_cast<long>(sd2.size());
  long lo = 0, hi = m;
  while (lo < hi) {
    const long mid = (lo + hi) / 2;
    if (count_at(sd2[mid]) >= k) hi = mid;
    else lo = mid + 1;
  }

  const bool has_inner = lo > 0;
  const bool has_outer = lo < m;
  const long inner_count = has_inner ? count_at(sd2[lo - 1]) : 0;
  const double z_inner =
      has_inner ? qq - sd2[lo - 1] : std::numeric_limits<double>::infinity();
  const double z_outer =
      has_outer ? qq - sd2[lo] : -std::numeric_limits<double>::infinity();

  std::vector<int> annulus;
  tree_.annulus_report_z(q, z_outer, z_inner, annulus);
  st.annulus_reported = static_cast<long>(annulus.size());

  const long rank = k - inner_count;
  if (rank < 1 || rank > static_cast<long>(annulus.size()))
    throw std::logic_error("kth_l2_radius: bracketing annulus missed the answer");

  std::vector<double> d2;
  d2.reserve(annulus.size());
  for (int id : annulus) d2.push_back(sq_l2(pos_[id], q));
  std::nth_element(d2.begin(), d2.begin() + (rank - 1), d2.end());
  return radius_from_d2(d2[rank - 1]);
}

}  // namespace chromaknn
