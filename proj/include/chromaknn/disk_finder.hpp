#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chromaknn/kdtree.hpp"

namespace chromaknn {

struct FinderStats {
  long counting_calls = 0;
  long annulus_reported = 0;
};

// Exact k-th L2 distance queries. A fixed random sample (keep probability
// 1/sqrt(n)) brackets the answer: binary search over the sorted sample
// distances pins the radius between two consecutive sample values using exact
// disk counts, the annulus between them is reported, and the answer is
// selected from it by rank. The sample only shrinks the expected annulus; the
// result is exact for every sample, including the empty one.
class DiskFinder {
 public:
  DiskFinder(std::span<const ColoredPoint2> pts, std::uint64_t seed);

  long size() const { return n_; }
  const std::vector<int>& sample() const { return sample_; }
  const KdTree2D& tree() const { return tree_; }

  double kth_l2_radius(const Point2& q, long k, FinderStats* stats = nullptr) const;

 private:
  long n_ = 0;
  std::vector<Point2> pos_;  // by id
  KdTree2D tree_;
  std::vector<int> sample_;
};

}  // namespace chromaknn
