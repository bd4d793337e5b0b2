#pragma once

#include <optional>
#include <span>
#include <vector>

#include "chromaknn/geom.hpp"

namespace chromaknn {

struct ModeAnswer {
  Color color = -1;
  long freq = 0;
};

struct OracleAnswer {
  Color mode_color = -1;
  long mode_frequency = 0;
  double kth_radius = 0.0;
  std::vector<int> knn_ids;  // every point inside the closed ball of kth_radius
};

// Brute-force reference implementations. Everything else in the library is
// tested against these; they favour clarity over speed.

double oracle_kth_radius(std::span<const ColoredPoint1> pts, double q, long k,
                         const Metric& metric = Metric::l2());
double oracle_kth_radius(std::span<const ColoredPoint2> pts, const Point2& q, long k,
                         const Metric& metric);

// Most frequent color inside the closed ball, ties broken toward the smallest
// color label; empty ball -> nullopt.
std::optional<ModeAnswer> oracle_mode_in_ball(std::span<const ColoredPoint1> pts,
                                              const Ball1& ball);
std::optional<ModeAnswer> oracle_mode_in_ball(std::span<const ColoredPoint2> pts,
                                              const Ball2& ball);

long oracle_range_count(std::span<const ColoredPoint1> pts, const Ball1& ball);
long oracle_range_count(std::span<const ColoredPoint2> pts, const Ball2& ball);

// Chromatic k-nearest-neighbor query: mode of the closed ball whose radius is
// the k-th smallest distance from q to the point set.
OracleAnswer oracle_chromatic(std::span<const ColoredPoint1> pts, double q, long k,
                              const Metric& metric = Metric::l2());
OracleAnswer oracle_chromatic(std::span<const ColoredPoint2> pts, const Point2& q, long k,
                              const Metric& metric);

}  // namespace chromaknn
