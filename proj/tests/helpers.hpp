#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "chromaknn/dataset.hpp"
#include "chromaknn/geom.hpp"

namespace testutil {

using namespace chromaknn;

// Coordinates on the grid j/1024 with |x| <= extent keep every squared
// distance and dual value exactly representable, so brute-force checks can
// compare doubles with ==.
inline double grid_coord(std::mt19937_64& rng, double extent = 32.0) {
  long span = static_cast<long>(extent * 1024.0);
  long v = static_cast<long>(rng() % static_cast<unsigned long>(2 * span + 1)) - span;
  return static_cast<double>(v) / 1024.0;
}

inline std::vector<Color> brute_counts(const std::vector<ColoredPoint2>& pts,
                                       int colors, const Ball2& ball) {
  std::vector<Color> counts(static_cast<size_t>(colors), 0);
  for (const auto& p : pts)
    if (ball.contains(p.pos)) ++counts[static_cast<size_t>(p.color)];
  return counts;
}

struct BruteMode {
  Color color = -1;
  long freq = 0;
};

// Smallest color label among the maximizers, matching the oracle contract.
inline BruteMode brute_mode(const std::vector<long>& counts) {
  BruteMode best;
  for (size_t c = 0; c < counts.size(); ++c)
    if (counts[c] > best.freq) {
      best.freq = counts[c];
      best.color = static_cast<Color>(c);
    }
  return best;
}

inline BruteMode brute_array_mode(const std::vector<Color>& a, size_t i, size_t j) {
  Color cmax = *std::max_element(a.begin(), a.end());
  std::vector<long> counts(static_cast<size_t>(cmax) + 1, 0);
  for (size_t p = i; p <= j; ++p) ++counts[static_cast<size_t>(a[p])];
  return brute_mode(counts);
}

}  // namespace testutil
