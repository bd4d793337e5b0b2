#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "chromaknn/geom.hpp"

namespace chromaknn {

// Deterministic test-data generation. Coordinates land on the grid j/1024
// with |coordinate| <= extent, so sums, differences and squares of any two
// generated values stay exactly representable; the raw engine output is
// mapped to integers directly, keeping sequences identical across standard
// libraries.

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

std::vector<ColoredPoint1> make_points_1d(long n, int colors, std::uint64_t seed,
                                          double extent = 32.0);
std::vector<ColoredPoint2> make_points_2d(long n, int colors, std::uint64_t seed,
                                          double extent = 32.0);
std::vector<double> make_queries_1d(long count, std::uint64_t seed, double extent = 32.0);
std::vector<Point2> make_queries_2d(long count, std::uint64_t seed, double extent = 32.0);
std::vector<Color> make_color_array(long n, int colors, std::uint64_t seed);

// CSV input. Lines hold comma-separated fields; blank lines and lines
// starting with '#' are skipped. Colors are arbitrary tokens, mapped to dense
// labels in first-seen order (color_names[label] holds the token). Malformed
// input raises std::runtime_error naming the line.

struct Dataset1D {
  std::vector<ColoredPoint1> points;
  std::vector<std::string> color_names;
};

struct Dataset2D {
  std::vector<ColoredPoint2> points;
  std::vector<std::string> color_names;
};

Dataset1D load_points_1d(std::istream& in);  // x,color
Dataset2D load_points_2d(std::istream& in);  // x,y,color

struct QueryRecord1 {
  double x = 0.0;
  long k = 0;
};

struct QueryRecord2 {
  Point2 q{0.0, 0.0};
  long k = 0;
};

std::vector<QueryRecord1> load_queries_1d(std::istream& in);  // x,k
std::vector<QueryRecord2> load_queries_2d(std::istream& in);  // x,y,k

}  // namespace chromaknn
