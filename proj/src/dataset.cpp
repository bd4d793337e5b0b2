#include "chromaknn/dataset.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace chromaknn {

namespace {

constexpr double kGrid = 1024.0;

long grid_span(double extent) {
  if (extent <= 0.0) throw std::invalid_argument("extent must be positive");
  return static_cast<long>(extent * kGrid);
}

double draw_coord(std::mt19937_64& rng, long span) {
  const std::uint64_t m = static_cast<std::uint64_t>(2 * span + 1);
  const long j = static_cast<long>(rng() % m) - span;
  return static_cast<double>(j) / kGrid;
}

int draw_color(std::mt19937_64& rng, int colors) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(colors));
}

void check_gen(long n, int colors) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (colors < 1) throw std::invalid_argument("colors must be at least 1");
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over the pair, so derived streams never collide trivially
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<ColoredPoint1> make_points_1d(long n, int colors, std::uint64_t seed,
                                          double extent) {
  check_gen(n, colors);
  const long span = grid_span(extent);
  std::mt19937_64 rng(mix_seed(seed, 0x1d));
  std::vector<ColoredPoint1> pts(n);
  for (long i = 0; i < n; ++i)
    pts[i] = {draw_coord(rng, span), draw_color(rng, colors), static_cast<int>(i)};
  return pts;
}

std::vector<ColoredPoint2> make_points_2d(long n, int colors, std::uint64_t seed,
                                          double extent) {
  check_gen(n, colors);
  const long span = grid_span(extent);
  std::mt19937_64 rng(mix_seed(seed, 0x2d));
  std::vector<ColoredPoint2> pts(n);
  for (long i = 0; i < n; ++i) {
    const double x = draw_coord(rng, span);
    const double y = draw_coord(rng, span);
    pts[i] = {{x, y}, draw_color(rng, colors), static_cast<int>(i)};
  }
  return pts;
}

std::vector<double> make_queries_1d(long count, std::uint64_t seed, double extent) {
  if (count < 0) throw std::invalid_argument("count must be non-negative");
  const long span = grid_span(extent);
  std::mt19937_64 rng(mix_seed(seed, 0x51));
  std::vector<double> qs(count);
  for (auto& q : qs) q = draw_coord(rng, span);
  return qs;
}

std::vector<Point2> make_queries_2d(long count, std::uint64_t seed, double extent) {
  if (count < 0) throw std::invalid_argument("count must be non-negative");
  const long span = grid_span(extent);
  std::mt19937_64 rng(mix_seed(seed, 0x52));
  std::vector<Point2> qs(count);
  for (auto& q : qs) {
    q.x = draw_coord(rng, span);
    q.y = draw_coord(rng, span);
  }
  return qs;
}

std::vector<Color> make_color_array(long n, int colors, std::uint64_t seed) {
  check_gen(n, colors);
  std::mt19937_64 rng(mix_seed(seed, 0xa7));
  std::vector<Color> a(n);
  for (auto& c : a) c = draw_color(rng, colors);
  return a;
}

namespace {

class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Next data line split on commas, fields trimmed; false at end of input.
  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      const auto first = line.find_first_not_of(" \t\r\n");
      if (first == std::string::npos || line[first] == '#') continue;
      fields.clear();
      std::stringstream ss(line);
      std::string tok;
      while (std::getline(ss, tok, ',')) fields.push_back(trim(tok));
      if (!line.empty() && line.back() == ',') fields.push_back("");
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("line " + std::to_string(lineno_) + ": " + what);
  }

  double number(const std::string& tok) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) fail("bad number '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("bad number '" + tok + "'");
    }
  }

  long integer(const std::string& tok) const {
    try {
      std::size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used != tok.size()) fail("bad integer '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("bad integer '" + tok + "'");
    }
  }

 private:
  static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

  std::istream& in_;
  long lineno_ = 0;
};

int color_label(const std::string& tok, std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == tok) return static_cast<int>(i);
  names.push_back(tok);
  return static_cast<int>(names.size()) - 1;
}

}  // namespace

Dataset1D load_points_1d(std::istream& in) {
  Dataset1D ds;
  CsvReader rd(in);
  std::vector<std::string> f;
  while (rd.next(f)) {
    if (f.size() != 2) rd.fail("expected 2 fields (x,color)");
    if (f[1].empty()) rd.fail("empty color token");
    const double x = rd.number(f[0]);
    const int c = color_label(f[1], ds.color_names);
    ds.points.push_back({x, c, static_cast<int>(ds.points.size())});
  }
  return ds;
}

Dataset2D load_points_2d(std::istream& in) {
  Dataset2D ds;
  CsvReader rd(in);
  std::vector<std::string> f;
  while (rd.next(f)) {
    if (f.size() != 3) rd.fail("expected 3 fields (x,y,color)");
    if (f[2].empty()) rd.fail("empty color token");
    const double x = rd.number(f[0]);
    const double y = rd.number(f[1]);
    const int c = color_label(f[2], ds.color_names);
    ds.points.push_back({{x, y}, c, static_cast<int>(ds.points.size())});
  }
  return ds;
}

std::vector<QueryRecord1> load_queries_1d(std::istream& in) {
  std::vector<QueryRecord1> qs;
  CsvReader rd(in);
  std::vector<std::string> f;
  while (rd.next(f)) {
    if (f.size() != 2) rd.fail("expected 2 fields (x,k)");
    qs.push_back({rd.number(f[0]), rd.integer(f[1])});
  }
  return qs;
}

std::vector<QueryRecord2> load_queries_2d(std::istream& in) {
  std::vector<QueryRecord2> qs;
  CsvReader rd(in);
  std::vector<std::string> f;
  while (rd.next(f)) {
    if (f.size() != 3) rd.fail("expected 3 fields (x,y,k)");
    qs.push_back({{rd.number(f[0]), rd.number(f[1])}, rd.integer(f[2])});
  }
  return qs;
}

}  // namespace chromaknn
