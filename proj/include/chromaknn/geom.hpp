#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace chromaknn {

using Color = int;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct ColoredPoint1 {
  double x = 0.0;
  Color color = 0;
  int id = -1;
};

struct ColoredPoint2 {
  Point2 pos;
  Color color = 0;
  int id = -1;
};

enum class MetricTag { L1, L2, Linf, Lm };

// Distance selector. On the line every L_m norm degenerates to |a - b|, so
// Lm(m) with arbitrary m >= 1 is accepted there; in the plane only L1, L2 and
// Linf are supported.
struct Metric {
  MetricTag tag = MetricTag::L2;
  double m = 2.0;

  static constexpr Metric l1() { return {MetricTag::L1, 1.0}; }
  static constexpr Metric l2() { return {MetricTag::L2, 2.0}; }
  static constexpr Metric linf() { return {MetricTag::Linf, 0.0}; }
  static Metric lm(double m) {
    if (!(m >= 1.0)) throw std::invalid_argument("Lm metric requires m >= 1");
    return {MetricTag::Lm, m};
  }
  const char* name() const {
    switch (tag) {
      case MetricTag::L1: return "l1";
      case MetricTag::L2: return "l2";
      case MetricTag::Linf: return "linf";
      case MetricTag::Lm: return "lm";
    }
    return "?";
  }
};

inline double distance(double p, double q, const Metric& = Metric::l2()) {
  return std::abs(p - q);
}

inline double sq_l2(const Point2& p, const Point2& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return dx * dx + dy * dy;
}

inline double distance(const Point2& p, const Point2& q, const Metric& metric) {
  const double dx = std::abs(p.x - q.x);
  const double dy = std::abs(p.y - q.y);
  switch (metric.tag) {
    case MetricTag::L1: return dx + dy;
    case MetricTag::L2: return std::sqrt(dx * dx + dy * dy);
    case MetricTag::Linf: return dx > dy ? dx : dy;
    case MetricTag::Lm: break;
  }
  throw std::invalid_argument("general Lm distances are only defined in 1D");
}

// Value at (x, y) of the plane attached to p, the graph z = 2 p.(x,y) - |p|^2.
// p lies in the closed L2 disk of radius r around q exactly when
// dual_value(p, q.x, q.y) >= l2_ball_z(q, r). Every L2 membership decision in
// the library funnels through this single comparison so that the brute-force
// reference, the counting structures and the cell queries agree bit for bit.
inline double dual_value(const Point2& p, double x, double y) {
  return 2.0 * p.x * x + 2.0 * p.y * y - (p.x * p.x + p.y * p.y);
}

inline double l2_ball_z(const Point2& q, double r) {
  return q.x * q.x + q.y * q.y - r * r;
}

inline bool in_l2_ball(const Point2& p, const Point2& q, double r) {
  return dual_value(p, q.x, q.y) >= l2_ball_z(q, r);
}

// Smallest double r with r*r >= d2. Radii are reported in distance units but
// membership tests square them again, so the square root must never round
// below the squared distance it came from.
inline double radius_from_d2(double d2) {
  double r = std::sqrt(d2);
  while (r * r < d2) r = std::nextafter(r, std::numeric_limits<double>::infinity());
  return r;
}

struct Ball1 {
  double center = 0.0;
  double radius = 0.0;
  bool contains(double p) const { return std::abs(p - center) <= radius; }
};

// Closed metric ball in the plane.
struct Ball2 {
  Point2 center;
  double radius = 0.0;
  Metric metric = Metric::l2();
  bool contains(const Point2& p) const {
    if (metric.tag == MetricTag::L2) return in_l2_ball(p, center, radius);
    return distance(p, center, metric) <= radius;
  }
};

inline Point3 lift(const Point2& p) { return {p.x, p.y, p.x * p.x + p.y * p.y}; }

// A ball query rephrased as a point in (x, y, z) space; see Surface::covers.
struct QueryPoint3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// The xy -> z graph attached to one input point: for L2 queries the plane
// dual to the lifted point, for Linf queries the cone of Linf distances from
// the point. covers(w) holds exactly when the point lies in the ball that w
// encodes.
struct Surface {
  enum class Kind { Plane, Pyramid };

  Kind kind = Kind::Plane;
  double a = 0.0, b = 0.0, c = 0.0;  // plane z = a*x + b*y + c
  Point2 apex;                       // source point; pyramid z = Linf(apex, (x, y))
  Color color = 0;
  int source_id = -1;

  static Surface plane_of(const Point2& p, Color color, int id) {
    Surface s;
    s.kind = Kind::Plane;
    s.a = 2.0 * p.x;
    s.b = 2.0 * p.y;
    s.c = -(p.x * p.x + p.y * p.y);
    s.apex = p;
    s.color = color;
    s.source_id = id;
    return s;
  }

  static Surface pyramid_of(const Point2& p, Color color, int id) {
    Surface s;
    s.kind = Kind::Pyramid;
    s.apex = p;
    s.color = color;
    s.source_id = id;
    return s;
  }

  double plane_value(double x, double y) const { return a * x + b * y + c; }

  bool covers(const QueryPoint3& w) const {
    if (kind == Kind::Plane) return plane_value(w.x, w.y) >= w.z;
    const double dx = std::abs(apex.x - w.x);
    const double dy = std::abs(apex.y - w.y);
    return (dx > dy ? dx : dy) <= w.z;
  }
};

inline QueryPoint3 ball_to_query_point(const Ball2& ball) {
  switch (ball.metric.tag) {
    case MetricTag::L2:
      return {ball.center.x, ball.center.y, l2_ball_z(ball.center, ball.radius)};
    case MetricTag::Linf:
      return {ball.center.x, ball.center.y, ball.radius};
    default:
      throw std::invalid_argument("query points exist only for L2 and Linf balls");
  }
}

// L1 distances in the original frame equal Linf distances after the
// half-turn shear (x, y) -> (x + y, x - y).
inline Point2 rotate_l1_to_linf(const Point2& p) { return {p.x + p.y, p.x - p.y}; }

}  // namespace chromaknn
