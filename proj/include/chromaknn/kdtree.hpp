#pragma once

#include <span>
#include <vector>

#include "chromaknn/geom.hpp"

namespace chromaknn {

// Balanced spatial subdivision tree over points in the plane (median splits
// on the wider axis, tight bounding boxes). All disk predicates are phrased
// as dual_value(p, q) >= z so they match the library-wide L2 membership test
// exactly; box-level shortcuts carry a small magnitude-scaled guard band and
// fall through to per-point tests whenever a box is anywhere near the
// boundary, so the shortcuts never change an answer.
class KdTree2D {
 public:
  explicit KdTree2D(std::span<const ColoredPoint2> pts, int leaf_size = 16);
  KdTree2D() = default;

  long size() const { return n_; }

  // Number of points in the closed L2 disk of radius r around q.
  long disk_count(const Point2& q, double r) const;
  // Same with an explicit threshold z: counts {p : dual_value(p, q) >= z}.
  long disk_count_z(const Point2& q, double z) const;

  // Points with r_inner < dist(p, q) <= r_outer; r_inner < 0 drops the inner
  // bound. Appends ids to out.
  void annulus_report(const Point2& q, double r_inner, double r_outer,
                      std::vector<int>& out) const;
  // Threshold form: z_outer <= dual_value(p, q) < z_inner (+-inf allowed).
  void annulus_report_z(const Point2& q, double z_outer, double z_inner,
                        std::vector<int>& out) const;

  // Points whose membership differs between disk (qa, za) and disk (qb, zb),
  // thresholds in dual form.
  void symdiff_report_z(const Point2& qa, double za, const Point2& qb, double zb,
                        std::vector<int>& out) const;

 private:
  struct Node {
    double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;
    int begin = 0, end = 0;
    int left = -1, right = -1;
  };

  enum class BoxSide { In, Out, Split };

  int build(int begin, int end, int leaf_size);
  BoxSide box_side(const Node& nd, const Point2& q, double z) const;
  long count_rec(int nidx, const Point2& q, double z) const;
  void annulus_rec(int nidx, const Point2& q, double z_outer, double z_inner,
                   std::vector<int>& out) const;
  void symdiff_rec(int nidx, const Point2& qa, double za, const Point2& qb, double zb,
                   std::vector<int>& out) const;
  void emit_all(int nidx, std::vector<int>& out) const;

  long n_ = 0;
  int root_ = -1;
  double mag_ = 1.0;  // coordinate magnitude bound used for the guard band
  std::vector<Node> nodes_;
  std::vector<int> ids_;     // point ids in leaf order
  std::vector<Point2> pos_;  // positions parallel to ids_
};

}  // namespace chromaknn
