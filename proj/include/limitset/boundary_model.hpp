#pragma once

#include "limitset/geometry.hpp"

#include <vector>

namespace limitset {

/// A closed subset of the unit circle presented as the attractor of an
/// iterated function system on arc length: `maps` contractions of ratio
/// `ratio`, equally offset so the level-1 cylinders sit inside [0, 2pi] with
/// endpoints at 0 and 2pi. maps*ratio <= 1 is the open set condition; with
/// equality the attractor is the whole circle.
///
/// Every cylinder's endpoints belong to the attractor, so the left endpoint
/// serves as the cylinder's anchor: a designated point of X inside it.
class BoundaryModel {
  public:
    static BoundaryModel cantor(double ratio, int maps);
    static BoundaryModel full_circle() { return cantor(0.5, 2); }
    static BoundaryModel single_point() { return cantor(0.5, 1); }

    double ratio() const { return ratio_; }
    int maps() const { return maps_; }
    bool covers_circle() const { return maps_ * ratio_ >= 1.0 - 1e-14; }

    /// Solves maps * ratio^s = 1; 0 for a single map, n-1 for the circle.
    double similarity_dimension() const;

    struct Cylinder {
        double left_angle;    // anchor; a point of X
        double arc_length;    // 2*pi*ratio^level
    };

    /// Cylinder count at a level, as a double (may exceed 2^63).
    double cylinder_count(int level) const;

    /// Arc length of one level-l cylinder.
    double cylinder_arc(int level) const;

    /// Materialized cylinders at a level in angular order. Throws when the
    /// count exceeds max_count.
    std::vector<Cylinder> cylinders(int level, std::int64_t max_count = (1 << 26)) const;

    /// Anchor points on the circle, one row per level-l cylinder.
    Mat anchor_points(int level, std::int64_t max_count = (1 << 26)) const;

    /// Exact angular (arc-length) distance from an angle to X, by descent
    /// through the cylinder tree. prune_above allows early exit: the result
    /// is only guaranteed exact when it is <= prune_above.
    double angular_distance(double theta, double prune_above = 10.0) const;

    /// Euclidean distance from any point of R^2 to X.
    double distance(const Eigen::Ref<const Vec>& p) const;

    /// Smallest angular gap between adjacent level-l anchors (closed form);
    /// 0 for a single map.
    double min_anchor_gap(int level) const;

  private:
    BoundaryModel(double ratio, int maps);
    double ratio_;
    int maps_;
    double offset_step_;  // angular offset between consecutive level-1 maps
    int oracle_depth_;    // descent depth with arc below noise
};

}  // namespace limitset
