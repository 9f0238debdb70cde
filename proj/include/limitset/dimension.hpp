#pragma once

#include "limitset/pointset.hpp"

#include <string>
#include <vector>

namespace limitset {

/// Greedy maximal delta-packing of a finite point cloud: centers lie in the
/// cloud, pairwise distances > 2*delta (disjoint closed balls of radius
/// delta), and every cloud point is within 2*delta of some center.
struct PackingResult {
    double delta = 0.0;
    std::vector<int> centers;  // indices into the cloud
    int count() const { return static_cast<int>(centers.size()); }
};

PackingResult packing_number(const Mat& cloud, double delta);

/// Box-dimension estimate from packing counts over dyadic scales
/// 2^-k, k in [k_min, k_max]. slope is the least-squares fit of
/// log2 N_{2^-k} vs k; lower/upper are the min and max two-point slopes
/// between consecutive scales, clamped to [0, n].
struct BoxDimensionEstimate {
    double slope = 0.0;
    double lower_slope = 0.0;
    double upper_slope = 0.0;
    std::vector<std::pair<int, double>> counts;  // (k, N_{2^-k})
};

BoxDimensionEstimate box_dimension_estimate(const Mat& cloud, int k_min, int k_max);

/// Cover mass at one exponent: sum of (2c * gap)^s over the truncated tail
/// E^r = {gap <= r}; these balls form a 2cr-cover of the c-radial limit set.
struct CoverEstimate {
    double s = 0.0;
    double mass = 0.0;
    double scale = 0.0;  // max ball diameter used
};

CoverEstimate cover_mass(const DiscretePointSet& E, double c, double r, double s);

/// Smallest s (bisection to 1e-3) whose cover mass is <= budget; upper
/// bound machinery for the Hausdorff dimension of the c-radial limit set.
/// Requires 2c*r < 1 so the mass is monotone in s.
double hausdorff_upper_bound(const DiscretePointSet& E, double c, double r, double budget);

/// (k, N_{2^-k}) rows for plotting.
std::string packing_counts_csv(const BoxDimensionEstimate& est);

/// (s, mass) rows for a grid of exponents.
std::string cover_mass_csv(const DiscretePointSet& E, double c, double r,
                           const std::vector<double>& s_grid);

}  // namespace limitset
