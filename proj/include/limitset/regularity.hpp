#pragma once

#include "limitset/boundary_model.hpp"
#include "limitset/pointset.hpp"

#include <string>
#include <vector>

namespace limitset {

/// Nearest-neighbour ratios rho(x) = d_NN(x) / (1-|x|). A set is separated
/// with constant c1 exactly when c1_hat >= c1; alpha_fit estimates the
/// exponent in d_NN ~ (1-|x|)^alpha over the deepest half of the points.
struct SeparationProfile {
    std::vector<double> nn_dist;
    std::vector<double> ratios;
    double c1_hat = 0.0;
    double alpha_fit = 0.0;
    bool is_separated(double c1) const { return c1_hat >= c1; }
};

/// Distance-to-reference ratios a(x) = dist(x, L_ref) / (1-|x|); beta_fit
/// estimates the exponent in dist ~ (1-|x|)^beta over the deepest half.
struct ApproximationProfile {
    std::vector<double> dist;
    std::vector<double> ratios;
    double c2_hat = 0.0;
    double beta_fit = 0.0;
    std::string reference_mode;  // "model" or "cloud"
    bool is_well_approximated(double c2) const { return c2_hat <= c2; }
};

/// Cone test parameters: witnesses must satisfy |x-z| <= c*(1-|x|)^gamma with
/// (1-|x|) <= r for every dyadic r down to `resolution`.
struct RadialQuery {
    double c = 1.0;
    double gamma = 1.0;
    double resolution = 1e-3;
};

struct RadialMembership {
    bool accepted = false;
    std::vector<int> witness_chain;  // per dyadic scale j = 0..J, -1 if none
    int first_failure_scale = -1;
};

/// Finite-resolution limit-set surrogate: radial projections x/|x| of all
/// points with boundary gap <= rho. Documented Hausdorff error against L(E)
/// is (1+c2)*rho when E is well-approximated with constant c2.
Mat approximate_limit_set(const DiscretePointSet& E, double rho);

/// Exact nearest-neighbour profile (throws when points collapse below
/// coordinate resolution; truncate first).
SeparationProfile separation_profile(const DiscretePointSet& E);

ApproximationProfile approximation_profile(const DiscretePointSet& E, const Mat& ref_cloud);
ApproximationProfile approximation_profile(const DiscretePointSet& E, const BoundaryModel& X);

/// Radial limit membership for each candidate boundary point, with one
/// witness per dyadic scale. Dyadic scales stand in for the quantifier over
/// all r > 0 (a factor 2 absorbed into c).
std::vector<RadialMembership> radial_members(const DiscretePointSet& E, const Mat& candidates,
                                             const RadialQuery& q);

}  // namespace limitset
