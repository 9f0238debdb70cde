#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace limitset {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;  // one point per row

/// Points closer than this to the unit sphere are rejected as interior points:
/// 1 - |x| would underflow into noise.
constexpr double kInteriorSlack = 1e-12;

bool is_interior(const Eigen::Ref<const Vec>& x);

/// Euclidean distance of an interior point to the boundary sphere, 1 - |x|.
double boundary_gap(const Eigen::Ref<const Vec>& x);

/// Hyperbolic distance from the origin, log((1+|x|)/(1-|x|)) in the ball
/// model, so that exp(-d) = (1-|x|)/(1+|x|).
double hyperbolic_distance_origin(const Eigen::Ref<const Vec>& x);

/// Same distance computed from a known boundary gap; stable for gaps far
/// below coordinate resolution.
double hyperbolic_distance_from_gap(double gap);

/// Maximal r-separated subset of S^{n-1}: pairwise distances >= r and every
/// boundary point within r of some net point. n = 2 uses the exact
/// equally-spaced net; n >= 3 uses greedy farthest-point insertion over a
/// seeded candidate pool with random refinement. Deterministic given seed.
Mat sphere_net(int n, double r, std::uint64_t seed);

/// Greedy farthest-point subset of size k on S^{n-1} (seeded start point).
Mat sphere_points_max_separated(int n, int k, std::uint64_t seed);

/// Uniformly random boundary points (seeded), one per row.
Mat random_boundary_points(int n, int count, std::uint64_t seed);

/// Bucketed grid over [-1,1]^n with a fixed cell width. Points are
/// immutable after construction; queries are read-only.
class GridIndex {
  public:
    GridIndex(const Mat& points, double cell_width);

    /// Indices of all points with |p - x| <= radius. Exact (no misses, no
    /// extras), any radius.
    std::vector<int> range_query(const Eigen::Ref<const Vec>& x, double radius) const;

    /// Nearest indexed point to x. With exclude set, that index is skipped
    /// (used for self-queries).
    std::pair<int, double> nearest_neighbor(const Eigen::Ref<const Vec>& x,
                                            std::optional<int> exclude = std::nullopt) const;

    int size() const { return static_cast<int>(points_.rows()); }
    double cell_width() const { return h_; }

  private:
    std::int64_t cell_of(const Eigen::Ref<const Vec>& x, int axis) const;
    std::uint64_t key_of(const Eigen::Ref<const Vec>& x) const;

    Mat points_;
    double h_;
    int n_;
    std::int64_t cells_per_axis_;
    // CSR over cell keys: sorted unique keys, offsets, point ids
    std::vector<std::uint64_t> keys_;
    std::vector<int> offsets_;
    std::vector<int> ids_;
};

/// Linear-scan oracles, used by tests and as fallbacks on small inputs.
std::pair<int, double> nearest_neighbor_linear(const Mat& points, const Eigen::Ref<const Vec>& x,
                                               std::optional<int> exclude = std::nullopt);
std::vector<int> range_query_linear(const Mat& points, const Eigen::Ref<const Vec>& x, double radius);

}  // namespace limitset
