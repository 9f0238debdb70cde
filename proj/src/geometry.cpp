#include "limitset/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace limitset {

namespace {
constexpr double kPi = std::numbers::pi;

void check_dim(const Eigen::Ref<const Vec>& x) {
    if (x.size() < 2) throw std::invalid_argument("point dimension must be >= 2");
}
}  // namespace

bool is_interior(const Eigen::Ref<const Vec>& x) {
    return x.norm() < 1.0 - kInteriorSlack;
}

double boundary_gap(const Eigen::Ref<const Vec>& x) {
    check_dim(x);
    const double nrm = x.norm();
    if (nrm >= 1.0 - kInteriorSlack)
        throw std::invalid_argument("boundary_gap: point must be interior (|x| < 1 - 1e-12)");
    return 1.0 - nrm;
}

double hyperbolic_distance_origin(const Eigen::Ref<const Vec>& x) {
    const double gap = boundary_gap(x);  // validates
    const double nrm = 1.0 - gap;
    return std::log((1.0 + nrm) / gap);
}

double hyperbolic_distance_from_gap(double gap) {
    if (!(gap > 0.0) || gap > 1.0)
        throw std::invalid_argument("hyperbolic_distance_from_gap: gap must be in (0, 1]");
    return std::log((2.0 - gap) / gap);
}

// ---------------------------------------------------------------------------
// sphere nets

namespace {

Mat circle_points_from_angles(const std::vector<double>& angles) {
    Mat out(static_cast<int>(angles.size()), 2);
    for (int i = 0; i < out.rows(); ++i) {
        out(i, 0) = std::cos(angles[static_cast<std::size_t>(i)]);
        out(i, 1) = std::sin(angles[static_cast<std::size_t>(i)]);
    }
    return out;
}

// Exact maximal r-separated net on S^1: m equally spaced points with
// m = floor(2*pi / (2*asin(r/2))). Adjacent chord >= r and covering chord
// (half step) <= r, both provable from the floor choice.
Mat circle_net(double r, std::uint64_t seed) {
    const double theta = 2.0 * std::asin(r / 2.0);
    const int m = std::max(2, static_cast<int>(std::floor(2.0 * kPi / theta)));
    std::mt19937_64 rng(seed);
    const double offset = 2.0 * kPi * std::ldexp(static_cast<double>(rng() >> 11), -53);
    std::vector<double> angles(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) angles[static_cast<std::size_t>(j)] = offset + 2.0 * kPi * j / m;
    return circle_points_from_angles(angles);
}

Mat gaussian_sphere_pool(int n, int count, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat pool(count, n);
    for (int i = 0; i < count; ++i) {
        Vec v(n);
        double nrm = 0.0;
        do {
            for (int j = 0; j < n; ++j) v(j) = gauss(rng);
            nrm = v.norm();
        } while (nrm < 1e-12);
        pool.row(i) = v / nrm;
    }
    return pool;
}

// Greedy farthest-point insertion until every candidate is within r of the
// net, followed by random refinement so stray uncovered caps (from pool
// discreteness) get filled.
Mat sphere_net_general(int n, double r, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int pool_size = std::min(400000, std::max(20000, static_cast<int>(2000.0 / (r * r))));
    Mat pool = gaussian_sphere_pool(n, pool_size, rng);

    std::vector<int> net;
    std::vector<double> min_dist(static_cast<std::size_t>(pool_size),
                                 std::numeric_limits<double>::infinity());
    int cur = 0;  // deterministic start: first pool point
    while (true) {
        net.push_back(cur);
        for (int i = 0; i < pool_size; ++i) {
            const double d = (pool.row(i) - pool.row(cur)).norm();
            if (d < min_dist[static_cast<std::size_t>(i)]) min_dist[static_cast<std::size_t>(i)] = d;
        }
        int best = -1;
        double best_d = r;
        for (int i = 0; i < pool_size; ++i) {
            if (min_dist[static_cast<std::size_t>(i)] >= best_d) {
                best_d = min_dist[static_cast<std::size_t>(i)];
                best = i;
            }
        }
        if (best < 0) break;
        cur = best;
    }

    Mat pts(static_cast<int>(net.size()), n);
    for (int i = 0; i < pts.rows(); ++i) pts.row(i) = pool.row(net[static_cast<std::size_t>(i)]);

    // refinement: any random boundary point at distance >= r from the net is a
    // legal insertion; stop after a long streak of covered draws
    std::vector<Vec> extra;
    int streak = 0;
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (streak < 20000) {
        Vec v(n);
        double nrm = 0.0;
        do {
            for (int j = 0; j < n; ++j) v(j) = gauss(rng);
            nrm = v.norm();
        } while (nrm < 1e-12);
        v /= nrm;
        double d = std::numeric_limits<double>::infinity();
        for (int i = 0; i < pts.rows(); ++i) d = std::min(d, (pts.row(i).transpose() - v).norm());
        for (const auto& e : extra) d = std::min(d, (e - v).norm());
        if (d >= r) {
            extra.push_back(v);
            streak = 0;
        } else {
            ++streak;
        }
    }
    if (!extra.empty()) {
        Mat all(pts.rows() + static_cast<int>(extra.size()), n);
        all.topRows(pts.rows()) = pts;
        for (int i = 0; i < static_cast<int>(extra.size()); ++i)
            all.row(pts.rows() + i) = extra[static_cast<std::size_t>(i)];
        return all;
    }
    return pts;
}

}  // namespace

Mat sphere_net(int n, double r, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("sphere_net: n must be >= 2");
    if (!(r > 0.0) || r >= 2.0) throw std::invalid_argument("sphere_net: need 0 < r < 2");
    if (n == 2) return circle_net(r, seed);
    return sphere_net_general(n, r, seed);
}

Mat sphere_points_max_separated(int n, int k, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("sphere_points_max_separated: n must be >= 2");
    if (k < 1) throw std::invalid_argument("sphere_points_max_separated: k must be >= 1");
    std::mt19937_64 rng(seed);

    if (n == 2) {
        // greedy farthest-point over a fine angular grid, seeded start
        const int grid = std::max(4096, 64 * k);
        const double offset = 2.0 * kPi * std::ldexp(static_cast<double>(rng() >> 11), -53);
        std::vector<double> cand(static_cast<std::size_t>(grid));
        for (int i = 0; i < grid; ++i)
            cand[static_cast<std::size_t>(i)] = offset + 2.0 * kPi * i / grid;
        std::vector<double> min_dist(static_cast<std::size_t>(grid),
                                     std::numeric_limits<double>::infinity());
        std::vector<double> chosen;
        int cur = 0;
        for (int picked = 0; picked < k; ++picked) {
            chosen.push_back(cand[static_cast<std::size_t>(cur)]);
            if (picked + 1 == k) break;
            for (int i = 0; i < grid; ++i) {
                double da = std::abs(cand[static_cast<std::size_t>(i)] - cand[static_cast<std::size_t>(cur)]);
                da = std::fmod(da, 2.0 * kPi);
                if (da > kPi) da = 2.0 * kPi - da;
                const double d = 2.0 * std::sin(da / 2.0);
                if (d < min_dist[static_cast<std::size_t>(i)]) min_dist[static_cast<std::size_t>(i)] = d;
            }
            cur = 0;
            double best = -1.0;
            for (int i = 0; i < grid; ++i) {
                if (min_dist[static_cast<std::size_t>(i)] > best) {
                    best = min_dist[static_cast<std::size_t>(i)];
                    cur = i;
                }
            }
        }
        return circle_points_from_angles(chosen);
    }

    const int pool_size = std::max(8192, 256 * k);
    Mat pool = gaussian_sphere_pool(n, pool_size, rng);
    std::vector<double> min_dist(static_cast<std::size_t>(pool_size),
                                 std::numeric_limits<double>::infinity());
    Mat out(k, n);
    int cur = 0;
    for (int picked = 0; picked < k; ++picked) {
        out.row(picked) = pool.row(cur);
        if (picked + 1 == k) break;
        for (int i = 0; i < pool_size; ++i) {
            const double d = (pool.row(i) - pool.row(cur)).norm();
            if (d < min_dist[static_cast<std::size_t>(i)]) min_dist[static_cast<std::size_t>(i)] = d;
        }
        cur = 0;
        double best = -1.0;
        for (int i = 0; i < pool_size; ++i) {
            if (min_dist[static_cast<std::size_t>(i)] > best) {
                best = min_dist[static_cast<std::size_t>(i)];
                cur = i;
            }
        }
    }
    return out;
}

Mat random_boundary_points(int n, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return gaussian_sphere_pool(n, count, rng);
}

// ---------------------------------------------------------------------------
// GridIndex

GridIndex::GridIndex(const Mat& points, double cell_width) : points_(points), h_(cell_width) {
    if (points_.rows() == 0) throw std::invalid_argument("GridIndex: empty point set");
    if (!(cell_width > 0.0)) throw std::invalid_argument("GridIndex: cell width must be positive");
    n_ = static_cast<int>(points_.cols());
    if (n_ < 2) throw std::invalid_argument("GridIndex: dimension must be >= 2");
    // cells_per_axis bounds the key mixing; 2/h cells over [-1,1]
    cells_per_axis_ = static_cast<std::int64_t>(std::ceil(2.0 / h_)) + 3;

    const int n_pts = static_cast<int>(points_.rows());
    std::vector<std::pair<std::uint64_t, int>> tagged(static_cast<std::size_t>(n_pts));
    for (int i = 0; i < n_pts; ++i)
        tagged[static_cast<std::size_t>(i)] = {key_of(points_.row(i)), i};
    std::sort(tagged.begin(), tagged.end());

    ids_.resize(static_cast<std::size_t>(n_pts));
    for (int i = 0; i < n_pts; ++i) ids_[static_cast<std::size_t>(i)] = tagged[static_cast<std::size_t>(i)].second;
    for (int i = 0; i < n_pts; ++i) {
        const auto key = tagged[static_cast<std::size_t>(i)].first;
        if (keys_.empty() || keys_.back() != key) {
            keys_.push_back(key);
            offsets_.push_back(i);
        }
    }
    offsets_.push_back(n_pts);
}

std::int64_t GridIndex::cell_of(const Eigen::Ref<const Vec>& x, int axis) const {
    return static_cast<std::int64_t>(std::floor((x(axis) + 1.5) / h_));
}

std::uint64_t GridIndex::key_of(const Eigen::Ref<const Vec>& x) const {
    std::uint64_t key = 0;
    for (int a = 0; a < n_; ++a) {
        key = key * static_cast<std::uint64_t>(cells_per_axis_) +
              static_cast<std::uint64_t>(cell_of(x, a));
    }
    return key;
}

std::vector<int> GridIndex::range_query(const Eigen::Ref<const Vec>& x, double radius) const {
    if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("range_query: dimension mismatch");
    if (!(radius >= 0.0)) throw std::invalid_argument("range_query: radius must be >= 0");
    // once the cell box holds more cells than points, a linear scan is cheaper
    const double box_cells = std::pow(2.0 * radius / h_ + 2.0, n_);
    if (box_cells > 4.0 * static_cast<double>(points_.rows()) + 64.0)
        return range_query_linear(points_, x, radius);
    std::vector<int> result;
    // walk the box of cells overlapping the query ball
    std::vector<std::int64_t> lo(static_cast<std::size_t>(n_)), hi(static_cast<std::size_t>(n_)),
        cur(static_cast<std::size_t>(n_));
    for (int a = 0; a < n_; ++a) {
        lo[static_cast<std::size_t>(a)] =
            static_cast<std::int64_t>(std::floor((x(a) - radius + 1.5) / h_));
        hi[static_cast<std::size_t>(a)] =
            static_cast<std::int64_t>(std::floor((x(a) + radius + 1.5) / h_));
        cur[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)];
    }
    const double r2 = radius * radius;
    while (true) {
        std::uint64_t key = 0;
        for (int a = 0; a < n_; ++a)
            key = key * static_cast<std::uint64_t>(cells_per_axis_) +
                  static_cast<std::uint64_t>(cur[static_cast<std::size_t>(a)]);
        auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
        if (it != keys_.end() && *it == key) {
            const auto c = static_cast<std::size_t>(it - keys_.begin());
            for (int j = offsets_[c]; j < offsets_[c + 1]; ++j) {
                const int id = ids_[static_cast<std::size_t>(j)];
                if ((points_.row(id).transpose() - x).squaredNorm() <= r2) result.push_back(id);
            }
        }
        int axis = n_ - 1;
        while (axis >= 0) {
            if (++cur[static_cast<std::size_t>(axis)] <= hi[static_cast<std::size_t>(axis)]) break;
            cur[static_cast<std::size_t>(axis)] = lo[static_cast<std::size_t>(axis)];
            --axis;
        }
        if (axis < 0) break;
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::pair<int, double> GridIndex::nearest_neighbor(const Eigen::Ref<const Vec>& x,
                                                   std::optional<int> exclude) const {
    if (size() < (exclude ? 2 : 1))
        throw std::invalid_argument("nearest_neighbor: index must hold another point");
    double radius = h_;
    while (true) {
        auto hits = range_query(x, radius);
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int id : hits) {
            if (exclude && *exclude == id) continue;
            const double d = (points_.row(id).transpose() - x).norm();
            if (d < best_d || (d == best_d && id < best)) {
                best_d = d;
                best = id;
            }
        }
        // a hit within the current search radius is provably the global
        // nearest once we re-verify with radius = found distance
        if (best >= 0 && best_d <= radius) return {best, best_d};
        radius *= 2.0;
        if (radius > 4.0 && best >= 0) return {best, best_d};
        if (radius > 8.0) {
            // degenerate fallback; cannot happen for points in [-1,1]^n
            return nearest_neighbor_linear(points_, x, exclude);
        }
    }
}

std::pair<int, double> nearest_neighbor_linear(const Mat& points, const Eigen::Ref<const Vec>& x,
                                               std::optional<int> exclude) {
    if (points.rows() == 0) throw std::invalid_argument("nearest_neighbor: empty point set");
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points.rows(); ++i) {
        if (exclude && *exclude == i) continue;
        const double d = (points.row(i).transpose() - x).norm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    if (best < 0) throw std::invalid_argument("nearest_neighbor: no eligible point");
    return {best, best_d};
}

std::vector<int> range_query_linear(const Mat& points, const Eigen::Ref<const Vec>& x, double radius) {
    std::vector<int> result;
    const double r2 = radius * radius;
    for (int i = 0; i < points.rows(); ++i)
        if ((points.row(i).transpose() - x).squaredNorm() <= r2) result.push_back(i);
    return result;
}

}  // namespace limitset
