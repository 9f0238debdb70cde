#include "limitset/dimension.hpp"

#include "limitset/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace limitset {

namespace {

// mutable hash grid local to the greedy packing loop; cell width equals the
// rejection radius so a conflicting center always sits in an adjacent cell
class PackingGrid {
  public:
    PackingGrid(const Mat& cloud, double cell) : cloud_(cloud), h_(cell) {
        n_ = static_cast<int>(cloud.cols());
        per_axis_ = static_cast<std::int64_t>(std::ceil(2.0 / h_)) + 3;
    }

    bool conflicts(int i, double sep2) const {
        std::vector<std::int64_t> base(static_cast<std::size_t>(n_));
        for (int a = 0; a < n_; ++a)
            base[static_cast<std::size_t>(a)] =
                static_cast<std::int64_t>(std::floor((cloud_(i, a) + 1.5) / h_));
        std::vector<int> off(static_cast<std::size_t>(n_), -1);
        while (true) {
            std::uint64_t key = 0;
            for (int a = 0; a < n_; ++a)
                key = key * static_cast<std::uint64_t>(per_axis_) +
                      static_cast<std::uint64_t>(base[static_cast<std::size_t>(a)] +
                                                 off[static_cast<std::size_t>(a)]);
            auto it = cells_.find(key);
            if (it != cells_.end()) {
                for (int j : it->second)
                    if ((cloud_.row(j) - cloud_.row(i)).squaredNorm() <= sep2) return true;
            }
            int axis = n_ - 1;
            while (axis >= 0) {
                if (++off[static_cast<std::size_t>(axis)] <= 1) break;
                off[static_cast<std::size_t>(axis)] = -1;
                --axis;
            }
            if (axis < 0) return false;
        }
    }

    void insert(int i) {
        std::uint64_t key = 0;
        for (int a = 0; a < n_; ++a)
            key = key * static_cast<std::uint64_t>(per_axis_) +
                  static_cast<std::uint64_t>(
                      static_cast<std::int64_t>(std::floor((cloud_(i, a) + 1.5) / h_)));
        cells_[key].push_back(i);
    }

  private:
    const Mat& cloud_;
    double h_;
    int n_;
    std::int64_t per_axis_;
    std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace

PackingResult packing_number(const Mat& cloud, double delta) {
    if (cloud.rows() == 0) throw std::invalid_argument("packing_number: empty cloud");
    if (!(delta > 0.0)) throw std::invalid_argument("packing_number: delta must be positive");

    const int n_pts = static_cast<int>(cloud.rows());
    const int n_dim = static_cast<int>(cloud.cols());
    // fixed deterministic order: lexicographic on coordinates
    std::vector<int> order(static_cast<std::size_t>(n_pts));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        for (int c = 0; c < n_dim; ++c)
            if (cloud(a, c) != cloud(b, c)) return cloud(a, c) < cloud(b, c);
        return a < b;
    });

    PackingResult result;
    result.delta = delta;
    const double sep = 2.0 * delta;
    const double sep2 = sep * sep;
    PackingGrid grid(cloud, sep);
    for (int oi = 0; oi < n_pts; ++oi) {
        const int i = order[static_cast<std::size_t>(oi)];
        if (result.centers.empty() || !grid.conflicts(i, sep2)) {
            grid.insert(i);
            result.centers.push_back(i);
        }
    }
    return result;
}

BoxDimensionEstimate box_dimension_estimate(const Mat& cloud, int k_min, int k_max) {
    if (cloud.rows() == 0) throw std::invalid_argument("box_dimension_estimate: empty cloud");
    if (k_max - k_min + 1 < 4)
        throw std::invalid_argument("box_dimension_estimate: need >= 4 scales");
    const double n_dim = static_cast<double>(cloud.cols());

    BoxDimensionEstimate est;
    est.counts.resize(static_cast<std::size_t>(k_max - k_min + 1));
    // scales are independent; fixed chunking keeps the output deterministic
    parallel_for(est.counts.size(), [&](std::size_t idx) {
        const int k = k_min + static_cast<int>(idx);
        const PackingResult p = packing_number(cloud, std::exp2(-k));
        est.counts[idx] = {k, static_cast<double>(p.count())};
    });

    bool varies = false;
    for (std::size_t i = 1; i < est.counts.size(); ++i)
        if (est.counts[i].second != est.counts[0].second) varies = true;
    if (!varies && est.counts[0].second > 1.5)
        throw std::invalid_argument("box_dimension_estimate: counts do not vary over the range");

    const double m = static_cast<double>(est.counts.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [k, c] : est.counts) {
        sx += k;
        sy += std::log2(c);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [k, c] : est.counts) {
        sxx += (k - mx) * (k - mx);
        sxy += (k - mx) * (std::log2(c) - my);
    }
    est.slope = std::clamp(sxy / sxx, 0.0, n_dim);

    double lo = n_dim, hi = 0.0;
    for (std::size_t i = 1; i < est.counts.size(); ++i) {
        const double two_point =
            (std::log2(est.counts[i].second) - std::log2(est.counts[i - 1].second)) /
            (est.counts[i].first - est.counts[i - 1].first);
        lo = std::min(lo, two_point);
        hi = std::max(hi, two_point);
    }
    est.lower_slope = std::clamp(lo, 0.0, n_dim);
    est.upper_slope = std::clamp(hi, 0.0, n_dim);
    return est;
}

CoverEstimate cover_mass(const DiscretePointSet& E, double c, double r, double s) {
    if (c < 1.0) throw std::invalid_argument("cover_mass: c must be >= 1");
    if (!(r > 0.0)) throw std::invalid_argument("cover_mass: r must be positive");
    CoverEstimate ce;
    ce.s = s;
    const Vec& gaps = E.gaps();
    double max_diam = 0.0;
    ce.mass = chunked_reduce<double>(
        static_cast<std::size_t>(E.size()), 0.0,
        [&](std::size_t lo, std::size_t hi) {
            double acc = 0.0;
            for (std::size_t i = lo; i < hi; ++i) {
                const double g = gaps(static_cast<int>(i));
                if (g <= r) acc += std::pow(2.0 * c * g, s);
            }
            return acc;
        },
        [](double a, double b) { return a + b; });
    for (int i = 0; i < E.size(); ++i)
        if (E.gap(i) <= r) max_diam = std::max(max_diam, 2.0 * c * E.gap(i));
    ce.scale = max_diam;
    if (max_diam == 0.0) throw std::invalid_argument("cover_mass: no points with gap <= r");
    return ce;
}

double hausdorff_upper_bound(const DiscretePointSet& E, double c, double r, double budget) {
    if (!(budget > 0.0)) throw std::invalid_argument("hausdorff_upper_bound: budget must be positive");
    if (!(2.0 * c * r < 1.0))
        throw std::invalid_argument("hausdorff_upper_bound: need 2*c*r < 1 for a monotone mass");
    const double n_dim = static_cast<double>(E.dimension());
    auto mass = [&](double s) { return cover_mass(E, c, r, s).mass; };  // validates tail
    if (mass(0.0) <= budget) return 0.0;
    double lo = 0.0, hi = n_dim;
    if (mass(hi) > budget) return n_dim;  // bound is vacuous at this truncation
    while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        if (mass(mid) <= budget) hi = mid;
        else lo = mid;
    }
    return hi;
}

std::string packing_counts_csv(const BoxDimensionEstimate& est) {
    std::ostringstream out;
    out << "k,N\n";
    char buf[96];
    for (const auto& [k, c] : est.counts) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g\n", k, c);
        out << buf;
    }
    return out.str();
}

std::string cover_mass_csv(const DiscretePointSet& E, double c, double r,
                           const std::vector<double>& s_grid) {
    std::ostringstream out;
    out << "s,mass\n";
    char buf[96];
    for (double s : s_grid) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", s, cover_mass(E, c, r, s).mass);
        out << buf;
    }
    return out.str();
}

}  // namespace limitset
