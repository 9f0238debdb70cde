#include "limitset/regularity.hpp"

#include "limitset/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace limitset {

namespace {

// least squares slope of y on x
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double m = static_cast<double>(x.size());
    if (m < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

// power-law exponent of values against gaps: log-log pairs are aggregated
// into per-dyadic-bin means (one sample per scale, so crowded deep layers do
// not flatten the slope) and fitted over the deepest half of the bins
double deep_half_fit(const Vec& gaps, const std::vector<double>& values) {
    struct Acc {
        double sx = 0.0, sy = 0.0;
        int n = 0;
    };
    std::map<int, Acc> bins;
    for (int i = 0; i < gaps.size(); ++i) {
        const double v = values[static_cast<std::size_t>(i)];
        if (v <= 0.0) continue;  // points on the reference set carry no slope information
        Acc& a = bins[dyadic_index(gaps(i))];
        a.sx += std::log2(gaps(i));
        a.sy += std::log2(v);
        a.n += 1;
    }
    if (bins.size() < 2) return 0.0;
    const std::size_t half = (bins.size() + 1) / 2;
    std::vector<double> lx, ly;
    std::size_t skip = bins.size() - half;
    for (const auto& [k, a] : bins) {
        if (skip > 0) {
            --skip;
            continue;
        }
        lx.push_back(a.sx / a.n);
        ly.push_back(a.sy / a.n);
    }
    return ls_slope(lx, ly);
}

// per-dyadic-shell neighbour search. Points of boundary-accumulating sets
// concentrate near the circle, so within a shell the angular order is a
// near-perfect search structure: |x-y|^2 = (r_x-r_y)^2 + 4 r_x r_y
// sin^2(dtheta/2) is bounded below by the chord term, which prunes the
// two-pointer sweep. Shells themselves are pruned by radial gap bounds.
// Exact in any dimension (non-planar sets fall back to in-shell scans).
class ShellIndex {
  public:
    explicit ShellIndex(const DiscretePointSet& E) : E_(E), planar_(E.dimension() == 2) {
        for (int i = 0; i < E.size(); ++i) shells_[dyadic_index(E.gap(i))].push_back(i);
        if (planar_) {
            for (auto& [k, ids] : shells_) {
                auto& entries = sorted_[k];
                entries.reserve(ids.size());
                for (int id : ids)
                    entries.emplace_back(std::atan2(E.points()(id, 1), E.points()(id, 0)), id);
                std::sort(entries.begin(), entries.end());
                double rmin = 1.0;
                for (int id : ids) rmin = std::min(rmin, E.points().row(id).norm());
                shell_rmin_[k] = rmin;
            }
        }
    }

    // exact nearest neighbour among points other than `self`
    std::pair<int, double> nearest(int self) const {
        const Vec x = E_.points().row(self).transpose();
        const double gap_x = E_.gap(self);

        std::vector<std::pair<double, int>> ordered;  // (radial lower bound, shell)
        for (const auto& [k, ids] : shells_) {
            const double lo = std::exp2(-k), hi = std::exp2(1 - k);
            double lb = 0.0;
            if (gap_x < lo) lb = lo - gap_x;
            else if (gap_x >= hi) lb = gap_x - hi;
            ordered.emplace_back(lb, k);
        }
        std::sort(ordered.begin(), ordered.end());

        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& [lb, k] : ordered) {
            if (lb >= best_d) break;
            if (planar_) scan_shell_angular(k, x, self, best, best_d);
            else scan_shell_linear(k, x, self, best, best_d);
        }
        return {best, best_d};
    }

  private:
    void scan_shell_linear(int k, const Vec& x, int self, int& best, double& best_d) const {
        for (int id : shells_.at(k)) {
            if (id == self) continue;
            const double d = (E_.points().row(id).transpose() - x).norm();
            if (d < best_d) {
                best_d = d;
                best = id;
            }
        }
    }

    void scan_shell_angular(int k, const Vec& x, int self, int& best, double& best_d) const {
        const auto& entries = sorted_.at(k);
        const auto n = static_cast<std::ptrdiff_t>(entries.size());
        if (n == 0) return;
        const double r_x = x.norm();
        const double chord_scale = 2.0 * std::sqrt(std::max(r_x * shell_rmin_.at(k), 0.0));
        const double theta = std::atan2(x(1), x(0));
        auto probe = [&](std::ptrdiff_t raw) {
            const auto i = static_cast<std::size_t>((raw % n + n) % n);
            const int id = entries[i].second;
            if (id == self) return;
            const double d = (E_.points().row(id).transpose() - x).norm();
            if (d < best_d) {
                best_d = d;
                best = id;
            }
        };
        auto angle_of = [&](std::ptrdiff_t raw) {
            return entries[static_cast<std::size_t>((raw % n + n) % n)].first;
        };
        auto circ = [](double d) {
            d = std::abs(std::fmod(d, 2.0 * std::numbers::pi));
            return std::min(d, 2.0 * std::numbers::pi - d);
        };
        const auto start = std::lower_bound(entries.begin(), entries.end(),
                                            std::make_pair(theta, -1)) -
                           entries.begin();
        std::ptrdiff_t left = start - 1, right = start;
        for (std::ptrdiff_t steps = 0; steps < n; ++steps) {
            // pick the side with the smaller angular offset; stop when even its
            // chord lower bound cannot beat the current best
            const double dl = circ(theta - angle_of(left));
            const double dr = circ(angle_of(right) - theta);
            const bool go_right = dr <= dl;
            const double ang = go_right ? dr : dl;
            if (chord_scale * std::sin(std::min(ang, std::numbers::pi) / 2.0) >= best_d) break;
            probe(go_right ? right : left);
            if (go_right) ++right;
            else --left;
            if (right - left > n) break;
        }
    }

    const DiscretePointSet& E_;
    bool planar_;
    std::map<int, std::vector<int>> shells_;
    std::map<int, std::vector<std::pair<double, int>>> sorted_;
    std::map<int, double> shell_rmin_;
};

}  // namespace

Mat approximate_limit_set(const DiscretePointSet& E, double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("approximate_limit_set: rho must be positive");
    std::vector<int> deep;
    for (int i = 0; i < E.size(); ++i)
        if (E.gap(i) <= rho) deep.push_back(i);
    if (deep.empty())
        throw std::invalid_argument("approximate_limit_set: no points with gap <= rho");
    Mat out(static_cast<int>(deep.size()), E.dimension());
    for (int i = 0; i < out.rows(); ++i) {
        const Vec x = E.points().row(deep[static_cast<std::size_t>(i)]).transpose();
        const double nrm = x.norm();
        out.row(i) = (nrm > 0.0 ? (x / nrm).eval() : x).transpose();
    }
    return out;
}

SeparationProfile separation_profile(const DiscretePointSet& E) {
    if (E.size() < 2) throw std::invalid_argument("separation_profile: need at least two points");
    ShellIndex index(E);
    SeparationProfile prof;
    prof.nn_dist.resize(static_cast<std::size_t>(E.size()));
    prof.ratios.resize(static_cast<std::size_t>(E.size()));
    parallel_for(static_cast<std::size_t>(E.size()), [&](std::size_t i) {
        const auto [nn, d] = index.nearest(static_cast<int>(i));
        (void)nn;
        prof.nn_dist[i] = d;
        prof.ratios[i] = d / E.gap(static_cast<int>(i));
    });
    for (double d : prof.nn_dist)
        if (d <= 0.0)
            throw std::invalid_argument(
                "separation_profile: coincident coordinates (depth beyond coordinate resolution; truncate first)");
    prof.c1_hat = *std::min_element(prof.ratios.begin(), prof.ratios.end());
    prof.alpha_fit = deep_half_fit(E.gaps(), prof.nn_dist);
    return prof;
}

namespace {

ApproximationProfile profile_from_dist(const DiscretePointSet& E, std::vector<double> dist,
                                       std::string mode) {
    ApproximationProfile prof;
    prof.dist = std::move(dist);
    prof.reference_mode = std::move(mode);
    prof.ratios.resize(prof.dist.size());
    for (std::size_t i = 0; i < prof.dist.size(); ++i)
        prof.ratios[i] = prof.dist[i] / E.gap(static_cast<int>(i));
    prof.c2_hat = *std::max_element(prof.ratios.begin(), prof.ratios.end());
    prof.beta_fit = deep_half_fit(E.gaps(), prof.dist);
    return prof;
}

// boundary clouds in the plane admit exact nearest neighbours by sorted angle
bool is_circle_cloud(const Mat& cloud) {
    if (cloud.cols() != 2) return false;
    for (int i = 0; i < cloud.rows(); ++i)
        if (std::abs(cloud.row(i).norm() - 1.0) > 1e-9) return false;
    return true;
}

}  // namespace

ApproximationProfile approximation_profile(const DiscretePointSet& E, const Mat& ref_cloud) {
    if (ref_cloud.rows() == 0) throw std::invalid_argument("approximation_profile: empty reference");
    if (ref_cloud.cols() != E.dimension())
        throw std::invalid_argument("approximation_profile: reference dimension mismatch");
    std::vector<double> dist(static_cast<std::size_t>(E.size()));

    if (is_circle_cloud(ref_cloud)) {
        std::vector<double> angles(static_cast<std::size_t>(ref_cloud.rows()));
        for (int i = 0; i < ref_cloud.rows(); ++i)
            angles[static_cast<std::size_t>(i)] = std::atan2(ref_cloud(i, 1), ref_cloud(i, 0));
        std::sort(angles.begin(), angles.end());
        parallel_for(static_cast<std::size_t>(E.size()), [&](std::size_t i) {
            const double r = E.points().row(static_cast<int>(i)).norm();
            const double theta = std::atan2(E.points()(static_cast<int>(i), 1),
                                            E.points()(static_cast<int>(i), 0));
            auto it = std::lower_bound(angles.begin(), angles.end(), theta);
            double dmin = std::numeric_limits<double>::infinity();
            for (int off = -1; off <= 0; ++off) {
                auto jt = it;
                if (off == -1) {
                    jt = (it == angles.begin()) ? angles.end() - 1 : it - 1;
                } else if (jt == angles.end()) {
                    jt = angles.begin();
                }
                const double dth = theta - *jt;
                const double d2 = (r - 1.0) * (r - 1.0) + 2.0 * r * (1.0 - std::cos(dth));
                dmin = std::min(dmin, std::sqrt(std::max(0.0, d2)));
            }
            dist[i] = dmin;
        });
    } else {
        GridIndex grid(ref_cloud, 0.02);
        parallel_for(static_cast<std::size_t>(E.size()), [&](std::size_t i) {
            dist[i] = grid.nearest_neighbor(E.points().row(static_cast<int>(i)).transpose()).second;
        });
    }
    return profile_from_dist(E, std::move(dist), "cloud");
}

ApproximationProfile approximation_profile(const DiscretePointSet& E, const BoundaryModel& X) {
    if (E.dimension() != 2)
        throw std::invalid_argument("approximation_profile: boundary models live on the circle");
    std::vector<double> dist(static_cast<std::size_t>(E.size()));
    parallel_for(static_cast<std::size_t>(E.size()), [&](std::size_t i) {
        dist[i] = X.distance(E.points().row(static_cast<int>(i)).transpose());
    });
    return profile_from_dist(E, std::move(dist), "model");
}

std::vector<RadialMembership> radial_members(const DiscretePointSet& E, const Mat& candidates,
                                             const RadialQuery& q) {
    if (q.c < 1.0) throw std::invalid_argument("radial_members: c must be >= 1");
    if (!(q.gamma > 0.0) || q.gamma > 1.0)
        throw std::invalid_argument("radial_members: gamma must be in (0, 1]");
    if (!(q.resolution > 0.0) || q.resolution > 1.0)
        throw std::invalid_argument("radial_members: resolution must be in (0, 1]");
    const double deepest = E.gaps().minCoeff();
    if (q.resolution < deepest)
        throw std::invalid_argument("radial_members: resolution below the deepest available scale");
    const int J = dyadic_index(q.resolution);

    std::vector<RadialMembership> out(static_cast<std::size_t>(candidates.rows()));
    parallel_for(static_cast<std::size_t>(candidates.rows()), [&](std::size_t zi) {
        const Vec z = candidates.row(static_cast<int>(zi)).transpose();
        RadialMembership rm;
        rm.witness_chain.assign(static_cast<std::size_t>(J + 1), -1);
        std::vector<double> best_dist(static_cast<std::size_t>(J + 1),
                                      std::numeric_limits<double>::infinity());
        for (int i = 0; i < E.size(); ++i) {
            const double g = E.gap(i);
            const double d = (E.points().row(i).transpose() - z).norm();
            if (d > q.c * std::pow(g, q.gamma)) continue;
            // witnesses every dyadic scale down to its own gap
            const int j_max = std::min(J, static_cast<int>(std::floor(-std::log2(g))));
            for (int j = 0; j <= j_max; ++j) {
                if (d < best_dist[static_cast<std::size_t>(j)]) {
                    best_dist[static_cast<std::size_t>(j)] = d;
                    rm.witness_chain[static_cast<std::size_t>(j)] = i;
                }
            }
        }
        rm.accepted = true;
        for (int j = 0; j <= J; ++j) {
            if (rm.witness_chain[static_cast<std::size_t>(j)] < 0) {
                rm.accepted = false;
                rm.first_failure_scale = j;
                break;
            }
        }
        out[zi] = rm;
    });
    return out;
}

}  // namespace limitset
