#include "limitset/boundary_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace limitset {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

// circular angular distance from theta to the interval [a, b] (arc units)
double ang_dist_to_interval(double theta, double a, double b) {
    if (theta >= a && theta <= b) return 0.0;
    auto circ = [](double d) {
        d = std::abs(d);
        d = std::fmod(d, kTwoPi);
        return std::min(d, kTwoPi - d);
    };
    return std::min(circ(theta - a), circ(theta - b));
}
}  // namespace

BoundaryModel::BoundaryModel(double ratio, int maps) : ratio_(ratio), maps_(maps) {
    if (!(ratio > 0.0) || ratio > 1.0) throw std::invalid_argument("BoundaryModel: ratio must be in (0, 1]");
    if (maps < 1) throw std::invalid_argument("BoundaryModel: need at least one map");
    if (maps * ratio > 1.0 + 1e-14)
        throw std::invalid_argument("BoundaryModel: open set condition requires maps*ratio <= 1");
    offset_step_ = maps_ > 1 ? kTwoPi * (1.0 - ratio_) / (maps_ - 1) : 0.0;
    oracle_depth_ = static_cast<int>(std::ceil(std::log(kTwoPi / 1e-13) / std::log(1.0 / ratio_)));
    oracle_depth_ = std::clamp(oracle_depth_, 4, 2000);
}

BoundaryModel BoundaryModel::cantor(double ratio, int maps) { return BoundaryModel(ratio, maps); }

double BoundaryModel::similarity_dimension() const {
    if (maps_ == 1) return 0.0;
    return std::log(static_cast<double>(maps_)) / std::log(1.0 / ratio_);
}

double BoundaryModel::cylinder_count(int level) const {
    if (level < 0) throw std::invalid_argument("cylinder_count: level must be >= 0");
    return std::pow(static_cast<double>(maps_), level);
}

double BoundaryModel::cylinder_arc(int level) const {
    if (level < 0) throw std::invalid_argument("cylinder_arc: level must be >= 0");
    return kTwoPi * std::pow(ratio_, level);
}

std::vector<BoundaryModel::Cylinder> BoundaryModel::cylinders(int level, std::int64_t max_count) const {
    const double count = cylinder_count(level);
    if (count > static_cast<double>(max_count))
        throw std::invalid_argument("cylinders: level too deep to materialize");
    const auto n = static_cast<std::int64_t>(count);
    const double arc = cylinder_arc(level);

    std::vector<Cylinder> out;
    out.reserve(static_cast<std::size_t>(n));
    std::vector<int> digits(static_cast<std::size_t>(level), 0);
    for (std::int64_t idx = 0; idx < n; ++idx) {
        double left = 0.0;
        for (int i = level - 1; i >= 0; --i)
            left = ratio_ * left + offset_step_ * digits[static_cast<std::size_t>(i)];
        out.push_back({left, arc});
        for (int i = level - 1; i >= 0; --i) {
            if (++digits[static_cast<std::size_t>(i)] < maps_) break;
            digits[static_cast<std::size_t>(i)] = 0;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Cylinder& a, const Cylinder& b) { return a.left_angle < b.left_angle; });
    return out;
}

Mat BoundaryModel::anchor_points(int level, std::int64_t max_count) const {
    const auto cyls = cylinders(level, max_count);
    Mat pts(static_cast<int>(cyls.size()), 2);
    for (int i = 0; i < pts.rows(); ++i) {
        pts(i, 0) = std::cos(cyls[static_cast<std::size_t>(i)].left_angle);
        pts(i, 1) = std::sin(cyls[static_cast<std::size_t>(i)].left_angle);
    }
    return pts;
}

double BoundaryModel::angular_distance(double theta, double prune_above) const {
    theta = wrap_angle(theta);
    if (covers_circle()) return 0.0;
    double best = prune_above;
    // depth-first descent with interval lower bounds; cylinder endpoints lie
    // in X, so the bound is attained whenever theta is outside the arc
    struct Frame {
        double left;
        int level;
    };
    std::vector<Frame> stack;
    stack.push_back({0.0, 0});
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        const double arc = cylinder_arc(f.level);
        const double lb = ang_dist_to_interval(theta, f.left, f.left + arc);
        if (lb >= best) continue;
        if (lb > 0.0 && maps_ > 1) {
            // outside the arc: nearest endpoint is in X, distance exact
            best = lb;
            continue;
        }
        if (f.level >= oracle_depth_) {
            best = std::min(best, lb);  // inside a vanishing arc
            continue;
        }
        const double scale = std::pow(ratio_, f.level);
        for (int d = maps_ - 1; d >= 0; --d)
            stack.push_back({f.left + offset_step_ * scale * d, f.level + 1});
    }
    return best;
}

double BoundaryModel::distance(const Eigen::Ref<const Vec>& p) const {
    if (p.size() != 2) throw std::invalid_argument("BoundaryModel::distance: expects points in R^2");
    const double r = p.norm();
    if (r < 1e-300) return 1.0;
    const double theta = std::atan2(p(1), p(0));
    const double dtheta = angular_distance(theta);
    // law of cosines against the angularly nearest point of X
    const double d2 = (r - 1.0) * (r - 1.0) + 2.0 * r * (1.0 - std::cos(dtheta));
    return std::sqrt(std::max(0.0, d2));
}

double BoundaryModel::min_anchor_gap(int level) const {
    if (maps_ == 1) return 0.0;
    if (level < 1) return offset_step_;
    // adjacent siblings vs adjacent across the deepest parent boundary
    const double sib = offset_step_ * std::pow(ratio_, level - 1);
    const double arc = cylinder_arc(level);
    const double inter_gap_parent = (offset_step_ - kTwoPi * ratio_) * std::pow(ratio_, level - 2);
    double m = sib;
    if (level >= 2 && maps_ * ratio_ < 1.0) m = std::min(m, arc + inter_gap_parent);
    return m;
}

}  // namespace limitset
