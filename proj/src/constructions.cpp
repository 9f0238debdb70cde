#include "limitset/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace limitset {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;

struct Builder {
    std::vector<double> coords;  // row major, n per point
    std::vector<double> gaps;
    int n;

    explicit Builder(int n_dim) : n(n_dim) {}

    void add(const Eigen::Ref<const Vec>& dir, double gap) {
        const double radius = 1.0 - gap;
        for (int c = 0; c < n; ++c) coords.push_back(radius * dir(c));
        gaps.push_back(gap);
    }
    void add_angle(double theta, double gap) {
        const double radius = 1.0 - gap;
        coords.push_back(radius * std::cos(theta));
        coords.push_back(radius * std::sin(theta));
        gaps.push_back(gap);
    }
    DiscretePointSet finish(PointSetMeta meta) const {
        const int count = static_cast<int>(gaps.size());
        Mat pts(count, n);
        for (int i = 0; i < count; ++i)
            for (int c = 0; c < n; ++c) pts(i, c) = coords[static_cast<std::size_t>(i) * n + c];
        Vec g(count);
        for (int i = 0; i < count; ++i) g(i) = gaps[static_cast<std::size_t>(i)];
        return DiscretePointSet(std::move(pts), std::move(g), std::move(meta));
    }
};

Vec axis_direction(int n) {
    Vec w = Vec::Zero(n);
    w(0) = 1.0;
    return w;
}

// ---------------------------------------------------------------------------
// example4 / alphabeta cap layers: shared count arithmetic so the closed-form
// oracle and the materializer cannot drift apart

// equally spaced points at radius 1-g whose chord spacing is exactly sep and
// which stay within Euclidean distance D of w; returns (count, theta_step,
// theta_half)
struct CapLayer {
    std::int64_t count = 0;
    double theta_step = 0.0;
    double theta_half = 0.0;
};

CapLayer cap_layer(double g, double sep, double D) {
    CapLayer layer;
    if (D <= g) {  // only the on-axis point fits
        layer.count = D >= g ? 1 : 0;
        return layer;
    }
    const double R = 1.0 - g;
    layer.theta_step = 2.0 * std::asin(sep / (2.0 * R));
    layer.theta_half = 2.0 * std::asin(std::sqrt((D * D - g * g) / (4.0 * R)));
    layer.count = static_cast<std::int64_t>(std::floor(2.0 * layer.theta_half / layer.theta_step)) + 1;
    return layer;
}

double example4_layer_count(int k) {
    const double g = std::exp2(-k);
    const double D = std::exp2(-std::sqrt(static_cast<double>(k)));
    return static_cast<double>(cap_layer(g, g, D).count);
}

void emit_cap_layer(Builder& b, double g, const CapLayer& layer) {
    if (layer.count <= 0) return;
    if (layer.count == 1) {
        b.add_angle(0.0, g);
        return;
    }
    for (std::int64_t i = 0; i < layer.count; ++i)
        b.add_angle(-layer.theta_half + static_cast<double>(i) * layer.theta_step, g);
}

// alphabeta layer k: radial sublayers spaced 2^-k*alpha through the band
// [2^-k, 2^{1-k}), each an angular strip with chord spacing 2^-k*alpha inside
// the cap |x - w| <= 2^-k*beta
struct BandLayer {
    std::int64_t sublayers = 0;
    std::int64_t per_column = 0;  // 2M+1 angular positions
    double theta_step = 0.0;
    double theta_half = 0.0;
    double sep = 0.0;
};

BandLayer alphabeta_layer(int k, double alpha, double beta) {
    BandLayer layer;
    const double g_lo = std::exp2(-k);
    const double s = std::exp2(-alpha * k);
    layer.sep = s;
    layer.sublayers = static_cast<std::int64_t>(std::floor(g_lo / s));
    if (layer.sublayers < 1) layer.sublayers = 1;
    const double D = std::exp2(-beta * k);
    const double g_hi = std::exp2(1 - k);  // worst gap in the band
    const double R_min = 1.0 - g_hi;
    if (D * D <= g_hi * g_hi) {
        layer.per_column = 1;
        return layer;
    }
    layer.theta_step = 2.0 * std::asin(s / (2.0 * R_min));
    // cap bound safe for every sublayer: gap^2 term bounded by the band top
    layer.theta_half = 2.0 * std::asin(std::sqrt((D * D - g_hi * g_hi) / 4.0));
    const auto m = static_cast<std::int64_t>(std::floor(layer.theta_half / layer.theta_step));
    layer.per_column = 2 * m + 1;
    return layer;
}

double alphabeta_layer_count(int k, double alpha, double beta) {
    const BandLayer layer = alphabeta_layer(k, alpha, beta);
    return static_cast<double>(layer.sublayers) * static_cast<double>(layer.per_column);
}

void check_gallery_params(const std::string& id, const GalleryParams& p) {
    if (id == "alphabeta") {
        if (p.alpha < 1.0) throw std::invalid_argument("gallery: alpha must be >= 1");
        if (!(p.beta > 0.0) || p.beta > 1.0) throw std::invalid_argument("gallery: beta must be in (0, 1]");
    }
    if (id == "gamma-radial") {
        if (!(p.gamma > 0.0) || p.gamma > 1.0)
            throw std::invalid_argument("gallery: gamma must be in (0, 1]");
        if (!(p.t > 0.0) || p.t > p.gamma)
            throw std::invalid_argument("gallery: need 0 < t <= gamma");
    }
}

constexpr std::int64_t kMaterializeBudget = 20'000'000;

}  // namespace

DiscretePointSet gallery(const std::string& id, int n, int K, const GalleryParams& params,
                         std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gallery: n must be >= 2");
    if (K < 4) throw std::invalid_argument("gallery: depth K must be >= 4");
    check_gallery_params(id, params);

    PointSetMeta meta;
    meta.generator = id;
    meta.seed = seed;
    meta.params["n"] = n;
    meta.params["K"] = K;

    if (id == "example1") {
        Builder b(n);
        for (int k = 1; k <= K; ++k) {
            const Mat dirs = sphere_points_max_separated(n, k, seed + static_cast<std::uint64_t>(k));
            const double g = std::exp2(-k);
            for (int i = 0; i < dirs.rows(); ++i) b.add(dirs.row(i).transpose(), g);
        }
        return b.finish(std::move(meta));
    }

    if (id == "example2") {
        if (K > 4)
            throw std::invalid_argument(
                "gallery: example2 materialization is capped at K = 4 (e^(2^K) points); use gallery_bins");
        Builder b(n);
        const Vec w = axis_direction(n);
        const auto m_max = static_cast<std::int64_t>(std::floor(std::exp(std::exp2(K))));
        for (std::int64_t m = 3; m <= m_max; ++m)
            b.add(w, 1.0 / std::log(static_cast<double>(m)));
        return b.finish(std::move(meta));
    }

    if (id == "example3") {
        if (K > 20) throw std::invalid_argument("gallery: example3 is capped at K = 20 (2^K points)");
        Builder b(n);
        const Vec w = axis_direction(n);
        const auto count = static_cast<std::int64_t>(std::exp2(K));
        for (std::int64_t j = 1; j <= count; ++j) {
            // radii 1/2 + 1/(4(j+1)) accumulate at the interior point w/2
            b.add(w, 0.5 - 0.25 / static_cast<double>(j + 1));
        }
        return b.finish(std::move(meta));
    }

    if (id == "example4") {
        if (n == 2) {
            double total = 0.0;
            for (int k = 1; k <= K; ++k) total += example4_layer_count(k);
            if (total > static_cast<double>(kMaterializeBudget))
                throw std::invalid_argument(
                    "gallery: example4 at this depth exceeds the materialization budget; use gallery_bins");
            Builder b(2);
            for (int k = 1; k <= K; ++k) {
                const double g = std::exp2(-k);
                const double D = std::exp2(-std::sqrt(static_cast<double>(k)));
                emit_cap_layer(b, g, cap_layer(g, g, D));
            }
            return b.finish(std::move(meta));
        }
        // n >= 3: greedy cap packing over a seeded pool; no closed-form counts
        if (K > 8) throw std::invalid_argument("gallery: example4 with n >= 3 is capped at K = 8");
        Builder b(n);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const Vec w = axis_direction(n);
        for (int k = 1; k <= K; ++k) {
            const double g = std::exp2(-k);
            const double D = std::exp2(-std::sqrt(static_cast<double>(k)));
            std::vector<Vec> kept;
            const int attempts = 4000 + 400 * (1 << std::min(k, 12));
            for (int a = 0; a < attempts; ++a) {
                Vec v(n);
                for (int c = 0; c < n; ++c) v(c) = gauss(rng);
                v.normalize();
                // bias draws toward the cap around w
                Vec u = (w + 3.0 * D * v).normalized();
                Vec x = (1.0 - g) * u;
                if ((x - w).norm() > D) continue;
                bool clear = true;
                for (const auto& y : kept)
                    if ((x - y).norm() < g) {
                        clear = false;
                        break;
                    }
                if (clear) kept.push_back(x);
            }
            for (const auto& x : kept) b.add(x / x.norm(), g);
        }
        return b.finish(std::move(meta));
    }

    if (id == "alphabeta") {
        if (n != 2) throw std::invalid_argument("gallery: alphabeta is built in n = 2");
        meta.params["alpha"] = params.alpha;
        meta.params["beta"] = params.beta;
        double total = 0.0;
        for (int k = 1; k <= K; ++k) total += alphabeta_layer_count(k, params.alpha, params.beta);
        if (total > static_cast<double>(kMaterializeBudget))
            throw std::invalid_argument(
                "gallery: alphabeta at this depth exceeds the materialization budget; use gallery_bins");
        Builder b(2);
        for (int k = 1; k <= K; ++k) {
            const BandLayer layer = alphabeta_layer(k, params.alpha, params.beta);
            const double g_lo = std::exp2(-k);
            for (std::int64_t sub = 0; sub < layer.sublayers; ++sub) {
                const double g = g_lo + static_cast<double>(sub) * layer.sep;
                if (layer.per_column == 1) {
                    b.add_angle(0.0, g);
                    continue;
                }
                const auto m = (layer.per_column - 1) / 2;
                for (std::int64_t j = -m; j <= m; ++j)
                    b.add_angle(static_cast<double>(j) * layer.theta_step, g);
            }
        }
        return b.finish(std::move(meta));
    }

    if (id == "gamma-radial") {
        if (n != 2) throw std::invalid_argument("gallery: gamma-radial is built in n = 2");
        meta.params["t"] = params.t;
        meta.params["gamma"] = params.gamma;
        const double rho = std::exp2(-params.gamma / params.t);
        const BoundaryModel X = BoundaryModel::cantor(rho, 2);
        Builder b(2);
        const int level_max = static_cast<int>(std::floor(params.t * K));
        if (level_max < 1)
            throw std::invalid_argument("gallery: gamma-radial depth too shallow for one level");
        if (std::exp2(level_max + 1) > static_cast<double>(kMaterializeBudget))
            throw std::invalid_argument("gallery: gamma-radial exceeds the materialization budget");
        for (int level = 1; level <= level_max; ++level) {
            const double g = std::exp2(-static_cast<double>(level) / params.t);
            for (const auto& cyl : X.cylinders(level)) b.add_angle(cyl.left_angle, g);
        }
        return b.finish(std::move(meta));
    }

    if (id == "ray") {
        Builder b(n);
        const Vec w = axis_direction(n);
        for (int k = 1; k <= K; ++k) b.add(w, std::exp2(-k));
        return b.finish(std::move(meta));
    }

    throw std::invalid_argument("gallery: unknown generator id '" + id + "'");
}

ScaleBins gallery_bins(const std::string& id, int n, int K, const GalleryParams& params) {
    if (n < 2) throw std::invalid_argument("gallery_bins: n must be >= 2");
    if (K < 4) throw std::invalid_argument("gallery_bins: depth K must be >= 4");
    check_gallery_params(id, params);
    std::map<int, double> counts;

    if (id == "example1") {
        for (int k = 1; k <= K; ++k) counts[k] = k;
        return ScaleBins::from_counts(std::move(counts));
    }
    if (id == "example2") {
        if (K > 9) throw std::invalid_argument("gallery_bins: example2 counts overflow above K = 9");
        for (int j = 1; j <= K; ++j) {
            const double hi = std::floor(std::exp(std::exp2(j)));
            const double lo = std::max(2.0, std::floor(std::exp(std::exp2(j - 1))));
            counts[j] = hi - lo;
        }
        return ScaleBins::from_counts(std::move(counts));
    }
    if (id == "example3") {
        counts[2] = std::exp2(K);
        return ScaleBins::from_counts(std::move(counts));
    }
    if (id == "example4") {
        if (n != 2) throw std::invalid_argument("gallery_bins: example4 counts exist for n = 2 only");
        for (int k = 1; k <= K; ++k) counts[k] = example4_layer_count(k);
        return ScaleBins::from_counts(std::move(counts));
    }
    if (id == "alphabeta") {
        if (n != 2) throw std::invalid_argument("gallery_bins: alphabeta counts exist for n = 2 only");
        for (int k = 1; k <= K; ++k) counts[k] = alphabeta_layer_count(k, params.alpha, params.beta);
        return ScaleBins::from_counts(std::move(counts));
    }
    if (id == "gamma-radial") {
        const int level_max = static_cast<int>(std::floor(params.t * K));
        for (int level = 1; level <= level_max; ++level) {
            const double g = std::exp2(-static_cast<double>(level) / params.t);
            counts[dyadic_index(g)] += std::exp2(level);
        }
        return ScaleBins::from_counts(std::move(counts));
    }
    if (id == "ray") {
        for (int k = 1; k <= K; ++k) counts[k] = 1.0;
        return ScaleBins::from_counts(std::move(counts));
    }
    throw std::invalid_argument("gallery_bins: unknown generator id '" + id + "'");
}

// ---------------------------------------------------------------------------

DiscretePointSet net_construction(const BoundaryModel& X, int K, std::uint64_t seed) {
    if (K < 2) throw std::invalid_argument("net_construction: K must be >= 2");
    Builder b(2);
    for (int k = 2; k <= K; ++k) {
        const double r = std::exp2(-k);
        const Mat net = sphere_net(2, r, seed + static_cast<std::uint64_t>(k));
        for (int i = 0; i < net.rows(); ++i) {
            if (X.covers_circle() || X.distance(net.row(i).transpose()) <= r) {
                const double theta = std::atan2(net(i, 1), net(i, 0));
                b.add_angle(theta, r);
            }
        }
    }
    PointSetMeta meta;
    meta.generator = "net";
    meta.seed = seed;
    meta.params["K"] = K;
    meta.params["ratio"] = X.ratio();
    meta.params["maps"] = X.maps();
    return b.finish(std::move(meta));
}

// ---------------------------------------------------------------------------
// cover families and the greedy disjoint selection

CoverFamily build_cover_family(const BoundaryModel& X, double s, int K, std::int64_t ball_budget) {
    if (K < 2) throw std::invalid_argument("build_cover_family: K must be >= 2");
    const double s_sim = X.similarity_dimension();
    if (!(s > s_sim))
        throw std::invalid_argument(
            "build_cover_family: mass bound unreachable unless s exceeds the similarity dimension");
    if (X.covers_circle() && X.maps() > 1)
        throw std::invalid_argument("build_cover_family: the full circle admits no summable cover");

    CoverFamily family{X, s, {}};
    const int level_shift = std::max(1, static_cast<int>(std::ceil(std::log(2.0) / std::log(1.0 / X.ratio()))));
    int level = 1;
    for (int k = 1; k <= K; ++k) {
        const double bound = std::exp2(-k);
        // smallest level meeting the mass bound, respecting the 2x radius drop
        int min_level = k == 1 ? 1 : family.layers.back().level + level_shift;
        level = std::max(level, min_level);
        while (true) {
            const double radius = kPi * std::pow(X.ratio(), level);
            const double mass = X.cylinder_count(level) * std::pow(radius, s);
            if (mass < bound && radius < 1.0) break;
            ++level;
            if (level > 100000) throw std::runtime_error("build_cover_family: level search diverged");
        }
        CoverLayer layer;
        layer.stage = k;
        layer.level = level;
        layer.radius = kPi * std::pow(X.ratio(), level);
        layer.count = X.cylinder_count(level);
        layer.mass = layer.count * std::pow(layer.radius, s);
        layer.mass_bound = bound;
        layer.min_center_separation = 2.0 * std::sin(X.min_anchor_gap(level) / 2.0);
        layer.materialized = layer.count <= static_cast<double>(ball_budget);
        if (layer.materialized && X.maps() > 1) {
            const auto cyls = X.cylinders(level, ball_budget);
            layer.anchor_angles.reserve(cyls.size());
            for (const auto& c : cyls) layer.anchor_angles.push_back(c.left_angle);
        } else if (layer.materialized) {
            layer.anchor_angles.push_back(0.0);
        }
        family.layers.push_back(std::move(layer));
    }
    return family;
}

std::vector<double> vitali_select(const std::vector<double>& sorted_angles, double radius) {
    std::vector<double> kept;
    if (sorted_angles.empty()) return kept;
    const double sep = 2.0 * radius;
    auto chord = [](double a, double b) {
        double d = std::abs(a - b);
        d = std::fmod(d, kTwoPi);
        if (d > kPi) d = kTwoPi - d;
        return 2.0 * std::sin(d / 2.0);
    };
    for (double theta : sorted_angles) {
        if (kept.empty() || (chord(theta, kept.back()) > sep && chord(theta, kept.front()) > sep))
            kept.push_back(theta);
    }
    return kept;
}

VitaliResult vitali_construction(const CoverFamily& cover) {
    if (cover.layers.empty()) throw std::invalid_argument("vitali_construction: empty cover");
    Builder b(2);
    std::map<int, double> bin_counts;
    std::vector<double> kept_counts;
    double series_bound = 0.0;
    int materialized = 0;

    for (const auto& layer : cover.layers) {
        series_bound += layer.mass;
        double kept = layer.count;
        if (layer.materialized) {
            const auto kept_angles = vitali_select(layer.anchor_angles, layer.radius);
            kept = static_cast<double>(kept_angles.size());
            for (double theta : kept_angles) b.add_angle(theta, layer.radius);
            ++materialized;
        } else {
            // closed-form selection: interior anchor gaps keep their balls
            // disjoint, and the first/last cylinders touch across the 0 = 2pi
            // seam, which costs exactly one ball
            if (!(layer.min_center_separation > 2.0 * layer.radius))
                throw std::runtime_error(
                    "vitali_construction: non-materialized layer lacks a disjointness certificate");
            if (cover.model.maps() > 1) kept -= 1.0;
        }
        kept_counts.push_back(kept);
        bin_counts[dyadic_index(layer.radius)] += kept;
    }
    if (materialized == 0)
        throw std::invalid_argument("vitali_construction: no layer fits the materialization budget");

    PointSetMeta meta;
    meta.generator = "vitali";
    meta.seed = 0;
    meta.params["s"] = cover.s;
    meta.params["ratio"] = cover.model.ratio();
    meta.params["maps"] = cover.model.maps();
    meta.params["layers"] = static_cast<int>(cover.layers.size());
    meta.params["materialized_layers"] = materialized;

    VitaliResult result{b.finish(std::move(meta)), ScaleBins::from_counts(std::move(bin_counts)),
                        std::move(kept_counts), series_bound, materialized};
    return result;
}

// ---------------------------------------------------------------------------
// scale-window merge

namespace {

// dyadic window of the j-th stage of part m (1-based): k = 2^m * (2j - 1)
int window_of(int part, int j) { return (1 << part) * (2 * j - 1); }

}  // namespace

FsigmaResult fsigma_merge(const std::vector<FsigmaPart>& parts, int K, std::int64_t ball_budget) {
    if (parts.empty()) throw std::invalid_argument("fsigma_merge: need at least one part");
    Builder b(2);
    std::vector<CoverLayer> stages;
    std::vector<int> part_of_stage;
    std::vector<double> kept_counts;

    for (int m = 1; m <= static_cast<int>(parts.size()); ++m) {
        const auto& part = parts[static_cast<std::size_t>(m - 1)];
        const double s_sim = part.model.similarity_dimension();
        if (!(part.s > s_sim))
            throw std::invalid_argument("fsigma_merge: every part needs s above its similarity dimension");
        int window_slot = 1;
        int stages_built = 0;
        for (int j = 1;; ++j) {
            // find the next admissible window for this stage
            const double bound = std::exp2(-j) * std::exp2(-m);
            bool placed = false;
            while (true) {
                const int k_w = window_of(m, window_slot);
                if (k_w > K) break;
                ++window_slot;
                const double radius = std::exp2(-k_w);
                // level deep enough that a cylinder fits inside its anchor ball
                const int level = static_cast<int>(
                    std::ceil((k_w + std::log2(kTwoPi)) / std::log2(1.0 / part.model.ratio())));
                const double count = part.model.cylinder_count(level);
                const double mass = count * std::pow(radius, part.s);
                if (mass >= bound) continue;
                if (count > static_cast<double>(ball_budget)) continue;
                CoverLayer st;
                st.stage = j;
                st.level = level;
                st.radius = radius;
                st.count = count;
                st.mass = mass;
                st.mass_bound = bound;
                st.window_index = k_w;
                st.materialized = true;
                if (part.model.maps() > 1) {
                    for (const auto& c : part.model.cylinders(level, ball_budget))
                        st.anchor_angles.push_back(c.left_angle);
                } else {
                    st.anchor_angles.push_back(0.0);
                }
                const auto kept_angles = vitali_select(st.anchor_angles, st.radius);
                for (double theta : kept_angles) b.add_angle(theta, st.radius);
                kept_counts.push_back(static_cast<double>(kept_angles.size()));
                stages.push_back(std::move(st));
                part_of_stage.push_back(m);
                placed = true;
                ++stages_built;
                break;
            }
            if (!placed) break;
        }
        if (stages_built == 0) {
            // report the depth that would admit the first stage
            int k_need = window_of(m, 1);
            while (true) {
                const double radius = std::exp2(-k_need);
                const int level = static_cast<int>(
                    std::ceil((k_need + std::log2(kTwoPi)) / std::log2(1.0 / part.model.ratio())));
                const double mass = part.model.cylinder_count(level) * std::pow(radius, part.s);
                if (mass < std::exp2(-1 - m) &&
                    part.model.cylinder_count(level) <= static_cast<double>(ball_budget))
                    break;
                k_need += (1 << (m + 1));
                if (k_need > 4096) break;
            }
            throw std::invalid_argument("fsigma_merge: window exhaustion at depth K=" + std::to_string(K) +
                                        " for part " + std::to_string(m) +
                                        "; first feasible window needs K >= " + std::to_string(k_need));
        }
    }

    PointSetMeta meta;
    meta.generator = "fsigma";
    meta.seed = 0;
    meta.params["K"] = K;
    meta.params["parts"] = static_cast<int>(parts.size());
    return FsigmaResult{b.finish(std::move(meta)), std::move(stages), std::move(part_of_stage),
                        std::move(kept_counts)};
}

}  // namespace limitset
