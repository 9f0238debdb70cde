#pragma once

#include "limitset/boundary_model.hpp"
#include "limitset/pointset.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace limitset {

/// Gallery of boundary-accumulating sets with known critical exponents.
/// Parameters are generator-specific; unknown ids throw.
///   example1      k maximally separated points at gap 2^-k        (delta 0)
///   example2      one ray, gaps 1/log m                           (delta inf)
///   example3      accumulation at an interior point               (delta inf)
///   example4      maximal 2^-k-separated cap packings near w      (delta n-1)
///   alphabeta     2^-k*alpha-separated band packings near w       (delta = n*alpha-(n-1)*beta-1)
///   gamma-radial  one point per self-similar cylinder             (delta t)
///   ray           radial sequence toward w, gaps 2^-k             (delta 0)
struct GalleryParams {
    double alpha = 1.0;
    double beta = 1.0;
    double t = 0.5;
    double gamma = 1.0;
};

DiscretePointSet gallery(const std::string& id, int n, int K, const GalleryParams& params,
                         std::uint64_t seed);

/// Closed-form dyadic counts of the same deterministic constructions, for
/// depths whose point counts cannot be materialized. Bin-for-bin equal to
/// dyadic_counts(gallery(...)) on feasible depths (tested).
ScaleBins gallery_bins(const std::string& id, int n, int K, const GalleryParams& params);

/// Scaffold of Thm-style nets: for each k <= K, a maximal 2^-k-separated
/// boundary net filtered to points within 2^-k of X and pushed to radius
/// 1 - 2^-k.
DiscretePointSet net_construction(const BoundaryModel& X, int K, std::uint64_t seed);

/// One cover layer: all level-`level` cylinder anchors as ball centers with
/// a common radius. Materialized when the count fits the ball budget;
/// deeper layers stay closed-form descriptors.
struct CoverLayer {
    int stage = 0;          // mass bound is 2^-stage (times the part factor)
    int level = 0;          // cylinder level
    double radius = 0.0;    // common ball radius
    double count = 0.0;     // number of balls (maps^level, may exceed 2^63)
    double mass = 0.0;      // count * radius^s
    double mass_bound = 0.0;
    double min_center_separation = 0.0;  // closed-form chord bound between adjacent centers
    bool materialized = false;
    std::vector<double> anchor_angles;   // sorted, when materialized
    int window_index = -1;               // dyadic window (scale-window merges only)
};

struct CoverFamily {
    BoundaryModel model;
    double s = 0.0;
    std::vector<CoverLayer> layers;
};

/// Layered covers of X with per-layer mass sum(r^s) < 2^-k and radii
/// shrinking at least 2x per layer. Radii are pi * ratio^level (half the
/// cylinder arc), centers are cylinder anchors. Requires s strictly above
/// the similarity dimension.
CoverFamily build_cover_family(const BoundaryModel& X, double s, int K,
                               std::int64_t ball_budget = 2'000'000);

/// Result of the greedy disjoint selection plus point placement |x| = 1-r.
struct VitaliResult {
    DiscretePointSet points;      // materialized layers only
    ScaleBins family_bins;        // kept-ball counts of every layer
    std::vector<double> kept_counts;  // aligned with cover.layers
    double series_bound = 0.0;        // sum of layer masses (upper-bounds S_E(s))
    int materialized_layers = 0;
};

VitaliResult vitali_construction(const CoverFamily& cover);

/// Scale-window merge of several Vitali-style parts. Part m only uses dyadic
/// windows k = 2^m * (2j - 1), stage radii are the window bottoms 2^-k, and
/// the stage mass bound is 2^-stage * 2^-m.
struct FsigmaPart {
    BoundaryModel model;
    double s = 0.0;
};

struct FsigmaResult {
    DiscretePointSet points;
    std::vector<CoverLayer> stages;        // all parts, in (part, stage) order
    std::vector<int> part_of_stage;
    std::vector<double> kept_counts;
};

FsigmaResult fsigma_merge(const std::vector<FsigmaPart>& parts, int K,
                          std::int64_t ball_budget = 2'000'000);

/// Shared machinery: greedy disjoint selection over one materialized layer
/// (equal radii, angular order). Returns kept anchor angles.
std::vector<double> vitali_select(const std::vector<double>& sorted_angles, double radius);

}  // namespace limitset
