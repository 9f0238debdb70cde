#pragma once

#include "limitset/geometry.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

// vendored single header
#include <json.hpp>

namespace limitset {

/// Generator provenance carried by every point set. Seeds are mandatory for
/// generated sets so verification reports are reproducible.
struct PointSetMeta {
    std::string generator;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    std::optional<std::uint64_t> seed;
    std::optional<int> truncated_to;  // depth K when the set is a truncation

    nlohmann::ordered_json to_json() const;
    static PointSetMeta from_json(const nlohmann::ordered_json& j);
};

/// Dyadic index of a boundary gap: the unique k >= 0 with
/// 2^-k <= gap < 2^{1-k}. Exact powers of two land in their own bin
/// (interval closed at the left), matching the bin convention [r, 2r).
int dyadic_index(double gap);

/// A finite discrete subset of the open unit ball. Coordinates are stored as
/// doubles; the exact boundary gap of each point is stored separately so that
/// depths beyond coordinate resolution (gap < ~2^-52) stay meaningful.
class DiscretePointSet {
  public:
    /// trusted skips the duplicate scan: for generators whose construction
    /// guarantees distinctness (e.g. reduced words in a free group) even when
    /// two points collide at coordinate resolution.
    enum class Distinctness { checked, trusted };

    /// Construct from raw coordinates; gaps are computed as 1 - |x| and every
    /// point must be interior. Throws on duplicates.
    DiscretePointSet(Mat points, PointSetMeta meta);

    /// Construct with generator-supplied exact gaps. Each gap must be in
    /// (0, 1] and consistent with 1 - |coords| up to coordinate rounding.
    DiscretePointSet(Mat points, Vec gaps, PointSetMeta meta,
                     Distinctness distinctness = Distinctness::checked);

    int dimension() const { return static_cast<int>(points_.cols()); }
    int size() const { return static_cast<int>(points_.rows()); }
    const Mat& points() const { return points_; }
    const Vec& gaps() const { return gaps_; }
    double gap(int i) const { return gaps_(i); }
    const PointSetMeta& meta() const { return meta_; }

    /// Max dyadic index present among stored points.
    int depth() const { return depth_; }

    /// True when two mathematically distinct points share one (coords, gap)
    /// representation; such sets cannot be written to a file faithfully.
    bool has_representation_collisions() const;

  private:
    void validate(Distinctness distinctness);
    Mat points_;
    Vec gaps_;
    PointSetMeta meta_;
    int depth_ = 0;
    bool distinctness_trusted_ = false;
};

/// Dyadic scale bins: counts N_k of points with gap in [2^-k, 2^{1-k}).
/// Counts are double so closed-form generator oracles can exceed 2^63;
/// materialized sets always carry exact integers.
struct ScaleBins {
    std::map<int, double> counts;
    std::map<int, std::vector<int>> members;  // empty for oracle-built bins

    double total() const;
    int min_k() const;
    int max_k() const;
    static ScaleBins from_counts(std::map<int, double> counts);
};

/// Points of E with boundary gap in [r, 2r); indices into E.
std::vector<int> scale_bin(const DiscretePointSet& E, double r);

/// All dyadic bins of E with member lists. Throws on empty sets.
ScaleBins dyadic_counts(const DiscretePointSet& E);

/// Subset with boundary gap >= 2^-K; meta records the truncation.
DiscretePointSet truncate(const DiscretePointSet& E, int K);

/// Write E to path (v1 layout: header + one coordinate row per point at 17
/// significant digits) plus a `<path>.meta.json` sidecar. Sets whose gaps
/// cannot be recovered from coordinates are written with a trailing gap
/// column and a v2 header. Throws on I/O failure.
void save_pointset(const DiscretePointSet& E, const std::string& path);

/// Load a point set plus sidecar. Rejects malformed headers, dimension or
/// count mismatches, and non-interior rows. If require_seed is set, a
/// missing sidecar seed is an error.
DiscretePointSet load_pointset(const std::string& path, bool require_seed = false);

}  // namespace limitset
