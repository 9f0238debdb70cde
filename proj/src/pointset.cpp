#include "limitset/pointset.hpp"

#include "limitset/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace limitset {

namespace {

std::string format17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

nlohmann::ordered_json PointSetMeta::to_json() const {
    nlohmann::ordered_json j;
    j["generator"] = generator;
    j["params"] = params;
    if (seed) j["seed"] = *seed;
    if (truncated_to) j["truncated_to"] = *truncated_to;
    return j;
}

PointSetMeta PointSetMeta::from_json(const nlohmann::ordered_json& j) {
    PointSetMeta m;
    m.generator = j.value("generator", std::string("unknown"));
    if (j.contains("params")) m.params = j.at("params");
    if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("truncated_to")) m.truncated_to = j.at("truncated_to").get<int>();
    return m;
}

int dyadic_index(double gap) {
    if (!(gap > 0.0) || gap > 1.0)
        throw std::invalid_argument("dyadic_index: gap must be in (0, 1]");
    int k = static_cast<int>(std::ceil(-std::log2(gap)));
    // snap against rounding at exact powers of two: want 2^-k <= gap < 2^{1-k}
    while (k > 0 && std::exp2(-k) > gap) ++k;
    while (k > 0 && std::exp2(1 - k) <= gap) --k;
    if (k < 0) k = 0;
    return k;
}

DiscretePointSet::DiscretePointSet(Mat points, PointSetMeta meta)
    : points_(std::move(points)), meta_(std::move(meta)) {
    gaps_.resize(points_.rows());
    for (int i = 0; i < points_.rows(); ++i) gaps_(i) = boundary_gap(points_.row(i));
    validate(Distinctness::checked);
}

DiscretePointSet::DiscretePointSet(Mat points, Vec gaps, PointSetMeta meta,
                                   Distinctness distinctness)
    : points_(std::move(points)), gaps_(std::move(gaps)), meta_(std::move(meta)) {
    if (points_.rows() != gaps_.size())
        throw std::invalid_argument("DiscretePointSet: gap count mismatch");
    validate(distinctness);
}

bool DiscretePointSet::has_representation_collisions() const {
    if (!distinctness_trusted_) return false;
    const int n_pts = size();
    std::vector<int> order(static_cast<std::size_t>(n_pts));
    std::iota(order.begin(), order.end(), 0);
    const int n_dim = dimension();
    auto less = [&](int a, int b) {
        for (int c = 0; c < n_dim; ++c)
            if (points_(a, c) != points_(b, c)) return points_(a, c) < points_(b, c);
        return gaps_(a) < gaps_(b);
    };
    std::sort(order.begin(), order.end(), less);
    for (int i = 0; i + 1 < n_pts; ++i) {
        const int a = order[static_cast<std::size_t>(i)], b = order[static_cast<std::size_t>(i + 1)];
        if (!less(a, b) && !less(b, a)) return true;
    }
    return false;
}

void DiscretePointSet::validate(Distinctness distinctness) {
    if (points_.cols() < 2) throw std::invalid_argument("DiscretePointSet: dimension must be >= 2");
    const int n_pts = size();
    for (int i = 0; i < n_pts; ++i) {
        const double g = gaps_(i);
        if (!(g > 0.0) || g > 1.0)
            throw std::invalid_argument("DiscretePointSet: every point must be interior (gap in (0,1])");
        const double from_coords = 1.0 - points_.row(i).norm();
        // gaps above coordinate resolution must agree with 1 - |x|; deeper
        // gaps only require the coordinates to sit at the sphere
        if (g >= 1e-9) {
            if (std::abs(from_coords - g) > 1e-6 * g)
                throw std::invalid_argument("DiscretePointSet: stored gap inconsistent with coordinates");
        } else if (from_coords > 1e-9) {
            throw std::invalid_argument("DiscretePointSet: stored gap inconsistent with coordinates");
        }
    }
    depth_ = 0;
    for (int i = 0; i < n_pts; ++i) depth_ = std::max(depth_, dyadic_index(gaps_(i)));
    if (distinctness == Distinctness::trusted) {
        distinctness_trusted_ = true;
        return;
    }
    // duplicates: lexicographic sort on (coords, gap)
    std::vector<int> order(static_cast<std::size_t>(n_pts));
    std::iota(order.begin(), order.end(), 0);
    const int n_dim = dimension();
    auto less = [&](int a, int b) {
        for (int c = 0; c < n_dim; ++c) {
            if (points_(a, c) != points_(b, c)) return points_(a, c) < points_(b, c);
        }
        return gaps_(a) < gaps_(b);
    };
    std::sort(order.begin(), order.end(), less);
    for (int i = 0; i + 1 < n_pts; ++i) {
        const int a = order[static_cast<std::size_t>(i)], b = order[static_cast<std::size_t>(i + 1)];
        if (!less(a, b) && !less(b, a))
            throw std::invalid_argument("DiscretePointSet: duplicate points rejected");
    }
}

double ScaleBins::total() const {
    double t = 0.0;
    for (const auto& [k, c] : counts) t += c;
    return t;
}

int ScaleBins::min_k() const {
    if (counts.empty()) throw std::invalid_argument("ScaleBins: empty");
    return counts.begin()->first;
}

int ScaleBins::max_k() const {
    if (counts.empty()) throw std::invalid_argument("ScaleBins: empty");
    return counts.rbegin()->first;
}

ScaleBins ScaleBins::from_counts(std::map<int, double> counts) {
    for (auto it = counts.begin(); it != counts.end();) {
        if (it->second <= 0.0) it = counts.erase(it);
        else ++it;
    }
    ScaleBins b;
    b.counts = std::move(counts);
    return b;
}

std::vector<int> scale_bin(const DiscretePointSet& E, double r) {
    if (!(r > 0.0) || r >= 1.0) throw std::invalid_argument("scale_bin: need 0 < r < 1");
    std::vector<int> out;
    for (int i = 0; i < E.size(); ++i) {
        const double g = E.gap(i);
        if (g >= r && g < 2.0 * r) out.push_back(i);
    }
    return out;
}

ScaleBins dyadic_counts(const DiscretePointSet& E) {
    if (E.size() == 0) throw std::invalid_argument("dyadic_counts: empty set");
    ScaleBins bins;
    for (int i = 0; i < E.size(); ++i) {
        const int k = dyadic_index(E.gap(i));
        bins.counts[k] += 1.0;
        bins.members[k].push_back(i);
    }
    return bins;
}

DiscretePointSet truncate(const DiscretePointSet& E, int K) {
    if (K < 0) throw std::invalid_argument("truncate: K must be >= 0");
    const double cutoff = std::exp2(-K);
    std::vector<int> keep;
    for (int i = 0; i < E.size(); ++i)
        if (E.gap(i) >= cutoff) keep.push_back(i);
    Mat pts(static_cast<int>(keep.size()), E.dimension());
    Vec gaps(static_cast<int>(keep.size()));
    for (int i = 0; i < static_cast<int>(keep.size()); ++i) {
        pts.row(i) = E.points().row(keep[static_cast<std::size_t>(i)]);
        gaps(i) = E.gap(keep[static_cast<std::size_t>(i)]);
    }
    PointSetMeta meta = E.meta();
    meta.truncated_to = K;
    if (keep.empty())
        throw std::invalid_argument("truncate: no points with gap >= 2^-K survive");
    return DiscretePointSet(std::move(pts), std::move(gaps), std::move(meta));
}

// ---------------------------------------------------------------------------
// file format

void save_pointset(const DiscretePointSet& E, const std::string& path) {
    if (E.has_representation_collisions())
        throw std::runtime_error(
            "save_pointset: set has points that collide at coordinate resolution; "
            "a file cannot represent it faithfully");
    // v1 iff every gap is recoverable from the printed coordinates to high
    // relative accuracy; deeper sets carry an explicit gap column instead
    bool v1 = true;
    for (int i = 0; i < E.size(); ++i) {
        const double from_coords = 1.0 - E.points().row(i).norm();
        if (!(from_coords > kInteriorSlack) ||
            std::abs(from_coords - E.gap(i)) > 1e-9 * E.gap(i)) {
            v1 = false;
            break;
        }
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_pointset: cannot open " + path);
    out << "pointset " << (v1 ? "v1" : "v2") << " n=" << E.dimension() << " count=" << E.size()
        << " depth=" << E.depth() << "\n";
    for (int i = 0; i < E.size(); ++i) {
        for (int c = 0; c < E.dimension(); ++c) {
            if (c) out << ' ';
            out << format17(E.points()(i, c));
        }
        if (!v1) out << ' ' << format17(E.gap(i));
        out << "\n";
    }
    if (!out) throw std::runtime_error("save_pointset: write failed for " + path);
    out.close();

    std::ofstream meta(path + ".meta.json");
    if (!meta) throw std::runtime_error("save_pointset: cannot open sidecar for " + path);
    meta << E.meta().to_json().dump(2) << "\n";
}

DiscretePointSet load_pointset(const std::string& path, bool require_seed) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_pointset: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_pointset: empty file");
    std::istringstream header(line);
    std::string tag, version, n_field, count_field, depth_field;
    header >> tag >> version >> n_field >> count_field >> depth_field;
    if (tag != "pointset" || (version != "v1" && version != "v2") ||
        n_field.rfind("n=", 0) != 0 || count_field.rfind("count=", 0) != 0 ||
        depth_field.rfind("depth=", 0) != 0)
        throw std::runtime_error("load_pointset: malformed header");
    const int n = std::stoi(n_field.substr(2));
    const int count = std::stoi(count_field.substr(6));
    if (n < 2 || count < 0) throw std::runtime_error("load_pointset: malformed header");
    const bool v2 = version == "v2";

    Mat pts(count, n);
    Vec gaps(count);
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (rows >= count) throw std::runtime_error("load_pointset: more rows than header count");
        std::istringstream row(line);
        for (int c = 0; c < n; ++c) {
            if (!(row >> pts(rows, c)))
                throw std::runtime_error("load_pointset: malformed row / dimension mismatch");
        }
        if (v2) {
            if (!(row >> gaps(rows))) throw std::runtime_error("load_pointset: missing gap column");
        } else {
            const double nrm = pts.row(rows).norm();
            if (nrm >= 1.0 - kInteriorSlack)
                throw std::runtime_error("load_pointset: non-interior point");
            gaps(rows) = 1.0 - nrm;
        }
        double extra;
        if (row >> extra) throw std::runtime_error("load_pointset: too many columns");
        ++rows;
    }
    if (rows != count) throw std::runtime_error("load_pointset: header count mismatch");

    PointSetMeta meta;
    std::ifstream ms(path + ".meta.json");
    if (ms) {
        nlohmann::ordered_json j = nlohmann::ordered_json::parse(ms, nullptr, true, true);
        meta = PointSetMeta::from_json(j);
    } else {
        meta.generator = "unknown";
    }
    if (require_seed && !meta.seed)
        throw std::runtime_error("load_pointset: file has no seed in its meta sidecar");
    return DiscretePointSet(std::move(pts), std::move(gaps), std::move(meta));
}

}  // namespace limitset
