#include "limitset/kleinian.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace limitset {

MoebiusMap MoebiusMap::hyperbolic_translation(double t) {
    return {std::complex<double>(std::cosh(t / 2.0), 0.0),
            std::complex<double>(std::sinh(t / 2.0), 0.0)};
}

MoebiusMap MoebiusMap::rotation(double phi) {
    return {std::polar(1.0, phi / 2.0), std::complex<double>(0.0, 0.0)};
}

MoebiusMap MoebiusMap::parabolic_fixing_one() {
    // Cayley conjugate of the unit translation of the upper half plane
    return {std::complex<double>(1.0, 0.5), std::complex<double>(0.0, -0.5)};
}

MoebiusMap MoebiusMap::compose(const MoebiusMap& rhs) const {
    MoebiusMap out{a * rhs.a + b * std::conj(rhs.b), a * rhs.b + b * std::conj(rhs.a)};
    // |a|^2 - |b|^2 = 1 is measurable only while the entries are moderate;
    // for deep words the difference is pure cancellation noise while the
    // quantities actually consumed (entry ratios, 1/(|a|^2 + |a||b|)) remain
    // well-conditioned, so drift correction is skipped there
    if (std::norm(out.a) + std::norm(out.b) < 1e4) out.renormalize();
    return out;
}

std::complex<double> MoebiusMap::apply(std::complex<double> z) const {
    const std::complex<double> denom = std::conj(b) * z + std::conj(a);
    if (std::abs(denom) < 1e-300) throw std::runtime_error("MoebiusMap: denominator underflow");
    return (a * z + b) / denom;
}

void MoebiusMap::renormalize() {
    const double d = det();
    if (!(d > 0.0)) throw std::runtime_error("MoebiusMap: non-positive determinant");
    const double scale = std::sqrt(d);
    a /= scale;
    b /= scale;
}

double MoebiusMap::orbit_gap() const {
    const double na = std::abs(a), nb = std::abs(b);
    return 1.0 / (na * na + na * nb);
}

double MoebiusMap::cosh_dist_origin() const { return std::norm(a) + std::norm(b); }

MoebiusMap::Kind MoebiusMap::classify(double tol) const {
    if (std::abs(b) < tol && std::abs(a - std::complex<double>(1.0, 0.0)) < tol)
        return Kind::identity;
    const double half_trace = std::abs(a.real());
    if (half_trace > 1.0 + tol) return Kind::hyperbolic;
    if (half_trace < 1.0 - tol) return Kind::elliptic;
    return Kind::parabolic;
}

GroupPresentation schottky_group(double t, int m) {
    if (m != 2) throw std::invalid_argument("schottky_group: only the two-generator group is built");
    if (!(t > 0.0)) throw std::invalid_argument("schottky_group: translation length must be positive");
    GroupPresentation G;
    G.type = "schottky";
    G.t = t;
    G.discreteness_warning = t < 4.0;  // ping-pong disk heuristic
    const MoebiusMap g1 = MoebiusMap::hyperbolic_translation(t);
    const MoebiusMap r = MoebiusMap::rotation(std::numbers::pi / 2.0);
    const MoebiusMap g2 = r.compose(g1).compose(r.inverse());
    G.generators = {g1, g2};
    return G;
}

GroupPresentation parabolic_group() {
    GroupPresentation G;
    G.type = "parabolic";
    G.generators = {MoebiusMap::parabolic_fixing_one()};
    return G;
}

std::int64_t reduced_word_count(int m, int max_len) {
    std::int64_t total = 1, shell = 2 * m;
    for (int l = 1; l <= max_len; ++l) {
        total += shell;
        shell *= 2 * m - 1;
    }
    return total;
}

Orbit enumerate_orbit(const GroupPresentation& G, int max_len, std::int64_t memory_cap) {
    if (max_len < 1) throw std::invalid_argument("enumerate_orbit: max_len must be >= 1");
    const int m = static_cast<int>(G.generators.size());
    if (m < 1) throw std::invalid_argument("enumerate_orbit: empty presentation");

    // letters 2i = generator i, 2i+1 = its inverse
    std::vector<MoebiusMap> letters;
    for (const auto& g : G.generators) {
        letters.push_back(g);
        letters.push_back(g.inverse());
    }

    const std::int64_t expected = reduced_word_count(m, max_len);
    if (expected > memory_cap)
        throw std::invalid_argument("enumerate_orbit: word count " + std::to_string(expected) +
                                    " exceeds the memory cap");

    struct Node {
        MoebiusMap map;
        int last_letter;
    };
    std::vector<Node> frontier{{MoebiusMap::identity(), -1}};

    std::vector<double> coords;
    std::vector<double> gaps;
    std::vector<int> lengths;
    coords.reserve(static_cast<std::size_t>(2 * expected));
    gaps.reserve(static_cast<std::size_t>(expected));
    lengths.reserve(static_cast<std::size_t>(expected));

    auto emit = [&](const MoebiusMap& g, int len) {
        const std::complex<double> z = g.origin_image();
        coords.push_back(z.real());
        coords.push_back(z.imag());
        gaps.push_back(len == 0 ? 1.0 : g.orbit_gap());
        lengths.push_back(len);
    };
    emit(frontier[0].map, 0);

    for (int len = 1; len <= max_len; ++len) {
        std::vector<Node> next;
        next.reserve(frontier.size() * static_cast<std::size_t>(2 * m));
        for (const auto& node : frontier) {
            for (int letter = 0; letter < 2 * m; ++letter) {
                if (node.last_letter >= 0 && (letter ^ 1) == node.last_letter) continue;
                Node child{node.map.compose(letters[static_cast<std::size_t>(letter)]), letter};
                emit(child.map, len);
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
    }

    const int count = static_cast<int>(gaps.size());
    Mat pts(count, 2);
    Vec g(count);
    for (int i = 0; i < count; ++i) {
        pts(i, 0) = coords[static_cast<std::size_t>(2 * i)];
        pts(i, 1) = coords[static_cast<std::size_t>(2 * i) + 1];
        g(i) = gaps[static_cast<std::size_t>(i)];
    }
    PointSetMeta meta;
    meta.generator = G.type;
    meta.seed = 0;
    meta.params["max_len"] = max_len;
    if (G.type == "schottky") meta.params["t"] = G.t;
    std::map<std::string, std::int64_t> length_counts;
    for (int l : lengths) ++length_counts[std::to_string(l)];
    meta.params["word_length_counts"] = length_counts;

    // distinct reduced words move the origin to distinct points in a free
    // group; deep twins may still collide at coordinate resolution
    Orbit orbit{DiscretePointSet(std::move(pts), std::move(g), std::move(meta),
                                 DiscretePointSet::Distinctness::trusted),
                std::move(lengths)};
    return orbit;
}

}  // namespace limitset
