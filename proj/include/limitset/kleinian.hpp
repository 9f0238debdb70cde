#pragma once

#include "limitset/pointset.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace limitset {

/// Disk Möbius transformation in SU(1,1) form: the matrix (a, b; conj b,
/// conj a) with |a|^2 - |b|^2 = 1, acting by z -> (a z + b)/(conj(b) z +
/// conj(a)). The form is closed under composition and inversion, so only
/// (a, b) is stored; determinant drift is renormalized away.
struct MoebiusMap {
    std::complex<double> a{1.0, 0.0};
    std::complex<double> b{0.0, 0.0};

    static MoebiusMap identity() { return {}; }
    static MoebiusMap hyperbolic_translation(double t);  // axis = real segment (-1,1)
    static MoebiusMap rotation(double phi);
    static MoebiusMap parabolic_fixing_one();  // fixed point w = 1

    MoebiusMap inverse() const { return {std::conj(a), -b}; }
    MoebiusMap compose(const MoebiusMap& rhs) const;

    std::complex<double> apply(std::complex<double> z) const;
    std::complex<double> origin_image() const { return b / std::conj(a); }

    double det() const { return std::norm(a) - std::norm(b); }
    void renormalize();

    /// 1 - |g(0)|, stable far below coordinate resolution:
    /// 1 - |b|/|a| = 1 / (|a|^2 + |a||b|) when det = 1.
    double orbit_gap() const;

    /// cosh of the hyperbolic distance d(0, g(0)) = |a|^2 + |b|^2.
    double cosh_dist_origin() const;

    enum class Kind { identity, hyperbolic, parabolic, elliptic };
    Kind classify(double tol = 1e-9) const;
};

struct GroupPresentation {
    std::vector<MoebiusMap> generators;  // inverses are derived
    std::string type;                    // "schottky" | "parabolic"
    double t = 0.0;                      // translation length (schottky)
    bool discreteness_warning = false;   // t below the ping-pong heuristic
};

/// Free group on two hyperbolic translations with orthogonal axes. t below
/// t_min = 4 only warns: discreteness is a heuristic there, not a theorem.
GroupPresentation schottky_group(double t, int m = 2);

/// Cyclic group of a single parabolic fixing w = 1.
GroupPresentation parabolic_group();

/// Orbit of the origin over reduced words of length <= max_len, in
/// breadth-first (length, lexicographic) order. Word lengths are returned
/// alongside the points; point 0 is the identity.
struct Orbit {
    DiscretePointSet points;
    std::vector<int> word_lengths;
};

Orbit enumerate_orbit(const GroupPresentation& G, int max_len,
                      std::int64_t memory_cap = 5'000'000);

/// Reduced-word count 1 + sum_{l<=L} 2m(2m-1)^(l-1) for the free group on m
/// generators.
std::int64_t reduced_word_count(int m, int max_len);

}  // namespace limitset
