#pragma once

#include "limitset/pointset.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace limitset {

enum class ExponentMethod { regression, limsup };

/// Critical-exponent estimate from dyadic count growth. delta_hat is the
/// windowed least-squares slope of log2 N_k vs k (regression) or the max of
/// log2(N_k)/k over the window (limsup), clamped at 0.
struct ExponentEstimate {
    double delta_hat = 0.0;
    ExponentMethod method = ExponentMethod::regression;
    std::pair<int, int> window{0, 0};
    double slope_stderr = 0.0;                     // regression only
    std::vector<std::pair<int, double>> per_k;     // (k, log2(N_k)/k)
    bool all_singletons = false;                   // every window bin has N_k = 1
};

/// Partial accumulation series over the stored points: sum of gap^s.
double accumulation_series(const DiscretePointSet& E, double s);

/// Orbit series with hyperbolic weights: sum of ((1-|x|)/(1+|x|))^s,
/// computed from stored gaps (gap/(2-gap)).
double poincare_series(const DiscretePointSet& orbit, double s);

/// Estimate the critical exponent from count growth. The window defaults to
/// the deepest half of the non-empty bins; empty bins inside the window are
/// skipped. Throws when fewer than 4 non-empty bins fall in the window.
ExponentEstimate critical_exponent(const ScaleBins& bins, ExponentMethod method,
                                   std::optional<std::pair<int, int>> window = std::nullopt);

/// (k, N_k, log2 N_k) rows for plotting.
std::string bins_to_csv(const ScaleBins& bins);

}  // namespace limitset
