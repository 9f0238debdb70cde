#include "limitset/exponent.hpp"

#include "limitset/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace limitset {

double accumulation_series(const DiscretePointSet& E, double s) {
    if (s < 0.0) throw std::invalid_argument("accumulation_series: s must be >= 0");
    const Vec& gaps = E.gaps();
    return chunked_reduce<double>(
        static_cast<std::size_t>(E.size()), 0.0,
        [&](std::size_t lo, std::size_t hi) {
            double acc = 0.0;
            for (std::size_t i = lo; i < hi; ++i) acc += std::pow(gaps(static_cast<int>(i)), s);
            return acc;
        },
        [](double a, double b) { return a + b; });
}

double poincare_series(const DiscretePointSet& orbit, double s) {
    if (s < 0.0) throw std::invalid_argument("poincare_series: s must be >= 0");
    const Vec& gaps = orbit.gaps();
    return chunked_reduce<double>(
        static_cast<std::size_t>(orbit.size()), 0.0,
        [&](std::size_t lo, std::size_t hi) {
            double acc = 0.0;
            for (std::size_t i = lo; i < hi; ++i) {
                const double g = gaps(static_cast<int>(i));
                acc += std::pow(g / (2.0 - g), s);
            }
            return acc;
        },
        [](double a, double b) { return a + b; });
}

ExponentEstimate critical_exponent(const ScaleBins& bins, ExponentMethod method,
                                   std::optional<std::pair<int, int>> window) {
    std::vector<std::pair<int, double>> nonempty;  // (k, N_k)
    for (const auto& [k, c] : bins.counts)
        if (c > 0.0) nonempty.emplace_back(k, c);
    if (nonempty.empty()) throw std::invalid_argument("critical_exponent: no non-empty bins");

    std::pair<int, int> win;
    if (window) {
        win = *window;
        if (win.first > win.second)
            throw std::invalid_argument("critical_exponent: window is reversed");
    } else {
        // deepest half of the available non-empty bins
        const std::size_t half = (nonempty.size() + 1) / 2;
        win = {nonempty[nonempty.size() - half].first, nonempty.back().first};
    }

    std::vector<std::pair<int, double>> used;
    for (const auto& [k, c] : nonempty)
        if (k >= win.first && k <= win.second) used.emplace_back(k, c);
    if (used.size() < 4)
        throw std::invalid_argument("critical_exponent: too few non-empty bins in window (need >= 4)");

    ExponentEstimate est;
    est.method = method;
    est.window = win;
    est.all_singletons = true;
    for (const auto& [k, c] : used) {
        if (c != 1.0) est.all_singletons = false;
        if (k > 0) est.per_k.emplace_back(k, std::log2(c) / k);
    }

    if (method == ExponentMethod::limsup) {
        double best = 0.0;
        for (const auto& [k, v] : est.per_k) best = std::max(best, v);
        est.delta_hat = std::max(0.0, best);
        return est;
    }

    // least squares of log2 N_k on k over the window
    const double m = static_cast<double>(used.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [k, c] : used) {
        sx += k;
        sy += std::log2(c);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, sse = 0.0;
    for (const auto& [k, c] : used) {
        const double dx = k - mx, dy = std::log2(c) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    if (sxx <= 0.0) throw std::invalid_argument("critical_exponent: degenerate window");
    const double slope = sxy / sxx;
    for (const auto& [k, c] : used) {
        const double resid = std::log2(c) - my - slope * (k - mx);
        sse += resid * resid;
    }
    est.delta_hat = std::max(0.0, slope);
    est.slope_stderr = used.size() > 2 ? std::sqrt(sse / (m - 2.0) / sxx) : 0.0;
    return est;
}

std::string bins_to_csv(const ScaleBins& bins) {
    std::ostringstream out;
    out << "k,N_k,log2_N_k\n";
    char buf[96];
    for (const auto& [k, c] : bins.counts) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", k, c, std::log2(c));
        out << buf;
    }
    return out.str();
}

}  // namespace limitset
