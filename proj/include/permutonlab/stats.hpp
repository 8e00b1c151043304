#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "permutonlab/errors.hpp"

namespace permutonlab {

namespace detail {

// Regularized incomplete gamma functions, series + continued fraction.
inline double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace detail

/// Upper tail of the chi-square distribution with dof degrees of freedom.
inline double chi_square_pvalue(double stat, int dof) {
    if (stat <= 0) return 1.0;
    double a = dof / 2.0, x = stat / 2.0;
    if (x < a + 1) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_contfrac(a, x);
}

/// Pearson statistic against equal cell probabilities.
inline double chi_square_uniform_stat(const std::vector<std::int64_t>& counts,
                                      std::int64_t total) {
    if (counts.empty()) throw UsageError("chi_square: no cells");
    double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    double stat = 0;
    for (auto c : counts) {
        double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

inline double median_of(std::vector<double> v) {
    if (v.empty()) throw UsageError("median: empty");
    std::sort(v.begin(), v.end());
    std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

inline double quantile_of(std::vector<double> v, double q) {
    if (v.empty()) throw UsageError("quantile: empty");
    std::sort(v.begin(), v.end());
    double pos = q * (static_cast<double>(v.size()) - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return v[lo] * (1 - frac) + v[hi] * frac;
}

} // namespace permutonlab
