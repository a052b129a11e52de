#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace mixfit::detail {

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(sum exp(v_i)) with the usual max shift; -inf entries drop out of the
/// reduction and an all--inf input yields -inf.
inline double log_sum_exp(std::span<const double> v) {
    double m = kNegInf;
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;  // all -inf (or a NaN propagates below)
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

/// Replaces log-scores with normalized probabilities; returns the
/// log-normalizer (the log-sum-exp of the input).
inline double softmax_inplace(std::span<double> t) {
    double m = kNegInf;
    for (double x : t) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double& x : t) {
        x = std::exp(x - m);
        s += x;
    }
    for (double& x : t) x /= s;
    return m + std::log(s);
}

}  // namespace mixfit::detail
