#pragma once

// Test-only reference implementations, kept deliberately independent of the
// library code paths: direct closed forms, linear-space probability ratios,
// and naive brute-force accumulation, all in long double.

#include <cmath>
#include <vector>

namespace oracle {

inline long double gaussian_log_pdf(long double x, long double mu, long double s2) {
    const long double two_pi = 6.283185307179586476925286766559L;
    return -0.5L * std::log(two_pi * s2) - (x - mu) * (x - mu) / (2.0L * s2);
}

inline long double gaussian_pdf(long double x, long double mu, long double s2) {
    return std::exp(gaussian_log_pdf(x, mu, s2));
}

inline long double poisson_log_pmf(long long x, long double lambda) {
    return -lambda + static_cast<long double>(x) * std::log(lambda) -
           std::lgamma(static_cast<long double>(x) + 1.0L);
}

inline long double poisson_pmf(long long x, long double lambda) {
    return std::exp(poisson_log_pmf(x, lambda));
}

/// Explicit 2x2 multivariate normal log-density via the adjugate inverse.
inline long double mvn2_log_pdf(long double x0, long double x1, long double mu0, long double mu1,
                                long double s00, long double s01, long double s10,
                                long double s11) {
    const long double two_pi = 6.283185307179586476925286766559L;
    const long double det = s00 * s11 - s01 * s10;
    const long double d0 = x0 - mu0, d1 = x1 - mu1;
    // Sigma^-1 = [[s11, -s01], [-s10, s00]] / det
    const long double quad = (d0 * (s11 * d0 - s01 * d1) + d1 * (-s10 * d0 + s00 * d1)) / det;
    return -std::log(two_pi) - 0.5L * std::log(det) - 0.5L * quad;
}

/// Two-mixture responsibility, computed as the paper-style linear-space ratio.
inline long double two_mixture_gamma(long double w, long double g1, long double g2) {
    return w * g1 / (w * g1 + (1.0L - w) * g2);
}

struct GaussianEmStep {
    std::vector<long double> gamma1;  // responsibility of component 1 per point
    long double mu1, mu2, sigma2_1, sigma2_2, w;
};

/// One full EM iteration for a univariate two-Gaussian mixture: Bayes-rule
/// responsibilities in linear space, then weighted moments by direct sums.
inline GaussianEmStep two_gaussian_em_iteration(const std::vector<long double>& x, long double w,
                                                long double mu1, long double s1, long double mu2,
                                                long double s2) {
    GaussianEmStep out;
    const std::size_t n = x.size();
    out.gamma1.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.gamma1[i] =
            two_mixture_gamma(w, gaussian_pdf(x[i], mu1, s1), gaussian_pdf(x[i], mu2, s2));

    long double m1 = 0.0L, m2 = 0.0L, sx1 = 0.0L, sx2 = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        m1 += out.gamma1[i];
        m2 += 1.0L - out.gamma1[i];
        sx1 += out.gamma1[i] * x[i];
        sx2 += (1.0L - out.gamma1[i]) * x[i];
    }
    out.mu1 = sx1 / m1;
    out.mu2 = sx2 / m2;
    long double v1 = 0.0L, v2 = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        v1 += out.gamma1[i] * (x[i] - out.mu1) * (x[i] - out.mu1);
        v2 += (1.0L - out.gamma1[i]) * (x[i] - out.mu2) * (x[i] - out.mu2);
    }
    out.sigma2_1 = v1 / m1;
    out.sigma2_2 = v2 / m2;
    out.w = m1 / static_cast<long double>(n);
    return out;
}

}  // namespace oracle
