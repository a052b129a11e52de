#include "mixfit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mixfit/errors.hpp"

namespace mixfit {

namespace {

bool is_nonneg_integer(double v) {
    return std::isfinite(v) && v >= 0.0 && v == std::floor(v);
}

}  // namespace

Dataset Dataset::from_reals(const std::vector<double>& values) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(values.size()), 1);
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, 0) = values[static_cast<std::size_t>(i)];
    return from_matrix(std::move(m));
}

Dataset Dataset::from_matrix(Eigen::MatrixXd points) {
    Dataset d;
    d.points_ = std::move(points);
    d.finalize();
    return d;
}

Dataset Dataset::from_counts(const std::vector<long long>& values) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(values.size()), 1);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        m(i, 0) = static_cast<double>(values[static_cast<std::size_t>(i)]);
    return from_matrix(std::move(m));
}

Dataset Dataset::from_value_counts(const std::vector<std::pair<long long, long long>>& pairs) {
    Dataset d;
    std::size_t kept = 0;
    for (const auto& [value, freq] : pairs) {
        if (freq < 0) throw ParseError("negative frequency in value/count data");
        if (freq > 0) ++kept;
        (void)value;
    }
    d.points_.resize(static_cast<Eigen::Index>(kept), 1);
    d.counts_.reserve(kept);
    Eigen::Index i = 0;
    for (const auto& [value, freq] : pairs) {
        if (freq == 0) continue;
        d.points_(i++, 0) = static_cast<double>(value);
        d.counts_.push_back(static_cast<double>(freq));
    }
    d.finalize();
    return d;
}

void Dataset::finalize() {
    const auto n = points_.rows();
    const auto dim = points_.cols();
    min_.assign(static_cast<std::size_t>(dim), std::numeric_limits<double>::infinity());
    max_.assign(static_cast<std::size_t>(dim), -std::numeric_limits<double>::infinity());
    all_finite_ = true;
    nonneg_integers_ = n > 0;
    total_count_ = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        total_count_ += count(i);
        for (Eigen::Index j = 0; j < dim; ++j) {
            const double v = points_(i, j);
            if (!std::isfinite(v)) {
                all_finite_ = false;
                nonneg_integers_ = false;
                continue;
            }
            auto sj = static_cast<std::size_t>(j);
            min_[sj] = std::min(min_[sj], v);
            max_[sj] = std::max(max_[sj], v);
            if (!is_nonneg_integer(v)) nonneg_integers_ = false;
        }
    }
}

Dataset Dataset::canonical_counts() const {
    if (dim() != 1) throw DimensionMismatchError("canonical count form requires univariate data");
    if (!nonneg_integers()) throw ParseError("canonical count form requires non-negative integer values");
    std::map<long long, double> merged;
    for (Eigen::Index i = 0; i < rows(); ++i)
        merged[static_cast<long long>(points_(i, 0))] += count(i);

    Dataset d;
    d.points_.resize(static_cast<Eigen::Index>(merged.size()), 1);
    d.counts_.reserve(merged.size());
    Eigen::Index i = 0;
    for (const auto& [value, freq] : merged) {
        d.points_(i++, 0) = static_cast<double>(value);
        d.counts_.push_back(freq);
    }
    d.finalize();
    return d;
}

}  // namespace mixfit
