#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mixfit {

/// Observations for fitting: univariate reals, d-dimensional vectors, or
/// non-negative integer counts. Rows may carry a multiplicity, which is how
/// run-length-encoded count data (value/frequency pairs) is represented;
/// every reduction in the library weights rows by it.
class Dataset {
public:
    Dataset() = default;

    static Dataset from_reals(const std::vector<double>& values);
    static Dataset from_matrix(Eigen::MatrixXd points);  // one observation per row
    static Dataset from_counts(const std::vector<long long>& values);
    /// (value, frequency) pairs; zero-frequency rows are dropped.
    static Dataset from_value_counts(const std::vector<std::pair<long long, long long>>& pairs);

    Eigen::Index rows() const { return points_.rows(); }
    Eigen::Index dim() const { return points_.cols(); }
    bool empty() const { return points_.rows() == 0; }

    bool weighted() const { return !counts_.empty(); }
    double count(Eigen::Index i) const { return counts_.empty() ? 1.0 : counts_[static_cast<std::size_t>(i)]; }
    /// Sum of row multiplicities; equals rows() for unweighted data.
    double total_count() const { return total_count_; }

    double scalar(Eigen::Index i) const { return points_(i, 0); }
    Eigen::MatrixXd::ConstRowXpr row(Eigen::Index i) const { return points_.row(i); }
    const Eigen::MatrixXd& points() const { return points_; }

    double min_coord(Eigen::Index j) const { return min_[static_cast<std::size_t>(j)]; }
    double max_coord(Eigen::Index j) const { return max_[static_cast<std::size_t>(j)]; }
    double range(Eigen::Index j = 0) const { return max_coord(j) - min_coord(j); }

    bool all_finite() const { return all_finite_; }
    /// True when every entry is a non-negative integer (count data).
    bool nonneg_integers() const { return nonneg_integers_; }

    /// Merged (value, multiplicity) form, sorted by value: duplicate rows of
    /// univariate integer data are collapsed and their multiplicities summed.
    /// Fitting uses this form so that expanded data and its frequency-table
    /// encoding reduce to the identical sequence of arithmetic operations.
    Dataset canonical_counts() const;

private:
    void finalize();

    Eigen::MatrixXd points_;      // rows x dim
    std::vector<double> counts_;  // empty = every row counts once
    std::vector<double> min_, max_;
    double total_count_ = 0.0;
    bool all_finite_ = true;
    bool nonneg_integers_ = false;
};

}  // namespace mixfit
