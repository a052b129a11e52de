#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixfit/dataset.hpp"
#include "mixfit/distributions.hpp"

namespace mixfit {

/// Posterior component probabilities gamma_{i,k} for every data row; each row
/// is a probability vector. Rows carry the dataset's multiplicities so that
/// downstream reductions (weights, moments) stay weight-aware.
struct ResponsibilityMatrix {
    Eigen::MatrixXd gamma;          // rows x K
    std::vector<double> row_count;  // empty = every row counts once

    Eigen::Index rows() const { return gamma.rows(); }
    int k() const { return static_cast<int>(gamma.cols()); }
    double count(Eigen::Index i) const { return row_count.empty() ? 1.0 : row_count[static_cast<std::size_t>(i)]; }
    double total_count() const;
    /// sum_i count_i * gamma_{i,k} — the effective mass claimed by component k.
    double column_mass(int k) const;
};

enum class DegeneratePolicy { Error, Reinit };

struct FitConfig {
    int k = 1;
    Family family = Family::Gaussian1D;
    double tol = 1e-8;  // relative log-likelihood change threshold
    int max_iters = 1000;
    int restarts = 10;
    std::uint64_t seed = 0;
    DegeneratePolicy degenerate_policy = DegeneratePolicy::Reinit;
    int threads = 1;  // restarts run in parallel when > 1
};

struct TraceEntry {
    int iter = 0;
    double log_likelihood = 0.0;
    MixtureModel model;  // full snapshot after `iter` EM iterations
};

struct FitResult {
    MixtureModel model;
    std::vector<TraceEntry> trace;  // iteration 0 is the initialization
    bool converged = false;
    int iters = 0;    // trace.size() - 1
    int best_of = 0;  // index of the winning restart
    double final_log_likelihood = 0.0;
    std::string rng_algorithm;
    std::vector<std::string> warnings;
};

/// A component whose responsibility mass falls below this fraction of the
/// total count is treated as degenerate.
inline constexpr double kDegenerateRelMass = 1e-8;

/// gamma_{i,k} = w_k g_k(x_i) / sum_k' w_k' g_k'(x_i), computed per row as a
/// softmax of log w_k + log g_k(x_i).
ResponsibilityMatrix e_step(const Dataset& data, const MixtureModel& model);

/// w_k = sum_i c_i gamma_{i,k} / sum_i c_i; sums to 1.
std::vector<double> update_weights(const ResponsibilityMatrix& r);

/// Per-component weighted mean and biased weighted variance, the variance
/// computed against the freshly updated mean and clamped to the variance
/// floor. Throws DegenerateComponentError when a column's mass is below
/// kDegenerateRelMass * total count.
std::vector<Gaussian1DParams> m_step_gaussian1d(const Dataset& data, const ResponsibilityMatrix& r);

/// Weighted mean vector and weighted scatter matrix (fresh mean), symmetrized
/// and jitter-regularized to positive definite.
std::vector<MVNParams> m_step_mvn(const Dataset& data, const ResponsibilityMatrix& r);

/// Weighted mean rate, clamped to the lambda floor.
std::vector<PoissonParams> m_step_poisson(const Dataset& data, const ResponsibilityMatrix& r);

/// sum_i c_i log f(x_i; model) — the observed-data log-likelihood.
double log_likelihood(const Dataset& data, const MixtureModel& model);

/// Closed-form single-distribution maximum-likelihood fit, returned as a
/// one-component mixture.
MixtureModel mle_single(const Dataset& data, Family family);

/// Runs EM from `restarts` random initializations (or from `init` when given,
/// which collapses the restart loop to a single run) and returns the restart
/// with the highest final log-likelihood; ties go to the lowest index.
/// Restart r draws its initialization from substream(config.seed, r).
FitResult em_fit(const Dataset& data, const FitConfig& config,
                 const std::optional<MixtureModel>& init = std::nullopt);

}  // namespace mixfit
