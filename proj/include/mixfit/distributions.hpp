#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mixfit/dataset.hpp"

namespace mixfit {

enum class Family { Gaussian1D, MVN, Poisson };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

struct Gaussian1DParams {
    double mu = 0.0;
    double sigma2 = 1.0;  // variance, must be > 0
};

struct MVNParams {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;  // symmetric covariance, positive definite after regularization
};

struct PoissonParams {
    double lambda = 1.0;  // rate, must be > 0
};

using ComponentParams = std::variant<Gaussian1DParams, MVNParams, PoissonParams>;

/// Weighted sum of K same-family component distributions. Weights are
/// non-negative and sum to one.
struct MixtureModel {
    Family family = Family::Gaussian1D;
    std::vector<double> weights;
    std::vector<ComponentParams> components;

    int k() const { return static_cast<int>(components.size()); }
    /// Observation dimension: 1 except for MVN components.
    Eigen::Index dim() const;

    const Gaussian1DParams& gaussian(int k) const { return std::get<Gaussian1DParams>(components[static_cast<std::size_t>(k)]); }
    const MVNParams& mvn(int k) const { return std::get<MVNParams>(components[static_cast<std::size_t>(k)]); }
    const PoissonParams& poisson(int k) const { return std::get<PoissonParams>(components[static_cast<std::size_t>(k)]); }

    /// Throws if any invariant is violated (weight sum, family tags, shapes).
    void validate() const;
};

// ---- component log-densities ------------------------------------------------

/// log N(x; mu, sigma2) = -log(2 pi sigma2)/2 - (x-mu)^2 / (2 sigma2).
double gaussian_log_pdf(double x, const Gaussian1DParams& p);

/// Multivariate normal log-density, evaluated through a Cholesky
/// factorization of the (jitter-regularized) covariance; no explicit inverse
/// or determinant expansion.
double mvn_log_pdf(const Eigen::VectorXd& x, const MVNParams& p);

/// log Poisson(x; lambda) = -lambda + x log lambda - lgamma(x + 1).
double poisson_log_pmf(long long x, const PoissonParams& p);

/// Mixture log-density at a scalar observation (Gaussian1D or Poisson family),
/// computed as log-sum-exp over log w_k + log g_k(x); zero-weight components
/// are excluded from the reduction.
double mixture_log_pdf(double x, const MixtureModel& m);
/// Mixture log-density at a vector observation (MVN family; accepts the
/// scalar families when the vector has length 1).
double mixture_log_pdf(const Eigen::VectorXd& x, const MixtureModel& m);

// ---- parameter floors ---------------------------------------------------------

/// Smallest variance a fitted or initialized Gaussian1D component may take:
/// 1e-10 * (data range)^2, falling back to 1e-10 when the data has no spread.
/// Keeps single-point components from sending the likelihood to infinity.
double gaussian_variance_floor(const Dataset& data);

/// Smallest Poisson rate; keeps log(lambda) finite.
inline constexpr double kLambdaFloor = 1e-10;

// ---- covariance regularization ----------------------------------------------

/// Symmetrizes `sigma` and, when Cholesky factorization fails, adds
/// eps * trace/d to the diagonal with eps = 1e-9, retrying up to 3 times with
/// eps growing tenfold. Throws NotPositiveDefiniteError when every retry fails.
Eigen::MatrixXd regularize_to_pd(Eigen::MatrixXd sigma);

/// Cholesky factor of a regularized covariance, reused across evaluations of
/// the same component.
class MVNFactor {
public:
    explicit MVNFactor(const MVNParams& p);
    double log_pdf(const Eigen::VectorXd& x) const;
    Eigen::Index dim() const { return mu_.size(); }

private:
    Eigen::VectorXd mu_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double log_norm_;  // -d/2 log 2pi - sum log L_ii
};

// ---- batch evaluation over a dataset ----------------------------------------

/// Throws unless the dataset can be scored under the model's family
/// (dimension agreement; integer non-negative values for Poisson).
void check_compatible(const Dataset& data, const MixtureModel& m);

/// Precomputes per-component constants of one model for repeated row
/// evaluation; the workhorse behind the E-step, clustering and grids.
class ComponentEvaluator {
public:
    ComponentEvaluator(const MixtureModel& m, const Dataset& data);

    int k() const { return k_; }
    /// Writes log g_k(x_i) for every component into `out` (size k()).
    void log_densities(const Dataset& data, Eigen::Index i, std::span<double> out) const;

private:
    struct GaussianCoef {
        double mu, neg_half_inv_sigma2, log_norm;
    };
    struct PoissonCoef {
        double lambda, log_lambda;
    };

    Family family_;
    int k_;
    std::vector<GaussianCoef> gauss_;
    std::vector<PoissonCoef> pois_;
    std::vector<MVNFactor> mvn_;
};

/// Components (and weights) reordered by ascending location: mu for
/// Gaussian1D, first mean coordinate for MVN, lambda for Poisson. Makes
/// cross-run comparison label-invariant.
MixtureModel sorted_by_location(const MixtureModel& m);

}  // namespace mixfit
