#include "mixfit/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mixfit/detail/numeric.hpp"
#include "mixfit/errors.hpp"

namespace mixfit {

using detail::kLog2Pi;
using detail::kNegInf;

const char* family_name(Family f) {
    switch (f) {
        case Family::Gaussian1D: return "gaussian";
        case Family::MVN: return "mvn";
        case Family::Poisson: return "poisson";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "gaussian") return Family::Gaussian1D;
    if (name == "mvn") return Family::MVN;
    if (name == "poisson") return Family::Poisson;
    throw ParseError("unknown family '" + name + "' (expected gaussian, mvn, or poisson)");
}

namespace {

void check_gaussian(const Gaussian1DParams& p) {
    if (!std::isfinite(p.mu) || !std::isfinite(p.sigma2) || p.sigma2 <= 0.0)
        throw InvalidParameterError("Gaussian1D requires finite mu and sigma2 > 0");
}

void check_poisson(const PoissonParams& p) {
    if (!std::isfinite(p.lambda) || p.lambda <= 0.0)
        throw InvalidParameterError("Poisson requires lambda > 0");
}

void check_mvn_shape(const MVNParams& p) {
    const auto d = p.mu.size();
    if (d < 1 || p.sigma.rows() != d || p.sigma.cols() != d)
        throw DimensionMismatchError("covariance shape does not match mean dimension");
    if (!p.mu.allFinite() || !p.sigma.allFinite())
        throw InvalidParameterError("MVN parameters must be finite");
    const double scale = p.sigma.cwiseAbs().maxCoeff();
    const double asym = (p.sigma - p.sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(scale, 1e-300))
        throw InvalidParameterError("covariance is not symmetric");
}

double location_key(const ComponentParams& c) {
    return std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Gaussian1DParams>) return p.mu;
            else if constexpr (std::is_same_v<T, MVNParams>) return p.mu(0);
            else return p.lambda;
        },
        c);
}

Family component_family(const ComponentParams& c) {
    if (std::holds_alternative<Gaussian1DParams>(c)) return Family::Gaussian1D;
    if (std::holds_alternative<MVNParams>(c)) return Family::MVN;
    return Family::Poisson;
}

}  // namespace

Eigen::Index MixtureModel::dim() const {
    if (family != Family::MVN) return 1;
    return components.empty() ? 0 : std::get<MVNParams>(components.front()).mu.size();
}

void MixtureModel::validate() const {
    if (components.empty()) throw InvalidParameterError("mixture needs at least one component");
    if (weights.size() != components.size())
        throw InvalidParameterError("weight count does not match component count");
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) throw InvalidParameterError("weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvalidParameterError("weights must sum to 1");
    for (const auto& c : components) {
        if (component_family(c) != family)
            throw InvalidParameterError("component family tag does not match the mixture family");
        std::visit(
            [](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, Gaussian1DParams>) check_gaussian(p);
                else if constexpr (std::is_same_v<T, MVNParams>) check_mvn_shape(p);
                else check_poisson(p);
            },
            c);
    }
    if (family == Family::MVN) {
        const auto d = dim();
        for (const auto& c : components)
            if (std::get<MVNParams>(c).mu.size() != d)
                throw DimensionMismatchError("MVN components must share one dimension");
    }
}

double gaussian_variance_floor(const Dataset& data) {
    const double range = data.range(0);
    return range > 0.0 ? 1e-10 * range * range : 1e-10;
}

double gaussian_log_pdf(double x, const Gaussian1DParams& p) {
    check_gaussian(p);
    const double d = x - p.mu;
    return -0.5 * (kLog2Pi + std::log(p.sigma2)) - d * d / (2.0 * p.sigma2);
}

double poisson_log_pmf(long long x, const PoissonParams& p) {
    check_poisson(p);
    if (x < 0) throw DomainError("Poisson support is the non-negative integers");
    const double xd = static_cast<double>(x);
    return -p.lambda + xd * std::log(p.lambda) - std::lgamma(xd + 1.0);
}

Eigen::MatrixXd regularize_to_pd(Eigen::MatrixXd sigma) {
    sigma = ((sigma + sigma.transpose()) / 2.0).eval();
    const auto d = sigma.rows();
    const double jitter_unit = sigma.trace() / static_cast<double>(d);
    double eps = 1e-9;
    for (int attempt = 0; attempt <= 3; ++attempt) {
        Eigen::LLT<Eigen::MatrixXd> llt(sigma);
        if (llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > 0.0).all())
            return sigma;
        if (attempt == 3) break;
        sigma.diagonal().array() += eps * jitter_unit;
        eps *= 10.0;
    }
    throw NotPositiveDefiniteError("covariance not positive definite after regularization");
}

MVNFactor::MVNFactor(const MVNParams& p) : mu_(p.mu) {
    check_mvn_shape(p);
    const Eigen::MatrixXd sigma = regularize_to_pd(p.sigma);
    llt_.compute(sigma);
    const double d = static_cast<double>(mu_.size());
    log_norm_ = -0.5 * d * kLog2Pi - llt_.matrixLLT().diagonal().array().log().sum();
}

double MVNFactor::log_pdf(const Eigen::VectorXd& x) const {
    if (x.size() != mu_.size())
        throw DimensionMismatchError("observation dimension does not match MVN mean");
    const Eigen::VectorXd z = llt_.matrixL().solve(x - mu_);
    return log_norm_ - 0.5 * z.squaredNorm();
}

double mvn_log_pdf(const Eigen::VectorXd& x, const MVNParams& p) {
    return MVNFactor(p).log_pdf(x);
}

namespace {

long long as_count(double x) {
    if (!std::isfinite(x) || x < 0.0 || x != std::floor(x))
        throw DomainError("Poisson observation must be a non-negative integer");
    return static_cast<long long>(x);
}

double mixture_log_pdf_scalar(double x, const MixtureModel& m) {
    m.validate();
    std::vector<double> terms;
    terms.reserve(m.components.size());
    for (int k = 0; k < m.k(); ++k) {
        const double w = m.weights[static_cast<std::size_t>(k)];
        if (w == 0.0) continue;
        const double lg = m.family == Family::Gaussian1D
                              ? gaussian_log_pdf(x, m.gaussian(k))
                              : poisson_log_pmf(as_count(x), m.poisson(k));
        terms.push_back(std::log(w) + lg);
    }
    return detail::log_sum_exp(terms);
}

}  // namespace

double mixture_log_pdf(double x, const MixtureModel& m) {
    if (m.family == Family::MVN) {
        Eigen::VectorXd v(1);
        v << x;
        return mixture_log_pdf(v, m);
    }
    return mixture_log_pdf_scalar(x, m);
}

double mixture_log_pdf(const Eigen::VectorXd& x, const MixtureModel& m) {
    if (m.family != Family::MVN) {
        if (x.size() != 1)
            throw DimensionMismatchError("scalar-family mixture evaluated at a vector observation");
        return mixture_log_pdf_scalar(x(0), m);
    }
    m.validate();
    std::vector<double> terms;
    terms.reserve(m.components.size());
    for (int k = 0; k < m.k(); ++k) {
        const double w = m.weights[static_cast<std::size_t>(k)];
        if (w == 0.0) continue;
        terms.push_back(std::log(w) + mvn_log_pdf(x, m.mvn(k)));
    }
    return detail::log_sum_exp(terms);
}

void check_compatible(const Dataset& data, const MixtureModel& m) {
    switch (m.family) {
        case Family::Gaussian1D:
            if (data.dim() != 1)
                throw DimensionMismatchError("Gaussian1D family requires univariate data");
            break;
        case Family::MVN:
            if (data.dim() != m.dim())
                throw DimensionMismatchError("data dimension does not match MVN model dimension");
            break;
        case Family::Poisson:
            if (data.dim() != 1)
                throw DimensionMismatchError("Poisson family requires univariate data");
            if (!data.nonneg_integers())
                throw DomainError("Poisson family requires non-negative integer observations");
            break;
    }
}

ComponentEvaluator::ComponentEvaluator(const MixtureModel& m, const Dataset& data)
    : family_(m.family), k_(m.k()) {
    m.validate();
    check_compatible(data, m);
    switch (family_) {
        case Family::Gaussian1D:
            gauss_.reserve(static_cast<std::size_t>(k_));
            for (int k = 0; k < k_; ++k) {
                const auto& p = m.gaussian(k);
                gauss_.push_back({p.mu, -0.5 / p.sigma2, -0.5 * (kLog2Pi + std::log(p.sigma2))});
            }
            break;
        case Family::Poisson:
            pois_.reserve(static_cast<std::size_t>(k_));
            for (int k = 0; k < k_; ++k) {
                const auto& p = m.poisson(k);
                pois_.push_back({p.lambda, std::log(p.lambda)});
            }
            break;
        case Family::MVN:
            mvn_.reserve(static_cast<std::size_t>(k_));
            for (int k = 0; k < k_; ++k) mvn_.emplace_back(m.mvn(k));
            break;
    }
}

void ComponentEvaluator::log_densities(const Dataset& data, Eigen::Index i, std::span<double> out) const {
    switch (family_) {
        case Family::Gaussian1D: {
            const double x = data.scalar(i);
            for (int k = 0; k < k_; ++k) {
                const auto& c = gauss_[static_cast<std::size_t>(k)];
                const double d = x - c.mu;
                out[static_cast<std::size_t>(k)] = c.log_norm + c.neg_half_inv_sigma2 * d * d;
            }
            break;
        }
        case Family::Poisson: {
            const double x = data.scalar(i);
            const double log_fact = std::lgamma(x + 1.0);
            for (int k = 0; k < k_; ++k) {
                const auto& c = pois_[static_cast<std::size_t>(k)];
                out[static_cast<std::size_t>(k)] = -c.lambda + x * c.log_lambda - log_fact;
            }
            break;
        }
        case Family::MVN: {
            const Eigen::VectorXd x = data.row(i).transpose();
            for (int k = 0; k < k_; ++k)
                out[static_cast<std::size_t>(k)] = mvn_[static_cast<std::size_t>(k)].log_pdf(x);
            break;
        }
    }
}

MixtureModel sorted_by_location(const MixtureModel& m) {
    std::vector<int> order(static_cast<std::size_t>(m.k()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return location_key(m.components[static_cast<std::size_t>(a)]) <
               location_key(m.components[static_cast<std::size_t>(b)]);
    });
    MixtureModel out;
    out.family = m.family;
    out.weights.reserve(m.weights.size());
    out.components.reserve(m.components.size());
    for (int idx : order) {
        out.weights.push_back(m.weights[static_cast<std::size_t>(idx)]);
        out.components.push_back(m.components[static_cast<std::size_t>(idx)]);
    }
    return out;
}

}  // namespace mixfit
