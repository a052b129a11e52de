#include "mixfit/em.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "mixfit/detail/numeric.hpp"
#include "mixfit/errors.hpp"
#include "mixfit/init.hpp"
#include "mixfit/rng.hpp"

namespace mixfit {

double ResponsibilityMatrix::total_count() const {
    if (row_count.empty()) return static_cast<double>(gamma.rows());
    double s = 0.0;
    for (double c : row_count) s += c;
    return s;
}

double ResponsibilityMatrix::column_mass(int k) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < gamma.rows(); ++i) s += count(i) * gamma(i, k);
    return s;
}

namespace {

void check_family_compatible(const Dataset& data, Family family) {
    switch (family) {
        case Family::Gaussian1D:
            if (data.dim() != 1)
                throw DimensionMismatchError("Gaussian1D family requires univariate data");
            break;
        case Family::MVN:
            break;
        case Family::Poisson:
            if (data.dim() != 1)
                throw DimensionMismatchError("Poisson family requires univariate data");
            if (!data.nonneg_integers())
                throw DomainError("Poisson family requires non-negative integer observations");
            break;
    }
}

/// Univariate non-negative integer data is fitted in merged (value, count)
/// form so that expanded observations and their frequency-table encoding go
/// through the identical reduction order.
Dataset fit_view(const Dataset& data) {
    if (data.dim() == 1 && data.nonneg_integers() && data.rows() > 0) return data.canonical_counts();
    return data;
}

struct EStepOutcome {
    ResponsibilityMatrix resp;
    double log_likelihood = 0.0;
};

EStepOutcome e_step_impl(const Dataset& data, const MixtureModel& model) {
    if (data.empty()) throw Error("cannot run the E-step on an empty dataset");
    ComponentEvaluator eval(model, data);
    const int K = model.k();
    std::vector<double> log_w(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const double w = model.weights[static_cast<std::size_t>(k)];
        log_w[static_cast<std::size_t>(k)] = w > 0.0 ? std::log(w) : detail::kNegInf;
    }

    EStepOutcome out;
    out.resp.gamma.resize(data.rows(), K);
    if (data.weighted()) {
        out.resp.row_count.resize(static_cast<std::size_t>(data.rows()));
        for (Eigen::Index i = 0; i < data.rows(); ++i)
            out.resp.row_count[static_cast<std::size_t>(i)] = data.count(i);
    }

    std::vector<double> t(static_cast<std::size_t>(K));
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        eval.log_densities(data, i, t);
        for (int k = 0; k < K; ++k) t[static_cast<std::size_t>(k)] += log_w[static_cast<std::size_t>(k)];
        const double lse = detail::softmax_inplace(t);
        if (!std::isfinite(lse))
            throw NonFiniteLikelihoodError("non-finite mixture density at row " + std::to_string(i));
        for (int k = 0; k < K; ++k) out.resp.gamma(i, k) = t[static_cast<std::size_t>(k)];
        out.log_likelihood += data.count(i) * lse;
    }
    return out;
}

void require_not_degenerate(const ResponsibilityMatrix& r, int k, double mass) {
    if (mass < kDegenerateRelMass * r.total_count())
        throw DegenerateComponentError(
            k, "component " + std::to_string(k) + " holds negligible responsibility mass");
}

Gaussian1DParams gaussian_component_moments(const Dataset& data, const ResponsibilityMatrix& r,
                                            int k) {
    double mass = 0.0, wsum = 0.0;
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        const double c = r.count(i) * r.gamma(i, k);
        mass += c;
        wsum += c * data.scalar(i);
    }
    const double mu = wsum / mass;
    double vsum = 0.0;
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        const double c = r.count(i) * r.gamma(i, k);
        const double dev = data.scalar(i) - mu;
        vsum += c * dev * dev;
    }
    return {mu, std::max(vsum / mass, gaussian_variance_floor(data))};
}

MVNParams mvn_component_moments(const Dataset& data, const ResponsibilityMatrix& r, int k) {
    const auto d = data.dim();
    double mass = 0.0;
    Eigen::VectorXd wsum = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        const double c = r.count(i) * r.gamma(i, k);
        mass += c;
        wsum.noalias() += c * data.row(i).transpose();
    }
    const Eigen::VectorXd mu = wsum / mass;
    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        const double c = r.count(i) * r.gamma(i, k);
        const Eigen::VectorXd dev = data.row(i).transpose() - mu;
        scatter.noalias() += (c * dev) * dev.transpose();
    }
    return {mu, regularize_to_pd(scatter / mass)};
}

PoissonParams poisson_component_moments(const Dataset& data, const ResponsibilityMatrix& r, int k) {
    double mass = 0.0, wsum = 0.0;
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        const double c = r.count(i) * r.gamma(i, k);
        mass += c;
        wsum += c * data.scalar(i);
    }
    return {std::max(wsum / mass, kLambdaFloor)};
}

ComponentParams component_moments(Family family, const Dataset& data,
                                  const ResponsibilityMatrix& r, int k) {
    switch (family) {
        case Family::Gaussian1D: return gaussian_component_moments(data, r, k);
        case Family::MVN: return mvn_component_moments(data, r, k);
        case Family::Poisson: return poisson_component_moments(data, r, k);
    }
    throw InvalidParameterError("unknown family");
}

}  // namespace

ResponsibilityMatrix e_step(const Dataset& data, const MixtureModel& model) {
    return e_step_impl(data, model).resp;
}

std::vector<double> update_weights(const ResponsibilityMatrix& r) {
    const double total = r.total_count();
    std::vector<double> w(static_cast<std::size_t>(r.k()));
    double sum = 0.0;
    for (int k = 0; k < r.k(); ++k) {
        w[static_cast<std::size_t>(k)] = r.column_mass(k) / total;
        sum += w[static_cast<std::size_t>(k)];
    }
    for (double& wk : w) wk /= sum;  // absorb rounding so the vector sums to 1
    return w;
}

std::vector<Gaussian1DParams> m_step_gaussian1d(const Dataset& data, const ResponsibilityMatrix& r) {
    if (data.dim() != 1) throw DimensionMismatchError("m_step_gaussian1d requires univariate data");
    std::vector<Gaussian1DParams> out;
    out.reserve(static_cast<std::size_t>(r.k()));
    for (int k = 0; k < r.k(); ++k) {
        require_not_degenerate(r, k, r.column_mass(k));
        out.push_back(gaussian_component_moments(data, r, k));
    }
    return out;
}

std::vector<MVNParams> m_step_mvn(const Dataset& data, const ResponsibilityMatrix& r) {
    std::vector<MVNParams> out;
    out.reserve(static_cast<std::size_t>(r.k()));
    for (int k = 0; k < r.k(); ++k) {
        require_not_degenerate(r, k, r.column_mass(k));
        out.push_back(mvn_component_moments(data, r, k));
    }
    return out;
}

std::vector<PoissonParams> m_step_poisson(const Dataset& data, const ResponsibilityMatrix& r) {
    check_family_compatible(data, Family::Poisson);
    std::vector<PoissonParams> out;
    out.reserve(static_cast<std::size_t>(r.k()));
    for (int k = 0; k < r.k(); ++k) {
        require_not_degenerate(r, k, r.column_mass(k));
        out.push_back(poisson_component_moments(data, r, k));
    }
    return out;
}

double log_likelihood(const Dataset& data, const MixtureModel& model) {
    if (data.empty()) throw Error("cannot evaluate the likelihood of an empty dataset");
    ComponentEvaluator eval(model, data);
    const int K = model.k();
    std::vector<double> t(static_cast<std::size_t>(K));
    std::vector<double> log_w(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const double w = model.weights[static_cast<std::size_t>(k)];
        log_w[static_cast<std::size_t>(k)] = w > 0.0 ? std::log(w) : detail::kNegInf;
    }
    double ll = 0.0;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        eval.log_densities(data, i, t);
        for (int k = 0; k < K; ++k) t[static_cast<std::size_t>(k)] += log_w[static_cast<std::size_t>(k)];
        ll += data.count(i) * detail::log_sum_exp(t);
    }
    return ll;
}

MixtureModel mle_single(const Dataset& data_in, Family family) {
    if (data_in.empty()) throw Error("cannot fit an empty dataset");
    if (!data_in.all_finite()) throw NonFiniteLikelihoodError("observations must be finite");
    check_family_compatible(data_in, family);
    const Dataset data = fit_view(data_in);

    ResponsibilityMatrix ones;
    ones.gamma = Eigen::MatrixXd::Ones(data.rows(), 1);
    if (data.weighted()) {
        ones.row_count.resize(static_cast<std::size_t>(data.rows()));
        for (Eigen::Index i = 0; i < data.rows(); ++i)
            ones.row_count[static_cast<std::size_t>(i)] = data.count(i);
    }

    MixtureModel m;
    m.family = family;
    m.weights = {1.0};
    m.components = {component_moments(family, data, ones, 0)};
    return m;
}

namespace {

struct Trajectory {
    std::vector<TraceEntry> trace;
    bool converged = false;
};

Trajectory run_restart(const Dataset& data, const FitConfig& cfg,
                       const std::optional<MixtureModel>& init, int restart) {
    SplitMix64 rng(SplitMix64::substream(cfg.seed, static_cast<std::uint64_t>(restart)));
    MixtureModel model = init ? *init : draw_model(data, cfg.family, cfg.k, rng);
    const int K = model.k();
    const double total = data.total_count();

    Trajectory traj;
    int iter_label = 0;
    double prev_ll = 0.0;
    bool have_prev = false;
    int reinits = 0;
    constexpr int kMaxReinits = 50;
    std::vector<char> frozen(static_cast<std::size_t>(K), 0);
    const int budget = cfg.max_iters + 1 + kMaxReinits;

    for (int step = 0; step < budget; ++step) {
        EStepOutcome e = e_step_impl(data, model);
        if (!std::isfinite(e.log_likelihood))
            throw NonFiniteLikelihoodError("log-likelihood became non-finite during the fit");

        std::vector<int> degenerate;
        for (int k = 0; k < K; ++k)
            if (!frozen[static_cast<std::size_t>(k)] &&
                e.resp.column_mass(k) < kDegenerateRelMass * total)
                degenerate.push_back(k);

        if (!degenerate.empty()) {
            if (cfg.degenerate_policy == DegeneratePolicy::Error)
                throw DegenerateComponentError(
                    degenerate.front(), "component " + std::to_string(degenerate.front()) +
                                            " collapsed (policy: error)");
            if (reinits < kMaxReinits) {
                ++reinits;
                for (int k : degenerate) {
                    model.components[static_cast<std::size_t>(k)] =
                        draw_component(data, cfg.family, rng);
                    model.weights[static_cast<std::size_t>(k)] = 1.0 / static_cast<double>(K);
                }
                double wsum = 0.0;
                for (double w : model.weights) wsum += w;
                for (double& w : model.weights) w /= wsum;
                // the trajectory restarts here; discard the dead-end prefix
                traj.trace.clear();
                iter_label = 0;
                have_prev = false;
                continue;
            }
            // reinit budget exhausted: park these components and carry on
            for (int k : degenerate) frozen[static_cast<std::size_t>(k)] = 1;
        }

        traj.trace.push_back({iter_label, e.log_likelihood, model});
        if (have_prev &&
            std::abs(e.log_likelihood - prev_ll) <= cfg.tol * (std::abs(prev_ll) + 1e-300)) {
            traj.converged = true;
            break;
        }
        if (iter_label >= cfg.max_iters) break;

        std::vector<ComponentParams> next(model.components);
        for (int k = 0; k < K; ++k)
            if (!frozen[static_cast<std::size_t>(k)])
                next[static_cast<std::size_t>(k)] = component_moments(cfg.family, data, e.resp, k);
        model.components = std::move(next);
        model.weights = update_weights(e.resp);

        prev_ll = e.log_likelihood;
        have_prev = true;
        ++iter_label;
    }

    if (traj.trace.empty())
        traj.trace.push_back({0, e_step_impl(data, model).log_likelihood, model});
    return traj;
}

}  // namespace

FitResult em_fit(const Dataset& data_in, const FitConfig& cfg,
                 const std::optional<MixtureModel>& init) {
    if (cfg.k < 1 || cfg.tol <= 0.0 || cfg.max_iters < 1 || cfg.restarts < 1 || cfg.threads < 1)
        throw InvalidParameterError("fit configuration out of range");
    if (data_in.empty()) throw Error("cannot fit an empty dataset");
    if (!data_in.all_finite()) throw NonFiniteLikelihoodError("observations must be finite");
    check_family_compatible(data_in, cfg.family);
    if (init) {
        init->validate();
        if (init->family != cfg.family)
            throw InvalidParameterError("initial model family does not match the fit family");
        if (init->k() != cfg.k)
            throw InvalidParameterError("initial model has a different component count than k");
    }

    const Dataset data = fit_view(data_in);

    FitResult result;
    result.rng_algorithm = kRngAlgorithm;
    if (data.total_count() < static_cast<double>(cfg.k))
        result.warnings.push_back("fewer observations than components (n < k)");

    const int restarts = init ? 1 : cfg.restarts;
    std::vector<Trajectory> runs(static_cast<std::size_t>(restarts));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(restarts));

    auto work = [&](int r) {
        try {
            runs[static_cast<std::size_t>(r)] = run_restart(data, cfg, init, r);
        } catch (...) {
            errors[static_cast<std::size_t>(r)] = std::current_exception();
        }
    };

    if (cfg.threads <= 1 || restarts == 1) {
        for (int r = 0; r < restarts; ++r) work(r);
    } else {
        std::atomic<int> next{0};
        const int nthreads = std::min(cfg.threads, restarts);
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < restarts; r = next.fetch_add(1)) work(r);
            });
        for (auto& th : pool) th.join();
    }

    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (runs[static_cast<std::size_t>(r)].trace.back().log_likelihood >
            runs[static_cast<std::size_t>(best)].trace.back().log_likelihood)
            best = r;

    Trajectory& winner = runs[static_cast<std::size_t>(best)];
    result.model = winner.trace.back().model;
    result.converged = winner.converged;
    result.iters = static_cast<int>(winner.trace.size()) - 1;
    result.best_of = best;
    result.final_log_likelihood = winner.trace.back().log_likelihood;
    result.trace = std::move(winner.trace);
    return result;
}

}  // namespace mixfit
