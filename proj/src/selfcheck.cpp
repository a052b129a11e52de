#include "mixfit/selfcheck.hpp"

#include <cmath>
#include <sstream>

#include "mixfit/em.hpp"
#include "mixfit/errors.hpp"
#include "mixfit/synth.hpp"

namespace mixfit {

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string mismatch(const char* what, double got, double want) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": got " << got << ", expected " << want;
    return os.str();
}

CheckResult check_gaussian_log_pdf() {
    CheckResult r{"gaussian-log-pdf", true, ""};
    struct Case {
        double x, mu, sigma2, expected;
    };
    // expected values from extended-precision evaluation of the closed form
    const Case cases[] = {
        {0.0, 0.0, 1.0, -0.91893853320467274178},
        {1.0, 0.0, 1.0, -1.4189385332046727418},
        {2.5, 1.0, 4.0, -1.8933357137646180512},
    };
    for (const auto& c : cases) {
        const double got = gaussian_log_pdf(c.x, {c.mu, c.sigma2});
        if (!near(got, c.expected, 1e-12)) {
            r.pass = false;
            r.detail = mismatch("log pdf", got, c.expected);
        }
    }
    return r;
}

CheckResult check_poisson_log_pmf() {
    CheckResult r{"poisson-log-pmf", true, ""};
    struct Case {
        long long x;
        double lambda, expected;
    };
    const Case cases[] = {
        {0, 1.0, -1.0},
        {1, 1.0, -1.0},
        {3, 2.0, -1.7123179275482190726},
    };
    for (const auto& c : cases) {
        const double got = poisson_log_pmf(c.x, {c.lambda});
        if (!near(got, c.expected, 1e-12)) {
            r.pass = false;
            r.detail = mismatch("log pmf", got, c.expected);
        }
    }
    return r;
}

CheckResult check_mvn_log_pdf() {
    CheckResult r{"mvn-log-pdf", true, ""};
    Eigen::VectorXd mu(2), x(2);
    mu << 0.0, 0.0;
    x << 1.0, 0.0;
    Eigen::MatrixXd sigma(2, 2);
    sigma << 2.0, 0.5, 0.5, 1.0;
    const double got = mvn_log_pdf(x, {mu, sigma});
    const double expected = -2.403399246091342541;  // |Sigma| = 1.75, hand-inverted
    if (!near(got, expected, 1e-12)) {
        r.pass = false;
        r.detail = mismatch("log pdf", got, expected);
    }
    return r;
}

CheckResult check_mixture_log_pdf() {
    CheckResult r{"mixture-log-pdf", true, ""};
    MixtureModel m;
    m.family = Family::Gaussian1D;
    m.weights = {0.3, 0.7};
    m.components = {Gaussian1DParams{0.0, 1.0}, Gaussian1DParams{4.0, 1.0}};
    const double got = mixture_log_pdf(0.0, m);
    const double expected = -2.1221288975848227626;
    if (!near(got, expected, 1e-12)) {
        r.pass = false;
        r.detail = mismatch("log pdf", got, expected);
    }
    return r;
}

CheckResult check_two_component_em_step() {
    CheckResult r{"two-component-em-step", true, ""};
    const Dataset data = Dataset::from_reals({0.0, 1.0, 5.0, 6.0});
    MixtureModel m;
    m.family = Family::Gaussian1D;
    m.weights = {0.4, 0.6};
    m.components = {Gaussian1DParams{1.0, 1.0}, Gaussian1DParams{4.0, 2.25}};

    const ResponsibilityMatrix resp = e_step(data, m);
    const double expected_gamma[] = {0.9550217706210222940, 0.8807970779778824441,
                                     0.0004187666844443734924, 0.000009064723865100727209};
    for (int i = 0; i < 4; ++i)
        if (!near(resp.gamma(i, 0), expected_gamma[i], 1e-10)) {
            r.pass = false;
            r.detail = mismatch("gamma", resp.gamma(i, 0), expected_gamma[i]);
            return r;
        }

    const auto params = m_step_gaussian1d(data, resp);
    const auto weights = update_weights(resp);
    const double expected_mu[] = {0.4808424213133640719, 5.137856796122106319};
    const double expected_sigma2[] = {0.2543421994535508643, 1.844282499028147925};
    for (int k = 0; k < 2; ++k) {
        if (!near(params[k].mu, expected_mu[k], 1e-10)) {
            r.pass = false;
            r.detail = mismatch("mu", params[k].mu, expected_mu[k]);
        }
        if (!near(params[k].sigma2, expected_sigma2[k], 1e-10)) {
            r.pass = false;
            r.detail = mismatch("sigma2", params[k].sigma2, expected_sigma2[k]);
        }
    }
    if (!near(weights[0], 0.4590616700018035531, 1e-10)) {
        r.pass = false;
        r.detail = mismatch("w", weights[0], 0.4590616700018035531);
    }
    return r;
}

CheckResult check_poisson_mixture_recovery(bool corrupt) {
    CheckResult r{"poisson-mixture-recovery", true, ""};
    auto table = paper_poisson_table();
    if (corrupt) table[3].second += 900;  // fault-injection hook
    const Dataset data = Dataset::from_value_counts(table);

    FitConfig cfg;
    cfg.family = Family::Poisson;
    cfg.k = 3;
    cfg.restarts = 10;
    cfg.tol = 1e-8;
    cfg.seed = 20240613;
    const FitResult fit = em_fit(data, cfg);
    const MixtureModel sorted = sorted_by_location(fit.model);

    const double expected_lambda[] = {1.66, 6.72, 12.85};
    const double expected_w[] = {0.328, 0.256, 0.416};
    for (int k = 0; k < 3; ++k) {
        if (!near(sorted.poisson(k).lambda, expected_lambda[k], 0.1)) {
            r.pass = false;
            r.detail = mismatch("lambda", sorted.poisson(k).lambda, expected_lambda[k]);
        }
        if (!near(sorted.weights[static_cast<std::size_t>(k)], expected_w[k], 0.02)) {
            r.pass = false;
            r.detail = mismatch("w", sorted.weights[static_cast<std::size_t>(k)], expected_w[k]);
        }
    }
    return r;
}

CheckResult check_normalization() {
    CheckResult r{"normalization", true, ""};
    const Dataset data = paper_poisson_dataset();
    FitConfig cfg;
    cfg.family = Family::Poisson;
    cfg.k = 3;
    cfg.restarts = 2;
    cfg.seed = 7;
    const FitResult fit = em_fit(data, cfg);

    const ResponsibilityMatrix resp = e_step(data, fit.model);
    for (Eigen::Index i = 0; i < resp.rows(); ++i) {
        const double s = resp.gamma.row(i).sum();
        if (!near(s, 1.0, 1e-12)) {
            r.pass = false;
            r.detail = mismatch("row sum", s, 1.0);
            return r;
        }
    }
    const auto w = update_weights(resp);
    double s = 0.0;
    for (double wk : w) s += wk;
    if (!near(s, 1.0, 1e-12)) {
        r.pass = false;
        r.detail = mismatch("weight sum", s, 1.0);
    }
    return r;
}

}  // namespace

std::vector<CheckResult> run_selfcheck(const SelfCheckOptions& options) {
    std::vector<CheckResult> results;
    results.push_back(check_gaussian_log_pdf());
    results.push_back(check_poisson_log_pmf());
    results.push_back(check_mvn_log_pdf());
    results.push_back(check_mixture_log_pdf());
    results.push_back(check_two_component_em_step());
    results.push_back(check_poisson_mixture_recovery(options.corrupt_count_table));
    results.push_back(check_normalization());
    return results;
}

}  // namespace mixfit
