#include <doctest.h>

#include <cmath>

#include "mixfit/distributions.hpp"
#include "mixfit/errors.hpp"
#include "mixfit/rng.hpp"
#include "oracles.hpp"

using namespace mixfit;

TEST_CASE("gaussian_log_pdf closed-form values") {
    CHECK(gaussian_log_pdf(0.0, {0.0, 1.0}) == doctest::Approx(-0.91893853320467274).epsilon(1e-12));
    CHECK(gaussian_log_pdf(1.0, {0.0, 1.0}) == doctest::Approx(-1.41893853320467274).epsilon(1e-12));
    const double want = static_cast<double>(oracle::gaussian_log_pdf(2.5L, 1.0L, 4.0L));
    CHECK(gaussian_log_pdf(2.5, {1.0, 4.0}) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("gaussian_log_pdf parameter validation") {
    CHECK_THROWS_AS(gaussian_log_pdf(0.0, {0.0, 0.0}), InvalidParameterError);
    CHECK_THROWS_AS(gaussian_log_pdf(0.0, {0.0, -1.0}), InvalidParameterError);
    CHECK_THROWS_AS(gaussian_log_pdf(0.0, {std::nan(""), 1.0}), InvalidParameterError);
}

TEST_CASE("gaussian_log_pdf stays finite far into the tails") {
    const Gaussian1DParams p{3.0, 0.25};
    for (double sigmas = 0.0; sigmas <= 40.0; sigmas += 5.0) {
        const double x = p.mu + sigmas * 0.5;
        CHECK(std::isfinite(gaussian_log_pdf(x, p)));
        CHECK(std::isfinite(gaussian_log_pdf(-x, p)));
    }
}

TEST_CASE("gaussian density integrates to one") {
    const Gaussian1DParams p{1.5, 2.5};
    const double sd = std::sqrt(p.sigma2);
    const double lo = p.mu - 8.0 * sd, hi = p.mu + 8.0 * sd;
    const int n = 100000;
    const double h = (hi - lo) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        sum += w * std::exp(gaussian_log_pdf(lo + i * h, p));
    }
    CHECK(sum * h == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("poisson_log_pmf closed-form values") {
    CHECK(poisson_log_pmf(0, {1.0}) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(poisson_log_pmf(1, {1.0}) == doctest::Approx(-1.0).epsilon(1e-14));
    const double want = static_cast<double>(oracle::poisson_log_pmf(3, 2.0L));
    CHECK(poisson_log_pmf(3, {2.0}) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("poisson_log_pmf domain and parameter errors") {
    CHECK_THROWS_AS(poisson_log_pmf(-1, {1.0}), DomainError);
    CHECK_THROWS_AS(poisson_log_pmf(0, {0.0}), InvalidParameterError);
    CHECK_THROWS_AS(poisson_log_pmf(0, {-2.0}), InvalidParameterError);
}

TEST_CASE("poisson masses sum to one over the effective support") {
    for (double lambda : {0.3, 1.0, 7.0, 40.0}) {
        const long long hi = static_cast<long long>(lambda + 40.0 * std::sqrt(lambda)) + 1;
        double sum = 0.0;
        for (long long x = 0; x <= hi; ++x) sum += std::exp(poisson_log_pmf(x, {lambda}));
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("poisson_log_pmf handles large counts through lgamma") {
    CHECK(std::isfinite(poisson_log_pmf(100000, {2.0})));
    const double want = static_cast<double>(oracle::poisson_log_pmf(500, 1.0L));
    CHECK(poisson_log_pmf(500, {1.0}) == doctest::Approx(want).epsilon(1e-12));
}

namespace {

MVNParams mvn2(double s00, double s01, double s11, double m0 = 0.0, double m1 = 0.0) {
    Eigen::VectorXd mu(2);
    mu << m0, m1;
    Eigen::MatrixXd sigma(2, 2);
    sigma << s00, s01, s01, s11;
    return {mu, sigma};
}

}  // namespace

TEST_CASE("mvn_log_pdf closed-form values") {
    Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
    CHECK(mvn_log_pdf(origin, mvn2(1.0, 0.0, 1.0)) ==
          doctest::Approx(-1.83787706640934548).epsilon(1e-12));

    // diagonal covariance factorizes into two univariate terms
    Eigen::VectorXd x(2);
    x << 0.7, -1.1;
    const double got = mvn_log_pdf(x, mvn2(2.0, 0.0, 0.5, 0.2, -0.3));
    const double want = gaussian_log_pdf(0.7, {0.2, 2.0}) + gaussian_log_pdf(-1.1, {-0.3, 0.5});
    CHECK(got == doctest::Approx(want).epsilon(1e-13));

    Eigen::VectorXd x2(2);
    x2 << 1.0, 0.0;
    const double want2 =
        static_cast<double>(oracle::mvn2_log_pdf(1.0L, 0.0L, 0.0L, 0.0L, 2.0L, 0.5L, 0.5L, 1.0L));
    CHECK(mvn_log_pdf(x2, mvn2(2.0, 0.5, 1.0)) == doctest::Approx(want2).epsilon(1e-13));
}

TEST_CASE("mvn_log_pdf with d=1 matches gaussian_log_pdf") {
    Eigen::VectorXd mu(1), x(1);
    mu << 0.4;
    Eigen::MatrixXd sigma(1, 1);
    sigma << 2.25;
    SplitMix64 rng(99);
    for (int i = 0; i < 50; ++i) {
        x(0) = rng.uniform(-10.0, 10.0);
        CHECK(mvn_log_pdf(x, {mu, sigma}) ==
              doctest::Approx(gaussian_log_pdf(x(0), {0.4, 2.25})).epsilon(1e-12));
    }
}

TEST_CASE("mvn_log_pdf error paths") {
    Eigen::VectorXd x(3);
    x << 0, 0, 0;
    CHECK_THROWS_AS(mvn_log_pdf(x, mvn2(1.0, 0.0, 1.0)), DimensionMismatchError);

    MVNParams asym = mvn2(1.0, 0.0, 1.0);
    asym.sigma(0, 1) = 0.2;  // break symmetry on one side only
    Eigen::VectorXd x2 = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(mvn_log_pdf(x2, asym), InvalidParameterError);

    CHECK_THROWS_AS(mvn_log_pdf(x2, mvn2(0.0, 0.0, 0.0)), NotPositiveDefiniteError);
    CHECK_THROWS_AS(mvn_log_pdf(x2, mvn2(-1.0, 0.0, -1.0)), NotPositiveDefiniteError);
}

TEST_CASE("regularize_to_pd jitters a singular covariance into shape") {
    Eigen::MatrixXd rank1(2, 2);
    rank1 << 1.0, 1.0, 1.0, 1.0;
    const Eigen::MatrixXd fixed = regularize_to_pd(rank1);
    Eigen::LLT<Eigen::MatrixXd> llt(fixed);
    CHECK(llt.info() == Eigen::Success);
    CHECK((fixed - rank1).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("mixture_log_pdf degenerate and symmetric cases") {
    MixtureModel single;
    single.family = Family::Gaussian1D;
    single.weights = {1.0};
    single.components = {Gaussian1DParams{2.0, 3.0}};
    CHECK(mixture_log_pdf(1.0, single) ==
          doctest::Approx(gaussian_log_pdf(1.0, {2.0, 3.0})).epsilon(1e-14));

    MixtureModel twin;
    twin.family = Family::Gaussian1D;
    twin.weights = {0.5, 0.5};
    twin.components = {Gaussian1DParams{2.0, 3.0}, Gaussian1DParams{2.0, 3.0}};
    CHECK(mixture_log_pdf(1.0, twin) ==
          doctest::Approx(gaussian_log_pdf(1.0, {2.0, 3.0})).epsilon(1e-13));
}

TEST_CASE("mixture_log_pdf matches direct summation") {
    MixtureModel m;
    m.family = Family::Gaussian1D;
    m.weights = {0.3, 0.7};
    m.components = {Gaussian1DParams{0.0, 1.0}, Gaussian1DParams{4.0, 1.0}};
    const double want = static_cast<double>(
        std::log(0.3L * oracle::gaussian_pdf(0.0L, 0.0L, 1.0L) +
                 0.7L * oracle::gaussian_pdf(0.0L, 4.0L, 1.0L)));
    CHECK(mixture_log_pdf(0.0, m) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("mixture_log_pdf skips zero-weight components") {
    MixtureModel m;
    m.family = Family::Gaussian1D;
    m.weights = {1.0, 0.0};
    // the dead component would dominate at x if it were counted
    m.components = {Gaussian1DParams{10.0, 1.0}, Gaussian1DParams{0.0, 1e-6}};
    CHECK(mixture_log_pdf(0.0, m) ==
          doctest::Approx(gaussian_log_pdf(0.0, {10.0, 1.0})).epsilon(1e-13));
}

TEST_CASE("mixture_log_pdf respects log-sum-exp bounds") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 1 + static_cast<int>(rng.next_u64() % 4);
        MixtureModel m;
        m.family = Family::Gaussian1D;
        double wsum = 0.0;
        for (int i = 0; i < k; ++i) {
            m.components.push_back(
                Gaussian1DParams{rng.uniform(-5.0, 5.0), rng.uniform(0.05, 4.0)});
            m.weights.push_back(rng.uniform(0.05, 1.0));
            wsum += m.weights.back();
        }
        for (double& w : m.weights) w /= wsum;
        const double x = rng.uniform(-30.0, 30.0);

        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        double min_w = 1.0;
        for (int i = 0; i < k; ++i) {
            const double lg = gaussian_log_pdf(x, m.gaussian(i));
            lo = std::min(lo, lg);
            hi = std::max(hi, lg);
            min_w = std::min(min_w, m.weights[static_cast<std::size_t>(i)]);
        }
        const double got = mixture_log_pdf(x, m);
        CHECK(got >= lo + std::log(min_w) - 1e-9);
        CHECK(got <= hi + 1e-9);
        CHECK(std::isfinite(got));
    }
}

TEST_CASE("MixtureModel::validate rejects broken models") {
    MixtureModel m;
    m.family = Family::Gaussian1D;
    m.weights = {0.6, 0.6};
    m.components = {Gaussian1DParams{0.0, 1.0}, Gaussian1DParams{1.0, 1.0}};
    CHECK_THROWS_AS(m.validate(), InvalidParameterError);  // weights sum to 1.2

    m.weights = {0.5, 0.5};
    CHECK_NOTHROW(m.validate());

    m.components[1] = PoissonParams{2.0};  // family tag mismatch
    CHECK_THROWS_AS(m.validate(), InvalidParameterError);

    m.components[1] = Gaussian1DParams{1.0, -1.0};
    CHECK_THROWS_AS(m.validate(), InvalidParameterError);
}

TEST_CASE("sorted_by_location orders components and carries weights along") {
    MixtureModel m;
    m.family = Family::Poisson;
    m.weights = {0.2, 0.5, 0.3};
    m.components = {PoissonParams{9.0}, PoissonParams{1.0}, PoissonParams{4.0}};
    const MixtureModel s = sorted_by_location(m);
    CHECK(s.poisson(0).lambda == 1.0);
    CHECK(s.poisson(1).lambda == 4.0);
    CHECK(s.poisson(2).lambda == 9.0);
    CHECK(s.weights == std::vector<double>{0.5, 0.3, 0.2});
}
