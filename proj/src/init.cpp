#include "mixfit/init.hpp"

#include <cmath>

#include "mixfit/errors.hpp"

namespace mixfit {

namespace {

std::vector<double> draw_weights(int k, SplitMix64& rng) {
    std::vector<double> w(static_cast<std::size_t>(k));
    double sum = 0.0;
    for (double& wi : w) {
        wi = rng.uniform01();
        sum += wi;
    }
    if (sum == 0.0) {  // all-zero draw; vanishing probability, keep the model valid
        for (double& wi : w) wi = 1.0 / static_cast<double>(k);
        return w;
    }
    for (double& wi : w) wi /= sum;
    return w;
}

MixtureModel assemble(Family family, const Dataset& data, int k, SplitMix64& rng) {
    if (k < 1) throw InvalidParameterError("initialization needs k >= 1");
    if (data.empty()) throw ZeroRangeError("cannot initialize from an empty dataset");
    MixtureModel m;
    m.family = family;
    m.components.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) m.components.push_back(draw_component(data, family, rng));
    m.weights = draw_weights(k, rng);
    return m;
}

}  // namespace

MixtureModel draw_model(const Dataset& data, Family family, int k, SplitMix64& rng) {
    return assemble(family, data, k, rng);
}

ComponentParams draw_component(const Dataset& data, Family family, SplitMix64& rng) {
    switch (family) {
        case Family::Gaussian1D: {
            if (data.dim() != 1)
                throw DimensionMismatchError("Gaussian1D initialization requires univariate data");
            const double lo = data.min_coord(0), hi = data.max_coord(0);
            const double range = hi - lo;
            if (range <= 0.0) throw ZeroRangeError("all observations identical; cannot place components");
            const double sigma_floor = std::sqrt(gaussian_variance_floor(data));
            const double mu = rng.uniform(lo, hi);
            const double sigma = rng.uniform_open_closed(sigma_floor, range / 6.0);
            return Gaussian1DParams{mu, sigma * sigma};
        }
        case Family::MVN: {
            const auto d = data.dim();
            Eigen::VectorXd mu(d);
            Eigen::VectorXd box_sd(d);
            for (Eigen::Index j = 0; j < d; ++j) {
                const double lo = data.min_coord(j), hi = data.max_coord(j);
                if (hi - lo <= 0.0)
                    throw ZeroRangeError("coordinate " + std::to_string(j) + " has zero range");
                mu(j) = rng.uniform(lo, hi);
                box_sd(j) = (hi - lo) / 6.0;
            }
            const double u = rng.uniform(0.5, 1.0);
            Eigen::MatrixXd sigma = (box_sd.array().square() * u * u).matrix().asDiagonal();
            return MVNParams{std::move(mu), std::move(sigma)};
        }
        case Family::Poisson: {
            if (data.dim() != 1)
                throw DimensionMismatchError("Poisson initialization requires univariate data");
            const double hi = data.max_coord(0);
            if (hi <= 0.0) throw ZeroRangeError("all counts are zero; cannot place components");
            const double lo = std::max(data.min_coord(0), kLambdaFloor);
            return PoissonParams{rng.uniform(lo, hi)};
        }
    }
    throw InvalidParameterError("unknown family");
}

MixtureModel init_gaussian1d(const Dataset& data, const InitRecipe& recipe) {
    SplitMix64 rng(recipe.seed);
    return draw_model(data, Family::Gaussian1D, recipe.k, rng);
}

MixtureModel init_mvn(const Dataset& data, const InitRecipe& recipe) {
    SplitMix64 rng(recipe.seed);
    return draw_model(data, Family::MVN, recipe.k, rng);
}

MixtureModel init_poisson(const Dataset& data, const InitRecipe& recipe) {
    SplitMix64 rng(recipe.seed);
    return draw_model(data, Family::Poisson, recipe.k, rng);
}

MixtureModel init_model(const Dataset& data, const InitRecipe& recipe) {
    SplitMix64 rng(recipe.seed);
    return draw_model(data, recipe.family, recipe.k, rng);
}

}  // namespace mixfit
