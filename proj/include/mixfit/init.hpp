#pragma once

#include <cstdint>

#include "mixfit/dataset.hpp"
#include "mixfit/distributions.hpp"
#include "mixfit/rng.hpp"

namespace mixfit {

struct InitRecipe {
    Family family = Family::Gaussian1D;
    int k = 1;
    std::uint64_t seed = 0;
};

/// Random starting models drawn from the data's extent. Deterministic:
/// identical (data, recipe) pairs yield bit-identical models. Draw order is
/// fixed — component parameters for k = 0..K-1 first, then K weight draws,
/// normalized to sum 1.
///
/// Per family:
///   Gaussian1D: mu ~ U(min, max), sigma ~ (sigma_floor, range/6]
///   MVN:        mu_j ~ U(min_j, max_j) per coordinate, then one u ~ U(0.5, 1);
///               Sigma = diag((range_j / 6)^2 * u^2)
///   Poisson:    lambda ~ U(max(min, lambda_floor), max)
MixtureModel init_gaussian1d(const Dataset& data, const InitRecipe& recipe);
MixtureModel init_mvn(const Dataset& data, const InitRecipe& recipe);
MixtureModel init_poisson(const Dataset& data, const InitRecipe& recipe);

/// Dispatch on recipe.family.
MixtureModel init_model(const Dataset& data, const InitRecipe& recipe);

/// One component drawn from the family's initialization distribution using an
/// already-running stream; the engine uses this to re-draw a degenerate
/// component mid-fit.
ComponentParams draw_component(const Dataset& data, Family family, SplitMix64& rng);

/// Whole model drawn from an already-running stream. init_model(data, recipe)
/// is exactly draw_model on a stream freshly seeded with recipe.seed.
MixtureModel draw_model(const Dataset& data, Family family, int k, SplitMix64& rng);

}  // namespace mixfit
