#include "mixfit/synth.hpp"

#include <cmath>

#include "mixfit/errors.hpp"
#include "mixfit/rng.hpp"

namespace mixfit {

namespace {

Eigen::Index spec_dim(const SynthSpec& spec) {
    if (spec.family != Family::MVN) return 1;
    return std::get<MVNParams>(spec.components.front().params).mu.size();
}

}  // namespace

Dataset synth_dataset(const SynthSpec& spec, std::vector<int>* labels) {
    if (spec.components.empty()) throw InvalidParameterError("synthesis needs at least one component");
    long long total = 0;
    for (const auto& c : spec.components) {
        if (c.size <= 0) throw InvalidParameterError("component sizes must be positive");
        total += c.size;
    }

    const Eigen::Index d = spec_dim(spec);
    Eigen::MatrixXd points(total, d);
    if (labels) {
        labels->clear();
        labels->reserve(static_cast<std::size_t>(total));
    }

    SplitMix64 rng(spec.seed);
    Eigen::Index row = 0;
    int comp_index = 0;
    for (const auto& c : spec.components) {
        switch (spec.family) {
            case Family::Gaussian1D: {
                const auto& p = std::get<Gaussian1DParams>(c.params);
                if (p.sigma2 <= 0.0) throw InvalidParameterError("sigma2 must be positive");
                const double sd = std::sqrt(p.sigma2);
                for (long long i = 0; i < c.size; ++i) points(row++, 0) = rng.normal(p.mu, sd);
                break;
            }
            case Family::MVN: {
                const auto& p = std::get<MVNParams>(c.params);
                if (p.mu.size() != d) throw DimensionMismatchError("components must share one dimension");
                const Eigen::MatrixXd chol =
                    Eigen::LLT<Eigen::MatrixXd>(regularize_to_pd(p.sigma)).matrixL();
                Eigen::VectorXd z(d);
                for (long long i = 0; i < c.size; ++i) {
                    for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.normal();
                    points.row(row++) = (p.mu + chol * z).transpose();
                }
                break;
            }
            case Family::Poisson: {
                const auto& p = std::get<PoissonParams>(c.params);
                if (p.lambda <= 0.0) throw InvalidParameterError("lambda must be positive");
                for (long long i = 0; i < c.size; ++i)
                    points(row++, 0) = static_cast<double>(rng.poisson(p.lambda));
                break;
            }
        }
        if (labels)
            labels->insert(labels->end(), static_cast<std::size_t>(c.size), comp_index);
        ++comp_index;
    }
    return Dataset::from_matrix(std::move(points));
}

SynthSpec paper_gaussian_spec(std::uint64_t seed) {
    SynthSpec spec;
    spec.family = Family::Gaussian1D;
    spec.seed = seed;
    spec.components = {
        {Gaussian1DParams{-10.0, 1.2 * 1.2}, 700},
        {Gaussian1DParams{0.0, 2.0 * 2.0}, 1000},
        {Gaussian1DParams{5.0, 5.0 * 5.0}, 500},
    };
    return spec;
}

const std::vector<std::pair<long long, long long>>& paper_poisson_table() {
    static const std::vector<std::pair<long long, long long>> table = {
        {0, 162}, {1, 267}, {2, 271}, {3, 185},  {4, 111},  {5, 61},   {6, 120},
        {7, 210}, {8, 215}, {9, 136}, {10, 73},  {11, 43},  {12, 14},  {13, 160},
        {14, 230}, {15, 243}, {16, 104}, {17, 36}, {18, 15}, {19, 10}, {20, 0},
    };
    return table;
}

Dataset paper_poisson_dataset() { return Dataset::from_value_counts(paper_poisson_table()); }

}  // namespace mixfit
