#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixfit/distributions.hpp"
#include "mixfit/em.hpp"

namespace mixfit {

/// Fit provenance stored alongside the model in a model file.
struct FitMetadata {
    std::uint64_t seed = 0;
    double tol = 0.0;
    int iters = 0;
    bool converged = false;
    std::string rng_algorithm;
    double final_log_likelihood = 0.0;
};

FitMetadata make_metadata(const FitResult& fit, const FitConfig& config);

/// Canonical JSON form: keys sorted, numbers in shortest round-trip notation.
/// parse -> serialize is the identity on bytes.
std::string model_to_json(const MixtureModel& model, const FitMetadata& metadata);

void write_model_file(const std::string& path, const MixtureModel& model,
                      const FitMetadata& metadata);

struct ModelFile {
    MixtureModel model;
    FitMetadata metadata;
};

ModelFile read_model_file(const std::string& path);

/// Column names / values for one full parameter snapshot, used by the trace
/// CSV: per component the weight followed by that family's parameters.
std::vector<std::string> trace_param_headers(const MixtureModel& model);
std::vector<double> flatten_params(const MixtureModel& model);

}  // namespace mixfit
