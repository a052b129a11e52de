#pragma once

#include <string>
#include <vector>

#include "mixfit/dataset.hpp"
#include "mixfit/distributions.hpp"

namespace mixfit {

/// ComponentDensity labels by the largest unweighted component density;
/// PosteriorResponsibility folds the mixing weights in (argmax of the
/// responsibility). The two differ whenever weights are non-uniform.
enum class LabelRule { ComponentDensity, PosteriorResponsibility };

const char* label_rule_name(LabelRule rule);
LabelRule label_rule_from_name(const std::string& name);

struct LabelAssignment {
    std::vector<int> labels;  // one per data row, each in [0, K)
    LabelRule rule = LabelRule::ComponentDensity;
};

/// Assigns every observation the argmax component under `rule`; ties break to
/// the lowest component index.
LabelAssignment assign_labels(const Dataset& data, const MixtureModel& model,
                              LabelRule rule = LabelRule::ComponentDensity);

}  // namespace mixfit
