#include "mixfit/clustering.hpp"

#include <cmath>

#include "mixfit/detail/numeric.hpp"
#include "mixfit/errors.hpp"

namespace mixfit {

const char* label_rule_name(LabelRule rule) {
    return rule == LabelRule::ComponentDensity ? "density" : "posterior";
}

LabelRule label_rule_from_name(const std::string& name) {
    if (name == "density") return LabelRule::ComponentDensity;
    if (name == "posterior") return LabelRule::PosteriorResponsibility;
    throw ParseError("unknown label rule '" + name + "' (expected density or posterior)");
}

LabelAssignment assign_labels(const Dataset& data, const MixtureModel& model, LabelRule rule) {
    ComponentEvaluator eval(model, data);
    const int K = model.k();
    std::vector<double> score(static_cast<std::size_t>(K));
    std::vector<double> log_w(static_cast<std::size_t>(K), 0.0);
    if (rule == LabelRule::PosteriorResponsibility)
        for (int k = 0; k < K; ++k) {
            const double w = model.weights[static_cast<std::size_t>(k)];
            log_w[static_cast<std::size_t>(k)] = w > 0.0 ? std::log(w) : detail::kNegInf;
        }

    LabelAssignment out;
    out.rule = rule;
    out.labels.resize(static_cast<std::size_t>(data.rows()));
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        eval.log_densities(data, i, score);
        int best = 0;
        double best_score = score[0] + log_w[0];
        for (int k = 1; k < K; ++k) {
            const double s = score[static_cast<std::size_t>(k)] + log_w[static_cast<std::size_t>(k)];
            if (s > best_score) {
                best = k;
                best_score = s;
            }
        }
        out.labels[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

}  // namespace mixfit
