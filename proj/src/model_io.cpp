#include "mixfit/model_io.hpp"

#include <fstream>
#include <json.hpp>

#include "mixfit/errors.hpp"

namespace mixfit {

using nlohmann::json;

FitMetadata make_metadata(const FitResult& fit, const FitConfig& config) {
    FitMetadata md;
    md.seed = config.seed;
    md.tol = config.tol;
    md.iters = fit.iters;
    md.converged = fit.converged;
    md.rng_algorithm = fit.rng_algorithm;
    md.final_log_likelihood = fit.final_log_likelihood;
    return md;
}

namespace {

json component_to_json(Family family, const ComponentParams& c) {
    json j;
    switch (family) {
        case Family::Gaussian1D: {
            const auto& p = std::get<Gaussian1DParams>(c);
            j["mu"] = p.mu;
            j["sigma2"] = p.sigma2;
            break;
        }
        case Family::MVN: {
            const auto& p = std::get<MVNParams>(c);
            j["mu"] = std::vector<double>(p.mu.data(), p.mu.data() + p.mu.size());
            json rows = json::array();
            for (Eigen::Index r = 0; r < p.sigma.rows(); ++r) {
                json row = json::array();
                for (Eigen::Index col = 0; col < p.sigma.cols(); ++col) row.push_back(p.sigma(r, col));
                rows.push_back(std::move(row));
            }
            j["sigma"] = std::move(rows);
            break;
        }
        case Family::Poisson:
            j["lambda"] = std::get<PoissonParams>(c).lambda;
            break;
    }
    return j;
}

ComponentParams component_from_json(Family family, const json& j) {
    switch (family) {
        case Family::Gaussian1D:
            return Gaussian1DParams{j.at("mu").get<double>(), j.at("sigma2").get<double>()};
        case Family::MVN: {
            const auto mu_vec = j.at("mu").get<std::vector<double>>();
            Eigen::VectorXd mu(static_cast<Eigen::Index>(mu_vec.size()));
            for (Eigen::Index i = 0; i < mu.size(); ++i) mu(i) = mu_vec[static_cast<std::size_t>(i)];
            const auto& rows = j.at("sigma");
            Eigen::MatrixXd sigma(mu.size(), mu.size());
            if (static_cast<Eigen::Index>(rows.size()) != mu.size())
                throw ParseError("sigma row count does not match mu length");
            for (Eigen::Index r = 0; r < mu.size(); ++r) {
                const auto& row = rows[static_cast<std::size_t>(r)];
                if (static_cast<Eigen::Index>(row.size()) != mu.size())
                    throw ParseError("sigma is not square");
                for (Eigen::Index c = 0; c < mu.size(); ++c)
                    sigma(r, c) = row[static_cast<std::size_t>(c)].get<double>();
            }
            return MVNParams{std::move(mu), std::move(sigma)};
        }
        case Family::Poisson:
            return PoissonParams{j.at("lambda").get<double>()};
    }
    throw ParseError("unknown family");
}

}  // namespace

std::string model_to_json(const MixtureModel& model, const FitMetadata& metadata) {
    model.validate();
    json j;
    j["family"] = family_name(model.family);
    j["k"] = model.k();
    j["weights"] = model.weights;
    json comps = json::array();
    for (const auto& c : model.components) comps.push_back(component_to_json(model.family, c));
    j["components"] = std::move(comps);
    j["metadata"] = {{"seed", metadata.seed},
                     {"tol", metadata.tol},
                     {"iters", metadata.iters},
                     {"converged", metadata.converged},
                     {"rng_algorithm", metadata.rng_algorithm},
                     {"final_log_likelihood", metadata.final_log_likelihood}};
    return j.dump(2) + "\n";
}

void write_model_file(const std::string& path, const MixtureModel& model,
                      const FitMetadata& metadata) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << model_to_json(model, metadata);
}

ModelFile read_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "' for reading");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        ModelFile out;
        out.model.family = family_from_name(j.at("family").get<std::string>());
        out.model.weights = j.at("weights").get<std::vector<double>>();
        for (const auto& c : j.at("components"))
            out.model.components.push_back(component_from_json(out.model.family, c));
        if (j.at("k").get<int>() != out.model.k())
            throw ParseError(path + ": k does not match the component count");
        const auto& md = j.at("metadata");
        out.metadata.seed = md.at("seed").get<std::uint64_t>();
        out.metadata.tol = md.at("tol").get<double>();
        out.metadata.iters = md.at("iters").get<int>();
        out.metadata.converged = md.at("converged").get<bool>();
        out.metadata.rng_algorithm = md.at("rng_algorithm").get<std::string>();
        out.metadata.final_log_likelihood = md.at("final_log_likelihood").get<double>();
        out.model.validate();
        return out;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::vector<std::string> trace_param_headers(const MixtureModel& model) {
    std::vector<std::string> h;
    const auto d = model.dim();
    for (int k = 1; k <= model.k(); ++k) {
        const std::string ks = std::to_string(k);
        h.push_back("w" + ks);
        switch (model.family) {
            case Family::Gaussian1D:
                h.push_back("mu" + ks);
                h.push_back("sigma2_" + ks);
                break;
            case Family::Poisson:
                h.push_back("lambda" + ks);
                break;
            case Family::MVN:
                for (Eigen::Index j = 1; j <= d; ++j)
                    h.push_back("mu" + ks + "_" + std::to_string(j));
                for (Eigen::Index r = 1; r <= d; ++r)
                    for (Eigen::Index c = 1; c <= d; ++c)
                        h.push_back("sigma" + ks + "_" + std::to_string(r) + "_" + std::to_string(c));
                break;
        }
    }
    return h;
}

std::vector<double> flatten_params(const MixtureModel& model) {
    std::vector<double> v;
    for (int k = 0; k < model.k(); ++k) {
        v.push_back(model.weights[static_cast<std::size_t>(k)]);
        switch (model.family) {
            case Family::Gaussian1D: {
                const auto& p = model.gaussian(k);
                v.push_back(p.mu);
                v.push_back(p.sigma2);
                break;
            }
            case Family::Poisson:
                v.push_back(model.poisson(k).lambda);
                break;
            case Family::MVN: {
                const auto& p = model.mvn(k);
                for (Eigen::Index j = 0; j < p.mu.size(); ++j) v.push_back(p.mu(j));
                for (Eigen::Index r = 0; r < p.sigma.rows(); ++r)
                    for (Eigen::Index c = 0; c < p.sigma.cols(); ++c) v.push_back(p.sigma(r, c));
                break;
            }
        }
    }
    return v;
}

}  // namespace mixfit
