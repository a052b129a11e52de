#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mixfit/clustering.hpp"
#include "mixfit/csv.hpp"
#include "mixfit/em.hpp"
#include "mixfit/errors.hpp"
#include "mixfit/init.hpp"
#include "mixfit/model_io.hpp"
#include "mixfit/selfcheck.hpp"
#include "mixfit/synth.hpp"

namespace {

using namespace mixfit;

/// Non-zero process exit carried through the CLI11 callback machinery.
struct ExitWith {
    int code;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_real(const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw ParseError("trailing characters in number '" + s + "'");
        return v;
    } catch (const std::exception&) {
        throw ParseError("cannot parse '" + s + "' as a number");
    }
}

long long parse_int(const std::string& s) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw ParseError("trailing characters in integer '" + s + "'");
        return v;
    } catch (const std::exception&) {
        throw ParseError("cannot parse '" + s + "' as an integer");
    }
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

// ---- synth -------------------------------------------------------------------

struct SynthArgs {
    std::string preset;
    std::string family = "gaussian";
    std::vector<std::string> components;
    std::uint64_t seed = 0;
    std::string out;
    std::string labels_path;
};

SynthSpec parse_synth_components(Family family, const std::vector<std::string>& specs,
                                 std::uint64_t seed) {
    SynthSpec spec;
    spec.family = family;
    spec.seed = seed;
    for (const auto& s : specs) {
        const auto fields = split(s, ':');
        SynthComponent c;
        switch (family) {
            case Family::Gaussian1D: {
                if (fields.size() != 3)
                    throw ParseError("gaussian component spec is MU:SIGMA:SIZE, got '" + s + "'");
                const double sd = parse_real(fields[1]);
                if (sd <= 0.0) throw ParseError("sigma must be positive in '" + s + "'");
                c.params = Gaussian1DParams{parse_real(fields[0]), sd * sd};
                c.size = parse_int(fields[2]);
                break;
            }
            case Family::Poisson: {
                if (fields.size() != 2)
                    throw ParseError("poisson component spec is LAMBDA:SIZE, got '" + s + "'");
                const double lambda = parse_real(fields[0]);
                if (lambda <= 0.0) throw ParseError("lambda must be positive in '" + s + "'");
                c.params = PoissonParams{lambda};
                c.size = parse_int(fields[1]);
                break;
            }
            case Family::MVN: {
                if (fields.size() != 3)
                    throw ParseError("mvn component spec is MU1,..:SD1,..:SIZE, got '" + s + "'");
                const auto mus = split(fields[0], ',');
                const auto sds = split(fields[1], ',');
                if (mus.size() != sds.size() || mus.empty())
                    throw ParseError("mean and stddev lists must have equal length in '" + s + "'");
                Eigen::VectorXd mu(static_cast<Eigen::Index>(mus.size()));
                Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(mu.size(), mu.size());
                for (Eigen::Index j = 0; j < mu.size(); ++j) {
                    mu(j) = parse_real(mus[static_cast<std::size_t>(j)]);
                    const double sd = parse_real(sds[static_cast<std::size_t>(j)]);
                    if (sd <= 0.0) throw ParseError("stddev must be positive in '" + s + "'");
                    sigma(j, j) = sd * sd;
                }
                c.params = MVNParams{std::move(mu), std::move(sigma)};
                c.size = parse_int(fields[2]);
                break;
            }
        }
        if (c.size <= 0) throw ParseError("component size must be positive in '" + s + "'");
        spec.components.push_back(std::move(c));
    }
    if (spec.components.empty()) throw ParseError("no components given (use --component or --preset)");
    return spec;
}

void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
    auto out = open_out(path);
    out << "index,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

void run_synth(const SynthArgs& args) {
    if (args.preset == "paper-poisson") {
        if (!args.labels_path.empty())
            throw ParseError("the paper-poisson preset is a fixed frequency table; no labels exist");
        write_freq_table(args.out, paper_poisson_table());
        std::cout << "wrote " << args.out << " (frequency table, n=2666)\n";
        return;
    }

    SynthSpec spec;
    if (args.preset == "paper-gaussian") {
        spec = paper_gaussian_spec(args.seed);
    } else if (args.preset.empty()) {
        spec = parse_synth_components(family_from_name(args.family), args.components, args.seed);
    } else {
        throw ParseError("unknown preset '" + args.preset +
                         "' (expected paper-gaussian or paper-poisson)");
    }

    std::vector<int> labels;
    const Dataset data = synth_dataset(spec, args.labels_path.empty() ? nullptr : &labels);
    write_raw_csv(args.out, data.points());
    if (!args.labels_path.empty()) write_labels_csv(args.labels_path, labels);
    std::cout << "wrote " << args.out << " (n=" << data.rows() << ")\n";
}

// ---- fit ---------------------------------------------------------------------

struct FitArgs {
    std::string data_path;
    std::string format = "raw";
    std::string family = "gaussian";
    int k = 1;
    double tol = 1e-8;
    int max_iters = 1000;
    int restarts = 10;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string degenerate = "reinit";
    std::string trace_path;
    std::string out;
    bool baseline_mle = false;
    bool no_sort = false;
};

std::string derived_mle_path(const std::string& out) {
    const std::size_t dot = out.rfind('.');
    if (dot == std::string::npos || out.find('/', dot) != std::string::npos) return out + ".mle";
    return out.substr(0, dot) + ".mle" + out.substr(dot);
}

void write_trace_csv(const std::string& path, const FitResult& fit) {
    auto out = open_out(path);
    out << "iter,loglik";
    for (const auto& h : trace_param_headers(fit.model)) out << ',' << h;
    out << '\n';
    for (const auto& entry : fit.trace) {
        out << entry.iter << ',' << format_double(entry.log_likelihood);
        for (double v : flatten_params(entry.model)) out << ',' << format_double(v);
        out << '\n';
    }
}

void print_model_summary(const MixtureModel& m) {
    for (int k = 0; k < m.k(); ++k) {
        std::cout << "  component " << (k + 1) << ": w=" << fmt4(m.weights[static_cast<std::size_t>(k)]);
        switch (m.family) {
            case Family::Gaussian1D:
                std::cout << " mu=" << fmt4(m.gaussian(k).mu) << " sigma2=" << fmt4(m.gaussian(k).sigma2);
                break;
            case Family::Poisson:
                std::cout << " lambda=" << fmt4(m.poisson(k).lambda);
                break;
            case Family::MVN: {
                std::cout << " mu=(";
                const auto& mu = m.mvn(k).mu;
                for (Eigen::Index j = 0; j < mu.size(); ++j)
                    std::cout << (j ? "," : "") << fmt4(mu(j));
                std::cout << ")";
                break;
            }
        }
        std::cout << '\n';
    }
}

void run_fit(const FitArgs& args) {
    const Dataset data = read_data_file(args.data_path, data_format_from_name(args.format));

    FitConfig cfg;
    cfg.family = family_from_name(args.family);
    cfg.k = args.k;
    cfg.tol = args.tol;
    cfg.max_iters = args.max_iters;
    cfg.restarts = args.restarts;
    cfg.seed = args.seed;
    cfg.threads = args.threads;
    cfg.degenerate_policy =
        args.degenerate == "error" ? DegeneratePolicy::Error : DegeneratePolicy::Reinit;
    if (args.degenerate != "error" && args.degenerate != "reinit")
        throw ParseError("unknown degenerate policy '" + args.degenerate + "'");

    const FitResult fit = em_fit(data, cfg);
    for (const auto& w : fit.warnings) std::cerr << "warning: " << w << '\n';

    const MixtureModel out_model = args.no_sort ? fit.model : sorted_by_location(fit.model);
    write_model_file(args.out, out_model, make_metadata(fit, cfg));
    if (!args.trace_path.empty()) write_trace_csv(args.trace_path, fit);

    if (args.baseline_mle) {
        const MixtureModel mle = mle_single(data, cfg.family);
        FitMetadata md;
        md.seed = cfg.seed;
        md.tol = cfg.tol;
        md.iters = 0;
        md.converged = true;
        md.rng_algorithm = "none";
        md.final_log_likelihood = log_likelihood(data, mle);
        write_model_file(derived_mle_path(args.out), mle, md);
    }

    std::cout << "family=" << family_name(cfg.family) << " k=" << cfg.k
              << " loglik=" << fmt4(fit.final_log_likelihood)
              << " converged=" << (fit.converged ? "yes" : "no") << " iters=" << fit.iters
              << " best_of=" << fit.best_of << '\n';
    print_model_summary(out_model);
}

// ---- cluster -----------------------------------------------------------------

struct ClusterArgs {
    std::string data_path;
    std::string model_path;
    std::string format = "raw";
    std::string rule = "density";
    std::string out;
};

void run_cluster(const ClusterArgs& args) {
    const Dataset data = read_data_file(args.data_path, data_format_from_name(args.format));
    const ModelFile mf = read_model_file(args.model_path);
    const LabelAssignment labels =
        assign_labels(data, mf.model, label_rule_from_name(args.rule));
    write_labels_csv(args.out, labels.labels);
    std::cout << "wrote " << args.out << " (" << labels.labels.size() << " labels)\n";
}

// ---- eval --------------------------------------------------------------------

struct EvalArgs {
    std::string model_path;
    std::string grid;
    std::string points_path;
    std::string out;
};

Eigen::MatrixXd eval_points(const EvalArgs& args, const MixtureModel& model) {
    if (args.grid.empty() == args.points_path.empty())
        throw ParseError("give exactly one of --grid or --points");
    if (!args.points_path.empty()) {
        const Dataset pts = read_raw_csv(args.points_path);
        if (model.family == Family::Poisson && !pts.nonneg_integers())
            throw ParseError("Poisson evaluation points must be non-negative integers");
        if (pts.dim() != model.dim())
            throw DimensionMismatchError("evaluation points do not match the model dimension");
        return pts.points();
    }

    const auto fields = split(args.grid, ':');
    if (model.family == Family::Poisson) {
        if (fields.size() != 2 && fields.size() != 3)
            throw ParseError("Poisson grid is MIN:MAX (integers, unit step)");
        const long long lo = parse_int(fields[0]);
        const long long hi = parse_int(fields[1]);
        if (lo < 0 || hi < lo) throw ParseError("need 0 <= MIN <= MAX for a Poisson grid");
        if (fields.size() == 3 && parse_int(fields[2]) != hi - lo)
            throw ParseError("a Poisson grid has unit steps; STEPS must equal MAX-MIN");
        Eigen::MatrixXd pts(hi - lo + 1, 1);
        for (long long x = lo; x <= hi; ++x) pts(x - lo, 0) = static_cast<double>(x);
        return pts;
    }
    if (model.dim() != 1)
        throw ParseError("--grid is univariate; use --points for multivariate models");
    if (fields.size() != 3) throw ParseError("grid is MIN:MAX:STEPS");
    const double lo = parse_real(fields[0]);
    const double hi = parse_real(fields[1]);
    const long long steps = parse_int(fields[2]);
    if (!(hi > lo) || steps < 1) throw ParseError("need MIN < MAX and STEPS >= 1");
    Eigen::MatrixXd pts(steps + 1, 1);
    for (long long i = 0; i <= steps; ++i)
        pts(i, 0) = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps);
    return pts;
}

void run_eval(const EvalArgs& args) {
    const ModelFile mf = read_model_file(args.model_path);
    const MixtureModel& model = mf.model;
    const Eigen::MatrixXd pts = eval_points(args, model);
    const Dataset grid = Dataset::from_matrix(pts);
    const ComponentEvaluator eval(model, grid);

    auto out = open_out(args.out);
    if (pts.cols() == 1) {
        out << "x";
    } else {
        for (Eigen::Index j = 1; j <= pts.cols(); ++j) out << (j > 1 ? "," : "") << "x_" << j;
    }
    for (int k = 1; k <= model.k(); ++k) out << ",component_" << k;
    out << ",mixture\n";

    std::vector<double> logdens(static_cast<std::size_t>(model.k()));
    for (Eigen::Index i = 0; i < grid.rows(); ++i) {
        for (Eigen::Index j = 0; j < pts.cols(); ++j)
            out << (j ? "," : "") << format_double(pts(i, j));
        eval.log_densities(grid, i, logdens);
        double mixture = 0.0;
        for (int k = 0; k < model.k(); ++k) {
            const double wk = model.weights[static_cast<std::size_t>(k)];
            const double v = wk * std::exp(logdens[static_cast<std::size_t>(k)]);
            mixture += v;
            out << ',' << format_double(v);
        }
        out << ',' << format_double(mixture) << '\n';
    }
    std::cout << "wrote " << args.out << " (" << grid.rows() << " points)\n";
}

// ---- selfcheck ---------------------------------------------------------------

int run_selfcheck_cmd(const std::string& inject_fault) {
    SelfCheckOptions opts;
    if (inject_fault == "table1") {
        opts.corrupt_count_table = true;
    } else if (!inject_fault.empty()) {
        throw ParseError("unknown fault '" + inject_fault + "' (expected table1)");
    }
    bool all_pass = true;
    for (const auto& check : run_selfcheck(opts)) {
        std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name;
        if (!check.pass && !check.detail.empty()) std::cout << ": " << check.detail;
        std::cout << '\n';
        all_pass = all_pass && check.pass;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixfit: fit finite mixture distributions (Gaussian, multivariate Gaussian, "
                 "Poisson) to data via expectation-maximization"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "generate synthetic data");
    synth->add_option("--preset", synth_args.preset,
                      "built-in dataset: paper-gaussian or paper-poisson");
    synth->add_option("--family", synth_args.family, "component family for --component specs");
    synth->add_option("--component", synth_args.components,
                      "gaussian MU:SIGMA:SIZE | poisson LAMBDA:SIZE | mvn MU1,..:SD1,..:SIZE");
    synth->add_option("--seed", synth_args.seed, "RNG seed");
    synth->add_option("--out", synth_args.out, "output data file")->required();
    synth->add_option("--labels", synth_args.labels_path, "also write generating labels CSV");

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "fit a mixture model by EM");
    fit->add_option("data", fit_args.data_path, "input data file")->required();
    fit->add_option("--format", fit_args.format, "raw (default) or freq");
    fit->add_option("--family", fit_args.family, "gaussian | mvn | poisson")->required();
    fit->add_option("--k", fit_args.k, "number of components")->required()
        ->check(CLI::PositiveNumber);
    fit->add_option("--tol", fit_args.tol, "relative log-likelihood stopping tolerance")
        ->check(CLI::PositiveNumber);
    fit->add_option("--max-iters", fit_args.max_iters, "iteration cap per restart")
        ->check(CLI::PositiveNumber);
    fit->add_option("--restarts", fit_args.restarts, "independent random restarts")
        ->check(CLI::PositiveNumber);
    fit->add_option("--seed", fit_args.seed, "RNG seed; restart r uses substream(seed, r)");
    fit->add_option("--threads", fit_args.threads, "parallel restart workers (1 = reference mode)")
        ->check(CLI::PositiveNumber);
    fit->add_option("--degenerate-policy", fit_args.degenerate, "reinit (default) or error");
    fit->add_option("--trace", fit_args.trace_path, "write per-iteration trace CSV");
    fit->add_option("--out", fit_args.out, "output model file")->required();
    fit->add_flag("--baseline-mle", fit_args.baseline_mle,
                  "also write the one-component MLE model next to --out");
    fit->add_flag("--no-sort", fit_args.no_sort, "keep components in fit order");

    ClusterArgs cluster_args;
    auto* cluster = app.add_subcommand("cluster", "label observations with a fitted model");
    cluster->add_option("data", cluster_args.data_path, "input data file")->required();
    cluster->add_option("model", cluster_args.model_path, "model file from `fit`")->required();
    cluster->add_option("--format", cluster_args.format, "raw (default) or freq");
    cluster->add_option("--rule", cluster_args.rule, "density (default) or posterior");
    cluster->add_option("--out", cluster_args.out, "output labels CSV")->required();

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "tabulate weighted component and mixture densities");
    eval->add_option("model", eval_args.model_path, "model file")->required();
    eval->add_option("--grid", eval_args.grid, "MIN:MAX:STEPS (MIN:MAX for poisson)");
    eval->add_option("--points", eval_args.points_path, "evaluate at points from a CSV file");
    eval->add_option("--out", eval_args.out, "output CSV")->required();

    std::string inject_fault;
    auto* selfcheck = app.add_subcommand("selfcheck", "run the embedded oracle suite");
    selfcheck->add_option("--inject-fault", inject_fault, "testing hook (table1)");

    int exit_code = 0;
    synth->callback([&] { run_synth(synth_args); });
    fit->callback([&] { run_fit(fit_args); });
    cluster->callback([&] { run_cluster(cluster_args); });
    eval->callback([&] { run_eval(eval_args); });
    selfcheck->callback([&] { exit_code = run_selfcheck_cmd(inject_fault); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DimensionMismatchError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return exit_code;
}
