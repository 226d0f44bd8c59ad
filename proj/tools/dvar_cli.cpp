// dvar: command-line front end for the directional VaR library.
//
// Exit codes: 0 success, 1 a property suite ran and failed, 2 bad input or
// an unsolvable problem, 3 internal error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dvar/copula.hpp"
#include "dvar/errors.hpp"
#include "dvar/estimator.hpp"
#include "dvar/geometry.hpp"
#include "dvar/io.hpp"
#include "dvar/properties.hpp"
#include "dvar/simulate.hpp"

namespace {

using dvar::Json;

template <class T>
std::optional<T> given(const CLI::Option* o, const T& v) {
    return o->count() ? std::optional<T>(v) : std::nullopt;
}

// A value may come from a flag, from the config file, or from the default.
// Flag and config must agree when both are present.
template <class T>
T pick(const char* key, const std::optional<T>& flag, const std::optional<T>& config,
       const T& fallback) {
    if (flag && config && !(*flag == *config))
        throw dvar::DomainError(std::string("--") + key + " conflicts with the config file");
    if (flag) return *flag;
    if (config) return *config;
    return fallback;
}

template <class T>
T require(const char* key, const std::optional<T>& flag, const std::optional<T>& config) {
    if (!flag && !config) throw dvar::DomainError(std::string("--") + key + " is required");
    return pick(key, flag, config, flag ? *flag : *config);
}

Json real_array(std::span<const double> v) {
    Json a = Json::array();
    for (double x : v) a.push_back(dvar::round12(x));
    return a;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw dvar::DomainError("cannot write '" + out_path + "'");
    f << text;
}

std::string csv_comments(const Json& config) {
    std::string out;
    for (const auto& [k, v] : config.items())
        out += "# " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    return out;
}

std::string document(const char* command, const Json& config, const Json& result) {
    Json doc;
    doc["command"] = command;
    doc["config"] = config;
    doc["result"] = result;
    return doc.dump(2) + "\n";
}

// Options shared by the subcommands that read a sample file.
struct InputOpts {
    std::string path;
    char delimiter = ',';
    bool header = false;
    CLI::Option* header_opt = nullptr;

    void attach(CLI::App* sub) {
        sub->add_option("input", path, "CSV file, one observation per row")->required();
        sub->add_option("--delimiter", delimiter, "Cell delimiter");
        header_opt = sub->add_flag("--header,!--no-header", header,
                                   "First line is (not) a header; detected when omitted");
    }
    dvar::Sample load() const {
        dvar::DatasetFile f{path, delimiter, std::nullopt};
        if (header_opt->count()) f.has_header = header;
        return dvar::read_sample(f);
    }
};

struct CommonOpts {
    std::string config_path;
    std::string format = "json";
    std::string out;
    CLI::Option* format_opt = nullptr;

    void attach(CLI::App* sub, bool with_format = true) {
        sub->add_option("--config", config_path, "key=value run configuration");
        if (with_format)
            format_opt = sub->add_option("--format", format, "json or csv")
                             ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", out, "Write to this file instead of standard output");
    }
    dvar::RunConfig config() const {
        return config_path.empty() ? dvar::RunConfig{} : dvar::load_run_config(config_path);
    }
};

// ---- var ------------------------------------------------------------------

struct VarCmd {
    InputOpts in;
    CommonOpts common;
    std::string direction = "e";
    double alpha = 0.1;
    std::string method = "ray";
    double h = 0.0;
    double tol = 1e-4;
    CLI::Option *o_dir, *o_alpha, *o_method, *o_h, *o_tol;

    void attach(CLI::App* sub) {
        in.attach(sub);
        common.attach(sub);
        o_dir = sub->add_option("--direction", direction, "e, -e, weights:w1,..,wn or u1,..,un");
        o_alpha = sub->add_option("--alpha", alpha, "Orthant probability level");
        o_method = sub->add_option("--method", method, "ray or band");
        o_h = sub->add_option("--h", h, "Band half-width (band method)");
        o_tol = sub->add_option("--tol", tol, "Bisection tolerance (ray method)");
    }

    int run() const {
        const dvar::RunConfig c = common.config();
        const auto dir_flag = o_dir->count() ? std::optional(dvar::DirectionSpec::parse(direction))
                                             : std::nullopt;
        const auto dir = pick("direction", dir_flag, c.direction, dvar::DirectionSpec{});
        const std::string meth = pick("method", given(o_method, method), c.method, std::string("ray"));
        if (meth != "ray" && meth != "band") throw dvar::DomainError("unknown method '" + meth + "'");
        const bool band = meth == "band";
        const auto h_val = given(o_h, h);
        const auto tol_val = given(o_tol, tol);
        if (band && tol_val) throw dvar::DomainError("--tol applies to the ray method only");
        if (!band && h_val) throw dvar::DomainError("--h applies to the band method only");

        const dvar::Sample s = in.load();
        dvar::EstimatorConfig cfg;
        cfg.alpha = pick("alpha", given(o_alpha, alpha), c.alpha, 0.1);
        if (band) cfg.slack_h = pick("h", h_val, c.slack_h, dvar::default_slack(s.size()));
        cfg.ray_tol = pick("tol", tol_val, c.ray_tol, 1e-4);
        const dvar::Direction u = dir.resolve(s.dim());
        const auto est = dvar::estimate(s, dvar::rotation_frame(u), cfg,
                                        band ? dvar::Method::band : dvar::Method::ray);

        Json config;
        config["input"] = in.path;
        config["m"] = s.size();
        config["n"] = s.dim();
        config["direction"] = dir.to_string();
        config["u"] = real_array(u.coords());
        config["alpha"] = dvar::round12(cfg.alpha);
        config["method"] = meth;
        if (band)
            config["slack_h"] = dvar::round12(*cfg.slack_h);
        else
            config["ray_tol"] = dvar::round12(cfg.ray_tol);
        const auto fmt = dvar::parse_format(common.format);
        if (fmt == dvar::Format::json)
            emit(document("var", config, dvar::to_json(est)), common.out);
        else
            emit(csv_comments(config) + dvar::write_result(est, fmt), common.out);
        return 0;
    }
};

// ---- copula-var -------------------------------------------------------------

struct CopulaCmd {
    CommonOpts common;
    std::string family = "clayton";
    double beta = 1.0;
    int n = 2;
    double alpha = 0.1;
    std::string which;
    CLI::Option *o_family, *o_beta, *o_n, *o_alpha, *o_which;

    void attach(CLI::App* sub) {
        common.attach(sub);
        o_family = sub->add_option("--family", family, "clayton, frank or independence");
        o_beta = sub->add_option("--beta", beta, "Dependence parameter");
        o_n = sub->add_option("--n", n, "Dimension")->check(CLI::PositiveNumber);
        o_alpha = sub->add_option("--alpha", alpha, "Level");
        o_which = sub->add_option("--which", which,
                                  "lower, upper, directional_X, directional_1mX, bernardino_X, "
                                  "bernardino_1mX; all when omitted");
    }

    int run() const {
        const dvar::RunConfig c = common.config();
        const auto fam = dvar::parse_family(pick("family", given(o_family, family), c.family,
                                                 std::string("clayton")));
        const double b = fam == dvar::CopulaFamily::independence
                             ? pick("beta", given(o_beta, beta), c.beta, 0.0)
                             : require("beta", given(o_beta, beta), c.beta);
        const int dim = pick("n", given(o_n, n), c.n, 2);
        const double a = pick("alpha", given(o_alpha, alpha), c.alpha, 0.1);
        const std::string col = pick("which", given(o_which, which), c.which, std::string());
        const dvar::ArchimedeanModel model(fam, b);
        const bool clayton = fam == dvar::CopulaFamily::clayton;

        dvar::ScalarTable table;
        Json omitted = Json::array();
        auto add = [&](const std::string& name) {
            if (name == "lower") {
                table.add(name, dvar::archimedean_var_lower(model, dim, a));
            } else if (name == "upper") {
                table.add(name, dvar::archimedean_var_upper(model, dim, a));
            } else {
                const auto which_col = dvar::parse_clayton_column(name);
                if (!clayton)
                    throw dvar::Unsupported("column '" + name + "' exists for the Clayton family only");
                table.add(name, dvar::clayton_table(b, a, dim, which_col));
            }
        };
        if (!col.empty()) {
            add(col);
        } else {
            add("lower");
            add("upper");
            if (clayton) {
                add("directional_X");
                add("directional_1mX");
                if (dim == 2 && b != 1.0) {
                    add("bernardino_X");
                    add("bernardino_1mX");
                } else {
                    omitted.push_back("bernardino_X");
                    omitted.push_back("bernardino_1mX");
                }
            }
        }

        Json config;
        config["family"] = dvar::to_string(fam);
        config["beta"] = dvar::round12(b);
        config["n"] = dim;
        config["alpha"] = dvar::round12(a);
        if (!col.empty()) config["which"] = col;
        if (!omitted.empty()) config["omitted"] = omitted;
        const auto fmt = dvar::parse_format(common.format);
        if (fmt == dvar::Format::json)
            emit(document("copula-var", config, dvar::to_json(table)), common.out);
        else
            emit(csv_comments(config) + dvar::write_result(table, fmt), common.out);
        return 0;
    }
};

// ---- bivar-var --------------------------------------------------------------

struct BivarCmd {
    CommonOpts common;
    std::string family = "independence";
    double beta = 0.0;
    double theta = std::numbers::pi / 4.0;
    double alpha = 0.1;
    double tol = 1e-4;
    std::string scheme = "polygon";
    std::size_t nodes = 0;
    CLI::Option *o_family, *o_beta, *o_theta, *o_alpha, *o_tol;

    void attach(CLI::App* sub) {
        common.attach(sub);
        o_family = sub->add_option("--family", family, "independence or frank");
        o_beta = sub->add_option("--beta", beta, "Frank parameter");
        o_theta = sub->add_option("--theta", theta, "Direction angle in radians");
        o_alpha = sub->add_option("--alpha", alpha, "Orthant probability level");
        o_tol = sub->add_option("--tol", tol, "Bisection tolerance");
        sub->add_option("--scheme", scheme, "polygon or tensor")
            ->check(CLI::IsMember({"polygon", "tensor"}));
        sub->add_option("--nodes", nodes, "Nodes per axis (per triangle for polygon)");
    }

    int run() const {
        const dvar::RunConfig c = common.config();
        const auto fam = dvar::parse_family(pick("family", given(o_family, family), c.family,
                                                 std::string("independence")));
        dvar::BivariateDirectionalProblem p;
        double b = 0.0;
        if (fam == dvar::CopulaFamily::frank) {
            b = require("beta", given(o_beta, beta), c.beta);
            if (b == 0.0) throw dvar::DomainError("Frank requires beta != 0");
            p.density = dvar::frank_density_fn(b);
        } else if (fam == dvar::CopulaFamily::independence) {
            p.density = dvar::independence_density();
        } else {
            throw dvar::Unsupported("bivar-var supports the independence and frank densities");
        }
        p.theta = pick("theta", given(o_theta, theta), c.theta, std::numbers::pi / 4.0);
        p.alpha = pick("alpha", given(o_alpha, alpha), c.alpha, 0.1);
        p.tol = pick("tol", given(o_tol, tol), c.ray_tol, 1e-4);
        p.scheme = scheme == "tensor" ? dvar::QuadratureScheme::masked_tensor
                                      : dvar::QuadratureScheme::polygon;
        if (nodes) (scheme == "tensor" ? p.tensor_nodes : p.panel_nodes) = nodes;
        const auto r = dvar::bivariate_directional_var(p);

        Json config;
        config["family"] = dvar::to_string(fam);
        if (fam == dvar::CopulaFamily::frank) config["beta"] = dvar::round12(b);
        config["theta"] = dvar::round12(p.theta);
        config["alpha"] = dvar::round12(p.alpha);
        config["tol"] = dvar::round12(p.tol);
        config["scheme"] = scheme;
        config["nodes"] = scheme == "tensor" ? p.tensor_nodes : p.panel_nodes;
        dvar::ScalarTable t;
        t.add("x1", r.point[0]);
        t.add("x2", r.point[1]);
        t.add("lambda", r.lambda);
        t.add("achieved_prob", r.achieved_prob);
        const auto fmt = dvar::parse_format(common.format);
        if (fmt == dvar::Format::json) {
            Json res;
            res["point"] = real_array(r.point);
            res["lambda"] = dvar::round12(r.lambda);
            res["achieved_prob"] = dvar::round12(r.achieved_prob);
            res["direction"] = real_array(dvar::Direction::from_angle(p.theta).coords());
            emit(document("bivar-var", config, res), common.out);
        } else {
            emit(csv_comments(config) + dvar::write_result(t, fmt), common.out);
        }
        return 0;
    }
};

// ---- bound ------------------------------------------------------------------

struct BoundCmd {
    InputOpts in;
    CommonOpts common;
    std::string weights;
    double alpha = 0.1;
    double tol = 1e-4;
    CLI::Option *o_weights, *o_alpha, *o_tol;

    void attach(CLI::App* sub) {
        in.attach(sub);
        common.attach(sub, false);
        o_weights = sub->add_option("--weights", weights, "Portfolio weights w1,..,wn");
        o_alpha = sub->add_option("--alpha", alpha, "Level");
        o_tol = sub->add_option("--tol", tol, "Bisection tolerance");
    }

    int run() const {
        const dvar::RunConfig c = common.config();
        std::optional<dvar::DirectionSpec> from_flag;
        if (o_weights->count()) {
            dvar::DirectionSpec d;
            d.kind = dvar::DirectionSpec::Kind::weights;
            d.values = dvar::parse_real_list(weights);
            from_flag = d;
        }
        const auto spec = require("weights", from_flag, c.direction);
        if (spec.kind != dvar::DirectionSpec::Kind::weights)
            throw dvar::DomainError("bound needs portfolio weights (direction=weights:w1,..,wn)");
        const dvar::Sample s = in.load();
        dvar::EstimatorConfig cfg;
        cfg.alpha = pick("alpha", given(o_alpha, alpha), c.alpha, 0.1);
        cfg.ray_tol = pick("tol", given(o_tol, tol), c.ray_tol, 1e-4);
        const auto pb = dvar::portfolio_bound(s, spec.values, cfg.alpha, cfg);

        Json config;
        config["input"] = in.path;
        config["m"] = s.size();
        config["n"] = s.dim();
        config["weights"] = real_array(spec.values);
        config["u"] = real_array(spec.resolve(s.dim(), true).coords());
        config["alpha"] = dvar::round12(cfg.alpha);
        config["ray_tol"] = dvar::round12(cfg.ray_tol);
        Json res;
        res["bound"] = dvar::round12(pb.bound);
        res["var_z"] = dvar::round12(pb.var_z);
        res["gap"] = dvar::round12(pb.gap);
        res["holds"] = pb.bound >= pb.var_z - pb.gap;
        res["estimate"] = dvar::to_json(pb.estimate);
        emit(document("bound", config, res), common.out);
        return 0;
    }
};

// ---- upper-lower ------------------------------------------------------------

struct UpperLowerCmd {
    InputOpts in;
    CommonOpts common;
    std::string direction = "e";
    double alpha = 0.1;
    double tol = 1e-4;
    CLI::Option *o_dir, *o_alpha, *o_tol;

    void attach(CLI::App* sub) {
        in.attach(sub);
        common.attach(sub, false);
        o_dir = sub->add_option("--direction", direction, "e, -e, weights:w1,..,wn or u1,..,un");
        o_alpha = sub->add_option("--alpha", alpha, "Level of the upper VaR");
        o_tol = sub->add_option("--tol", tol, "Bisection tolerance");
    }

    int run() const {
        const dvar::RunConfig c = common.config();
        const auto dir_flag = o_dir->count() ? std::optional(dvar::DirectionSpec::parse(direction))
                                             : std::nullopt;
        const auto dir = pick("direction", dir_flag, c.direction, dvar::DirectionSpec{});
        const dvar::Sample s = in.load();
        dvar::EstimatorConfig cfg;
        cfg.alpha = pick("alpha", given(o_alpha, alpha), c.alpha, 0.1);
        cfg.ray_tol = pick("tol", given(o_tol, tol), c.ray_tol, 1e-4);
        const dvar::Direction u = dir.resolve(s.dim());
        const auto frame = dvar::rotation_frame(u);
        const auto ul = dvar::upper_lower_var(s, frame, cfg);

        Json config;
        config["input"] = in.path;
        config["m"] = s.size();
        config["n"] = s.dim();
        config["direction"] = dir.to_string();
        config["u"] = real_array(u.coords());
        config["alpha"] = dvar::round12(cfg.alpha);
        config["ray_tol"] = dvar::round12(cfg.ray_tol);
        Json res;
        res["upper"] = dvar::to_json(ul.upper);
        res["lower"] = dvar::to_json(ul.lower);
        res["order"] = dvar::to_string(dvar::dir_compare(ul.upper.point, ul.lower.point, frame));
        emit(document("upper-lower", config, res), common.out);
        return 0;
    }
};

// ---- robustness -------------------------------------------------------------

struct RobustnessCmd {
    CommonOpts common;
    std::string scenario;
    std::string omegas;
    std::size_t m = 5000;
    std::size_t reps = 100;
    std::uint64_t seed = 1;
    double alpha = 0.1;
    double h = 0.0;
    std::string delta_mu;
    CLI::Option *o_scenario, *o_omegas, *o_m, *o_reps, *o_seed, *o_alpha, *o_h;

    void attach(CLI::App* sub) {
        common.attach(sub);
        common.format = "csv";
        o_scenario = sub->add_option("--scenario", scenario,
                                     "variance, covariance, mean-x1, mean-x2, mean-both, joint");
        o_omegas = sub->add_option("--omegas", omegas, "Contamination levels w1,..,wk");
        o_m = sub->add_option("--m", m, "Observations per draw")->check(CLI::PositiveNumber);
        o_reps = sub->add_option("--reps", reps, "Replications")->check(CLI::PositiveNumber);
        o_seed = sub->add_option("--seed", seed, "Master seed");
        o_alpha = sub->add_option("--alpha", alpha, "Level");
        o_h = sub->add_option("--h", h, "Benchmark band half-width");
        sub->add_option("--delta-mu", delta_mu, "Override the mean shift d1,d2");
    }

    int run() const {
        const dvar::RunConfig c = common.config();
        const std::string name = require("scenario", given(o_scenario, scenario), c.scenario);
        dvar::ContaminationScenario sc = dvar::named_scenario(name);
        if (!delta_mu.empty()) sc.delta_mu = dvar::parse_real_list(delta_mu);
        dvar::RobustnessOptions opts;
        const auto omega_flag =
            o_omegas->count() ? std::optional(dvar::parse_real_list(omegas)) : std::nullopt;
        opts.omegas = pick("omegas", omega_flag, c.omegas, opts.omegas);
        opts.m = pick("m", given(o_m, m), c.m, opts.m);
        opts.replications = pick("reps", given(o_reps, reps), c.replications, opts.replications);
        opts.seed = pick("seed", given(o_seed, seed), c.seed, opts.seed);
        opts.alpha = pick("alpha", given(o_alpha, alpha), c.alpha, opts.alpha);
        if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) throw dvar::DomainError("alpha must lie in (0,1)");
        const auto h_val = pick("h", given(o_h, h), c.slack_h, -1.0);
        if (o_h->count() || c.slack_h) {
            if (!(h_val >= 0.0)) throw dvar::DomainError("--h must be nonnegative");
            opts.slack_h = h_val;
        }
        const auto rep = dvar::run_robustness(sc, opts);

        const auto fmt = dvar::parse_format(common.format);
        if (fmt == dvar::Format::csv) {
            std::string head = "# command=robustness\n# delta_mu=";
            head += dvar::format_real(sc.delta_mu[0]) + "," + dvar::format_real(sc.delta_mu[1]) + "\n";
            emit(head + dvar::write_result(rep, fmt), common.out);
        } else {
            Json config;
            config["scenario"] = name;
            config["delta_mu"] = real_array(sc.delta_mu);
            config["omegas"] = real_array(opts.omegas);
            config["m"] = opts.m;
            config["replications"] = opts.replications;
            config["seed"] = opts.seed;
            config["alpha"] = dvar::round12(opts.alpha);
            config["slack_h"] = dvar::round12(rep.slack_h);
            emit(document("robustness", config, dvar::to_json(rep)), common.out);
        }
        return 0;
    }
};

// ---- sample -----------------------------------------------------------------

struct SampleCmd {
    std::string out;
    std::string dist;
    double beta = 2.0;
    int n = 2;
    std::size_t m = 1000;
    std::uint64_t seed = 1;
    std::string mu;
    std::string sigma;
    double nu = 3.0;
    std::string scenario;
    double omega = 0.0;

    void attach(CLI::App* sub) {
        sub->add_option("--dist", dist, "clayton, frank, uniform, normal, t or contaminated")
            ->required()
            ->check(CLI::IsMember({"clayton", "frank", "uniform", "normal", "t", "contaminated"}));
        sub->add_option("--beta", beta, "Copula parameter");
        sub->add_option("--n", n, "Dimension")->check(CLI::PositiveNumber);
        sub->add_option("--m", m, "Observations")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Seed");
        sub->add_option("--mu", mu, "Mean vector (normal, t)");
        sub->add_option("--sigma", sigma, "Covariance, row-major (normal, t)");
        sub->add_option("--nu", nu, "Degrees of freedom (t)");
        sub->add_option("--scenario", scenario, "Contamination scenario");
        sub->add_option("--omega", omega, "Contamination level");
        sub->add_option("--out", out, "Write to this file instead of standard output");
    }

    int run() const {
        std::vector<std::string> notes{"command=sample", "dist=" + dist, "seed=" + std::to_string(seed),
                                       "m=" + std::to_string(m)};
        auto normal_params = [&](std::vector<double>& mean, dvar::Matrix& cov) {
            mean = mu.empty() ? std::vector<double>(static_cast<std::size_t>(n), 0.0)
                              : dvar::parse_real_list(mu);
            const std::size_t k = mean.size();
            if (sigma.empty()) {
                cov = dvar::Matrix::identity(k);
            } else {
                auto v = dvar::parse_real_list(sigma);
                if (v.size() != k * k) throw dvar::DimensionMismatch(k * k, v.size());
                cov = dvar::Matrix(k, k, std::move(v));
            }
            notes.push_back("mu=" + (mu.empty() ? std::string("0") : mu));
            notes.push_back("sigma=" + (sigma.empty() ? std::string("I") : sigma));
        };
        std::optional<dvar::Sample> s;
        if (dist == "clayton") {
            s = dvar::sample_clayton(beta, n, m, seed);
            notes.push_back("beta=" + dvar::format_real(beta));
            notes.push_back("n=" + std::to_string(n));
        } else if (dist == "frank") {
            s = dvar::sample_frank(beta, m, seed);
            notes.push_back("beta=" + dvar::format_real(beta));
        } else if (dist == "uniform") {
            s = dvar::sample_uniform(n, m, seed);
            notes.push_back("n=" + std::to_string(n));
        } else if (dist == "normal" || dist == "t") {
            std::vector<double> mean;
            dvar::Matrix cov;
            normal_params(mean, cov);
            if (dist == "t") {
                s = dvar::sample_mvt(mean, cov, nu, m, seed);
                notes.push_back("nu=" + dvar::format_real(nu));
            } else {
                s = dvar::sample_mvnormal(mean, cov, m, seed);
            }
        } else {
            if (scenario.empty()) throw dvar::DomainError("--scenario is required");
            dvar::ContaminationScenario sc = dvar::named_scenario(scenario);
            sc.omega = omega;
            s = dvar::sample_contaminated(sc, m, seed);
            notes.push_back("scenario=" + scenario);
            notes.push_back("omega=" + dvar::format_real(omega));
        }
        emit(dvar::write_sample_csv(*s, notes), out);
        return 0;
    }
};

// ---- properties -------------------------------------------------------------

struct PropertiesCmd {
    std::string suite;
    std::uint64_t seed = 1;
    std::size_t instances = 0;
    std::string out;

    void attach(CLI::App* sub) {
        sub->add_option("--suite", suite, "P1..P7, marginal, eq15, bound or all")->required();
        sub->add_option("--seed", seed, "Master seed");
        sub->add_option("--instances", instances, "Instances per suite (suite default when 0)");
        sub->add_option("--out", out, "Write to this file instead of standard output");
    }

    int run() const {
        std::vector<std::string> names;
        if (suite == "all")
            names = dvar::suite_names();
        else
            names.push_back(suite);
        dvar::SuiteOptions opts;
        opts.seed = seed;
        opts.instances = instances;
        bool all_ok = true;
        Json suites = Json::array();
        for (const auto& name : names) {
            const auto r = dvar::run_suite(name, opts);
            all_ok = all_ok && r.ok();
            Json j;
            j["suite"] = r.suite;
            j["ok"] = r.ok();
            j["passed"] = r.passed();
            j["total"] = r.checks.size();
            j["pass_rate"] = dvar::round12(r.pass_rate());
            j["required_rate"] = dvar::round12(r.required_rate);
            Json checks = Json::array();
            for (const auto& c : r.checks) {
                Json cj;
                cj["name"] = c.name;
                cj["passed"] = c.passed;
                cj["detail"] = c.detail;
                checks.push_back(std::move(cj));
            }
            j["checks"] = std::move(checks);
            suites.push_back(std::move(j));
        }
        Json config;
        config["suite"] = suite;
        config["seed"] = seed;
        config["instances"] = instances;
        Json res;
        res["ok"] = all_ok;
        res["suites"] = std::move(suites);
        emit(document("properties", config, res), out);
        return all_ok ? 0 : 1;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Directional multivariate Value-at-Risk"};
    app.name("dvar");
    app.require_subcommand(1, 1);
    // --h is the band width, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");

    VarCmd var;
    CopulaCmd copula;
    BivarCmd bivar;
    BoundCmd bound;
    UpperLowerCmd upper_lower;
    RobustnessCmd robustness;
    SampleCmd sample;
    PropertiesCmd properties;

    var.attach(app.add_subcommand("var", "Directional VaR of a sample"));
    copula.attach(app.add_subcommand("copula-var", "Closed-form Archimedean directional VaR"));
    bivar.attach(app.add_subcommand("bivar-var", "Bivariate directional VaR by quadrature"));
    bound.attach(app.add_subcommand("bound", "Directional bound on the portfolio VaR"));
    upper_lower.attach(app.add_subcommand("upper-lower", "Upper and lower directional VaR"));
    robustness.attach(app.add_subcommand("robustness", "Contamination robustness study"));
    sample.attach(app.add_subcommand("sample", "Draw a synthetic sample as CSV"));
    properties.attach(app.add_subcommand("properties", "Run a property suite"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "var") return var.run();
        if (name == "copula-var") return copula.run();
        if (name == "bivar-var") return bivar.run();
        if (name == "bound") return bound.run();
        if (name == "upper-lower") return upper_lower.run();
        if (name == "robustness") return robustness.run();
        if (name == "sample") return sample.run();
        if (name == "properties") return properties.run();
        std::cerr << "dvar: unknown command\n";
        return 2;
    } catch (const dvar::Error& e) {
        std::cerr << "dvar: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "dvar: internal error: " << e.what() << "\n";
        return 3;
    }
}
