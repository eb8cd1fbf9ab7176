#include "rtc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "rtc/rng.hpp"

namespace rtc {

using nlohmann::json;

namespace {

constexpr const char* kOracleDefinition = "stc on the sample set with the true anomalous tubes removed";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool support_inside(const Tensor3& y, const SampleMask& omega) {
    for (Index j = 0; j < y.n2(); ++j)
        for (Index i = 0; i < y.n1(); ++i)
            if (!omega.contains(i, j) && (y.tube(i, j).array() != 0.0).any())
                return false;
    return true;
}

double safe_nse(const Tensor3& estimate, const Tensor3& truth, const SampleMask& omega) {
    try {
        return nse(estimate, truth, omega);
    } catch (const EmptyComplement&) {
        return kNaN;
    } catch (const ZeroDenominator&) {
        return kNaN;
    }
}

double feasibility(const Tensor3& m, const SolverResult& r, const SampleMask& omega) {
    Tensor3 fit = r.x_hat + r.y_hat;
    return (m - apply_mask(fit, omega)).frobenius_norm();
}

struct RunOutcome {
    SolverResult result;
    TrialRow row;
};

RunOutcome run_method(const SyntheticSetup& setup, Method method, const Tensor3& truth,
                      const AnomalyInjection& injected, const SampleMask& omega, const std::string& condition,
                      double parameter, int trial, std::uint64_t seed) {
    const SolverConfig cfg = resolve_solver(setup, method);
    const Tensor3 m = apply_mask(injected.corrupted, omega);
    const auto start = std::chrono::steady_clock::now();
    SolverResult result = solve(m, omega, cfg, injected.support);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    TrialRow row;
    row.condition = condition;
    row.parameter = parameter;
    row.method = to_string(method);
    row.trial = trial;
    row.seed = seed;
    row.nse = safe_nse(result.x_hat, truth, omega);
    row.iterations = result.iterations;
    row.converged = result.converged;
    row.support_ok = support_inside(result.y_hat, omega);
    row.wall_seconds = seconds;
    if (method == Method::oracle) {
        const SampleMask clean = omega.minus(injected.support);
        const Tensor3 mc = apply_mask(injected.corrupted, clean);
        row.final_feasibility = feasibility(mc, result, clean);
        row.observation_norm = mc.frobenius_norm();
    } else {
        row.final_feasibility = feasibility(m, result, omega);
        row.observation_norm = m.frobenius_norm();
    }
    row.final_splitting = (result.x_hat - result.z_hat).frobenius_norm();
    row.first_feasibility = result.history.empty() ? 0.0 : result.history.front().feasibility;
    return {std::move(result), std::move(row)};
}

AnomalyInjection inject(const SyntheticSetup& setup, const Tensor3& truth, double ratio, std::uint64_t seed) {
    AnomalySpec spec;
    spec.ratio = ratio;
    spec.magnitude = setup.anomaly_magnitude;
    spec.mode = setup.anomaly_mode;
    spec.seed = seed;
    return inject_anomalies(truth, spec);
}

std::vector<SummaryRow> summarize(const std::vector<TrialRow>& rows) {
    std::vector<SummaryRow> out;
    std::vector<std::vector<double>> samples;
    for (const TrialRow& r : rows) {
        auto it = std::find_if(out.begin(), out.end(), [&](const SummaryRow& s) {
            return s.condition == r.condition && s.parameter == r.parameter && s.method == r.method;
        });
        std::size_t slot;
        if (it == out.end()) {
            out.push_back({r.condition, r.parameter, r.method, 0.0, 0.0, 0});
            samples.emplace_back();
            slot = out.size() - 1;
        } else {
            slot = static_cast<std::size_t>(it - out.begin());
        }
        samples[slot].push_back(r.nse);
    }
    for (std::size_t s = 0; s < out.size(); ++s) {
        const auto& v = samples[s];
        const double n = static_cast<double>(v.size());
        double mean = 0.0;
        for (double x : v)
            mean += x;
        mean /= n;
        double var = 0.0;
        for (double x : v)
            var += (x - mean) * (x - mean);
        out[s].mean_nse = mean;
        out[s].std_nse = v.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
        out[s].trials = static_cast<int>(v.size());
    }
    return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string csv_number(double v) {
    if (!std::isfinite(v))
        return "NA";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());
    return out;
}

} // namespace

RadioMap generate_path_loss_map(Index n1, Index n2, Index n3, double spacing, std::uint64_t seed,
                                double floor_value, double p0) {
    if (!(spacing > 0))
        throw InvalidArgument("grid spacing must be positive");
    RadioMap map;
    map.fingerprints = Tensor3(n1, n2, n3);
    map.spacing = spacing;
    map.floor_value = floor_value;

    const double width = static_cast<double>(n1 - 1) * spacing;
    const double height = static_cast<double>(n2 - 1) * spacing;
    const double margin = 0.2 * std::max(width, height);
    Rng rng(seed);
    for (Index k = 0; k < n3; ++k) {
        const double ax = rng.uniform(-margin, width + margin);
        const double ay = rng.uniform(-margin, height + margin);
        const double eta = rng.uniform(2.0, 3.5);
        for (Index j = 0; j < n2; ++j)
            for (Index i = 0; i < n1; ++i) {
                const Point p = map.rp_coords(i, j);
                const double d = std::max(1.0, std::hypot(p.x - ax, p.y - ay));
                map.fingerprints(i, j, k) = std::max(floor_value, p0 - 10.0 * eta * std::log10(d));
            }
    }
    return map;
}

TrialSeeds trial_seeds(std::uint64_t base, int trial, int condition) {
    const std::uint64_t t = derive_seed(base, static_cast<std::uint64_t>(trial));
    return TrialSeeds{t, derive_seed(t, 1), derive_seed(t, 2),
                      derive_seed(t, 100 + static_cast<std::uint64_t>(condition)), derive_seed(t, 3)};
}

SyntheticSetup localization_setup() {
    SyntheticSetup s;
    s.model = MapModel::smooth;
    s.lo = -110.0;
    s.hi = -10.0;
    return s;
}

SolverConfig resolve_solver(const SyntheticSetup& setup, Method method) {
    SolverConfig cfg = setup.solver;
    cfg.method = method;
    cfg.lambda = setup.lambda ? *setup.lambda : default_lambda(setup.dims);
    return cfg;
}

Tensor3 make_truth(const SyntheticSetup& setup, std::uint64_t seed) {
    if (setup.truth)
        return *setup.truth;
    const Dims d = setup.dims;
    if (setup.model == MapModel::path_loss)
        return generate_path_loss_map(d.n1, d.n2, d.n3, setup.spacing, seed).fingerprints;
    if (setup.model == MapModel::smooth)
        return generate_smooth_low_tubal_rank(d.n1, d.n2, d.n3, setup.rank, setup.lo, setup.hi, seed,
                                              setup.smooth_frequencies)
            .tensor;
    return generate_low_tubal_rank(d.n1, d.n2, d.n3, setup.rank, setup.lo, setup.hi, seed).tensor;
}

ExperimentReport run_recovery_curve(const RecoveryCurveConfig& cfg) {
    SyntheticSetup setup = cfg.setup;
    if (setup.truth)
        setup.dims = setup.truth->dims();

    ExperimentReport report;
    report.kind = "curve";
    report.config = to_json(setup);
    report.config["rates"] = cfg.rates;
    json methods = json::array();
    for (Method m : cfg.methods)
        methods.push_back(to_string(m));
    report.config["methods"] = methods;
    report.config["oracle_definition"] = kOracleDefinition;

    for (int trial = 0; trial < setup.trials; ++trial) {
        const TrialSeeds base = trial_seeds(setup.seed, trial);
        const Tensor3 truth = make_truth(setup, base.truth);
        const AnomalyInjection injected = inject(setup, truth, setup.anomaly_ratio, base.anomaly);
        for (std::size_t c = 0; c < cfg.rates.size(); ++c) {
            const double rate = cfg.rates[c];
            const TrialSeeds seeds = trial_seeds(setup.seed, trial, static_cast<int>(c));
            const SampleMask omega = sample_uniform_tubes(setup.dims.n1, setup.dims.n2, rate, seeds.mask);
            for (Method method : cfg.methods) {
                auto outcome = run_method(setup, method, truth, injected, omega, "curve", rate, trial, seeds.trial);
                report.rows.push_back(std::move(outcome.row));
            }
        }
    }
    report.summary = summarize(report.rows);
    return report;
}

ExperimentReport run_fig1_study(const Fig1Config& cfg) {
    SyntheticSetup setup = cfg.setup;
    if (setup.truth)
        setup.dims = setup.truth->dims();
    if (cfg.anomaly_ratios.empty())
        throw InvalidArgument("fig1 study needs at least one anomaly ratio");

    ExperimentReport report;
    report.kind = "fig1";
    report.config = to_json(setup);
    report.config["rate"] = cfg.rate;
    report.config["anomaly_ratios"] = cfg.anomaly_ratios;
    report.config["include_tcwa"] = cfg.include_tcwa;

    for (int trial = 0; trial < setup.trials; ++trial) {
        const TrialSeeds seeds = trial_seeds(setup.seed, trial);
        const Tensor3 truth = make_truth(setup, seeds.truth);
        const SampleMask omega = sample_uniform_tubes(setup.dims.n1, setup.dims.n2, cfg.rate, seeds.mask);
        for (std::size_t c = 0; c < cfg.anomaly_ratios.size(); ++c) {
            const double ratio = cfg.anomaly_ratios[c];
            const AnomalyInjection injected = inject(setup, truth, ratio, seeds.anomaly);
            const std::string condition = ratio == 0.0 ? "clean" : "anomalies";
            auto stc = run_method(setup, Method::stc, truth, injected, omega, condition, ratio, trial, seeds.trial);
            report.rows.push_back(std::move(stc.row));
            if (cfg.include_tcwa && c + 1 == cfg.anomaly_ratios.size()) {
                auto tcwa =
                    run_method(setup, Method::tcwa, truth, injected, omega, condition, ratio, trial, seeds.trial);
                report.rows.push_back(std::move(tcwa.row));
            }
        }
    }
    report.summary = summarize(report.rows);
    return report;
}

ExperimentReport run_localization_eval(const LocalizationConfig& cfg) {
    SyntheticSetup setup = cfg.setup;
    if (setup.truth)
        setup.dims = setup.truth->dims();
    if (cfg.k < 1)
        throw InvalidArgument("k must be positive");
    if (cfg.test_points < 1)
        throw InvalidArgument("test point count must be positive");

    ExperimentReport report;
    report.kind = "localization";
    report.config = to_json(setup);
    report.config["rate"] = cfg.rate;
    report.config["test_points"] = cfg.test_points;
    report.config["k"] = cfg.k;
    report.config["noise_sigma"] = cfg.noise_sigma;
    json loc_methods = json::array();
    for (Method m : cfg.methods)
        loc_methods.push_back(to_string(m));
    report.config["methods"] = loc_methods;
    report.config["oracle_definition"] = kOracleDefinition;

    std::map<std::string, std::vector<double>> pooled;
    for (int trial = 0; trial < setup.trials; ++trial) {
        const TrialSeeds seeds = trial_seeds(setup.seed, trial);
        const Tensor3 truth = make_truth(setup, seeds.truth);
        const AnomalyInjection injected = inject(setup, truth, setup.anomaly_ratio, seeds.anomaly);
        const SampleMask omega = sample_uniform_tubes(setup.dims.n1, setup.dims.n2, cfg.rate, seeds.mask);

        // Held-out reference points, drawn from the unsampled set.
        const auto unsampled = omega.complement().true_indices();
        const auto count = std::min<std::uint64_t>(static_cast<std::uint64_t>(cfg.test_points), unsampled.size());
        Rng rng(seeds.test_points);
        std::vector<std::pair<Index, Index>> tests;
        for (std::uint64_t p : rng.choose(unsampled.size(), count))
            tests.push_back(unsampled[static_cast<std::size_t>(p)]);
        std::vector<Eigen::VectorXd> queries;
        for (const auto& [i, j] : tests) {
            Eigen::VectorXd q = truth.tube(i, j);
            if (cfg.noise_sigma > 0)
                for (Index k = 0; k < q.size(); ++k)
                    q(k) += cfg.noise_sigma * rng.normal();
            queries.push_back(std::move(q));
        }

        std::map<std::string, double> trial_p80;
        for (Method method : cfg.methods) {
            auto outcome =
                run_method(setup, method, truth, injected, omega, "localization", cfg.rate, trial, seeds.trial);
            RadioMap map;
            map.fingerprints = std::move(outcome.result.x_hat);
            map.spacing = setup.spacing;

            std::vector<double> errors;
            for (std::size_t t = 0; t < tests.size(); ++t) {
                const auto [i, j] = tests[t];
                const auto est = knn_localize(map, std::span<const double>(queries[t].data(), queries[t].size()), cfg.k);
                const double err = localization_error(est, map.rp_coords(i, j));
                errors.push_back(err);
                report.point_errors.push_back({to_string(method), trial, seeds.trial, i, j, err});
            }
            trial_p80[to_string(method)] = cdf_percentile(error_cdf(errors), 0.8);
            auto& pool = pooled[to_string(method)];
            pool.insert(pool.end(), errors.begin(), errors.end());

            if (method == Method::oracle) {
                for (const auto& [i, j] : tests) {
                    const Eigen::VectorXd self = map.fingerprints.tube(i, j);
                    const auto est = knn_localize(map, std::span<const double>(self.data(), self.size()), 1);
                    report.oracle_self_match_max_error =
                        std::max(report.oracle_self_match_max_error, localization_error(est, map.rp_coords(i, j)));
                }
            }
            report.rows.push_back(std::move(outcome.row));
        }
        report.p80_by_trial.push_back(std::move(trial_p80));
    }
    for (auto& [method, errors] : pooled) {
        report.cdf[method] = error_cdf(errors);
        report.p80[method] = cdf_percentile(report.cdf[method], 0.8);
    }
    report.summary = summarize(report.rows);
    return report;
}

json ExperimentReport::to_json() const {
    json doc;
    doc["kind"] = kind;
    doc["config"] = config;
    json rows_json = json::array();
    for (const TrialRow& r : rows) {
        rows_json.push_back({{"condition", r.condition},
                             {"parameter", r.parameter},
                             {"method", r.method},
                             {"trial", r.trial},
                             {"seed", r.seed},
                             {"nse", number_or_null(r.nse)},
                             {"iterations", r.iterations},
                             {"converged", r.converged},
                             {"support_ok", r.support_ok},
                             {"wall_seconds", r.wall_seconds}});
    }
    doc["rows"] = rows_json;
    json summary_json = json::array();
    for (const SummaryRow& s : summary) {
        summary_json.push_back({{"condition", s.condition},
                                {"parameter", s.parameter},
                                {"method", s.method},
                                {"mean_nse", number_or_null(s.mean_nse)},
                                {"std_nse", number_or_null(s.std_nse)},
                                {"trials", s.trials}});
    }
    doc["summary"] = summary_json;
    if (kind == "localization") {
        doc["p80_error_m"] = p80;
        doc["p80_error_m_by_trial"] = p80_by_trial;
        doc["oracle_self_match_max_error_m"] = oracle_self_match_max_error;
    }
    return doc;
}

json to_json(const SolverConfig& cfg) {
    return {{"lambda", cfg.lambda},
            {"mu", cfg.mu},
            {"rho", cfg.rho},
            {"svt_threshold_source", to_string(cfg.svt_threshold_source)},
            {"max_iters", cfg.max_iters},
            {"tol", cfg.tol},
            {"penalty_scale", cfg.penalty_scale == PenaltyScale::absolute ? "absolute" : "spectral_norm"},
            {"penalty_growth", cfg.penalty_growth},
            {"penalty_max", cfg.penalty_max}};
}

json to_json(const SyntheticSetup& setup) {
    json solver = to_json(setup.solver);
    solver["lambda"] = setup.lambda ? *setup.lambda : default_lambda(setup.dims);
    solver.erase("method");
    return {{"dims", {setup.dims.n1, setup.dims.n2, setup.dims.n3}},
            {"rank", setup.rank},
            {"range", {setup.lo, setup.hi}},
            {"model", setup.truth ? "supplied" : to_string(setup.model)},
            {"smooth_frequencies", setup.smooth_frequencies},
            {"spacing", setup.spacing},
            {"anomaly_ratio", setup.anomaly_ratio},
            {"anomaly_magnitude", setup.anomaly_magnitude},
            {"anomaly_mode", to_string(setup.anomaly_mode)},
            {"seed", setup.seed},
            {"trials", setup.trials},
            {"solver", solver}};
}

void write_report_files(const ExperimentReport& report, const std::string& dir) {
    const std::filesystem::path root(dir);
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir + ": " + ec.message());

    {
        auto out = open_out(root / "report.json");
        out << report.to_json().dump(2) << '\n';
    }
    {
        auto out = open_out(root / "trials.csv");
        out << "condition,parameter,method,trial,seed,nse,iterations,converged,wall_time_s\n";
        for (const TrialRow& r : report.rows)
            out << r.condition << ',' << csv_number(r.parameter) << ',' << r.method << ',' << r.trial << ','
                << r.seed << ',' << csv_number(r.nse) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
                << csv_number(r.wall_seconds) << '\n';
    }
    {
        auto out = open_out(root / "summary.csv");
        if (report.kind == "fig1") {
            out << "condition,anomaly_ratio,method,mean_nse,std_nse,trials\n";
            for (const SummaryRow& s : report.summary)
                out << s.condition << ',' << csv_number(s.parameter) << ',' << s.method << ','
                    << csv_number(s.mean_nse) << ',' << csv_number(s.std_nse) << ',' << s.trials << '\n';
        } else {
            out << "rate,method,mean_nse,std_nse,trials\n";
            for (const SummaryRow& s : report.summary)
                out << csv_number(s.parameter) << ',' << s.method << ',' << csv_number(s.mean_nse) << ','
                    << csv_number(s.std_nse) << ',' << s.trials << '\n';
        }
    }
    if (report.kind == "localization") {
        {
            auto out = open_out(root / "errors.csv");
            out << "method,trial,seed,i,j,error_m\n";
            for (const PointError& p : report.point_errors)
                out << p.method << ',' << p.trial << ',' << p.seed << ',' << p.i << ',' << p.j << ','
                    << csv_number(p.error) << '\n';
        }
        {
            auto out = open_out(root / "cdf.csv");
            out << "method,error_m,fraction\n";
            for (const auto& [method, cdf] : report.cdf)
                for (const CdfPoint& c : cdf)
                    out << method << ',' << csv_number(c.error) << ',' << csv_number(c.fraction) << '\n';
        }
    }
}

const char* to_string(MapModel model) {
    switch (model) {
    case MapModel::low_rank:
        return "low_rank";
    case MapModel::smooth:
        return "smooth";
    case MapModel::path_loss:
        return "path_loss";
    }
    return "?";
}

MapModel parse_map_model(const std::string& text) {
    if (text == "low_rank")
        return MapModel::low_rank;
    if (text == "smooth")
        return MapModel::smooth;
    if (text == "path_loss")
        return MapModel::path_loss;
    throw InvalidArgument("unknown map model: " + text);
}

} // namespace rtc
