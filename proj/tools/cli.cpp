#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtc/experiments.hpp"
#include "rtc/rng.hpp"
#include "rtc/tensor_io.hpp"

namespace rtc::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

Dims parse_dims(const std::string& text) {
    Dims d{};
    char x1 = 0, x2 = 0;
    std::istringstream is(text);
    if (!(is >> d.n1 >> x1 >> d.n2 >> x2 >> d.n3) || x1 != 'x' || x2 != 'x' || is.peek() != EOF)
        throw InvalidArgument("--dims expects AxBxC, got '" + text + "'");
    if (d.n1 < 1 || d.n2 < 1 || d.n3 < 1)
        throw InvalidArgument("--dims entries must be positive");
    return d;
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw InvalidArgument("--range expects LO:HI, got '" + text + "'");
    try {
        std::size_t used = 0;
        const double lo = std::stod(text.substr(0, colon), &used);
        if (used != colon)
            throw std::invalid_argument("lo");
        const std::string rest = text.substr(colon + 1);
        const double hi = std::stod(rest, &used);
        if (used != rest.size())
            throw std::invalid_argument("hi");
        if (!(lo <= hi))
            throw InvalidArgument("--range needs LO <= HI");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw InvalidArgument("--range expects LO:HI, got '" + text + "'");
    }
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& n : names)
        out.push_back(parse_method(n));
    if (out.empty())
        throw InvalidArgument("--methods is empty");
    return out;
}

std::string fmt(double v) {
    if (!std::isfinite(v))
        return "n/a";
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());
    out << doc.dump(2) << '\n';
    if (!out)
        throw IoError("write failed: " + path.string());
}

void make_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

// Solver flags shared by recover and the experiment drivers.
struct SolverFlags {
    CLI::Option* lambda_opt = nullptr;
    double lambda = 0.0;
    double mu = SolverConfig{}.mu;
    double rho = SolverConfig{}.rho;
    double tol = SolverConfig{}.tol;
    int max_iters = SolverConfig{}.max_iters;
    std::string threshold = "rho";
    std::string penalty_scale = "spectral";
    double growth = SolverConfig{}.penalty_growth;

    void attach(CLI::App* app) {
        lambda_opt = app->add_option("--lambda", lambda, "anomaly weight (default 5/sqrt(max(n1,n2)*n3))");
        app->add_option("--mu", mu, "initial penalty on the sampling constraint")->capture_default_str();
        app->add_option("--rho", rho, "initial penalty on the splitting constraint")->capture_default_str();
        app->add_option("--tol", tol, "stop when both residuals are below tol*||M||")->capture_default_str();
        app->add_option("--max-iters", max_iters, "iteration limit")->capture_default_str();
        app->add_option("--svt-threshold", threshold, "1/rho or 1/mu as SVT threshold")
            ->check(CLI::IsMember({"rho", "mu"}))
            ->capture_default_str();
        app->add_option("--penalty-scale", penalty_scale,
                        "spectral: mu and rho are in units of 1/||M||_2; absolute: used as given")
            ->check(CLI::IsMember({"spectral", "absolute"}))
            ->capture_default_str();
        app->add_option("--penalty-growth", growth, "per-iteration factor on mu and rho (1 = fixed)")
            ->capture_default_str();
    }

    SolverConfig config(Dims d, Method method) const {
        SolverConfig cfg = default_config(d, method);
        if (lambda_opt->count())
            cfg.lambda = lambda;
        cfg.mu = mu;
        cfg.rho = rho;
        cfg.tol = tol;
        cfg.max_iters = max_iters;
        cfg.svt_threshold_source = parse_threshold_source(threshold);
        cfg.penalty_scale = penalty_scale == "absolute" ? PenaltyScale::absolute : PenaltyScale::spectral_norm;
        cfg.penalty_growth = growth;
        cfg.validate();
        return cfg;
    }
};

// Flags of the three experiment drivers.
struct ExperimentFlags {
    std::string dims = "40x40x10";
    Index rank = 3;
    std::string range;
    std::string model;
    Index frequencies = 0;
    double spacing = 1.0;
    std::string truth_file;
    double anomaly_ratio = 0.05;
    double anomaly_mag = 100.0;
    std::string anomaly_mode = "tube";
    std::uint64_t seed = 1;
    int trials = 5;
    std::vector<std::string> methods{"tcwa", "stc", "oracle"};
    std::string out;
    SolverFlags solver;

    void attach(CLI::App* app, bool with_methods, bool with_ratio) {
        app->add_option("--dims", dims, "tensor size AxBxC")->capture_default_str();
        app->add_option("--rank", rank, "tubal rank of the synthetic truth")->capture_default_str();
        app->add_option("--range", range, "value range LO:HI of the synthetic truth");
        app->add_option("--model", model, "synthetic truth: low_rank, smooth or path_loss");
        app->add_option("--frequencies", frequencies, "cosine terms per factor for --model smooth (0: auto)");
        app->add_option("--spacing", spacing, "reference point spacing in metres")->capture_default_str();
        app->add_option("--truth", truth_file, "use this tensor file as ground truth");
        if (with_ratio)
            app->add_option("--anomaly-ratio", anomaly_ratio, "fraction of tubes (or entries) corrupted")
                ->capture_default_str();
        app->add_option("--anomaly-mag", anomaly_mag, "anomaly values are uniform in [-mag, mag]")
            ->capture_default_str();
        app->add_option("--anomaly-mode", anomaly_mode, "tube or entry")
            ->check(CLI::IsMember({"tube", "entry"}))
            ->capture_default_str();
        app->add_option("--seed", seed, "base seed")->capture_default_str();
        app->add_option("--trials", trials, "trials per condition")->capture_default_str();
        if (with_methods)
            app->add_option("--methods", methods, "comma-separated subset of tcwa,stc,oracle")
                ->delimiter(',')
                ->capture_default_str();
        app->add_option("--out", out, "directory for report.json and the CSV tables");
        solver.attach(app);
    }

    SyntheticSetup setup(SyntheticSetup s) const {
        s.dims = parse_dims(dims);
        s.rank = rank;
        if (!range.empty())
            std::tie(s.lo, s.hi) = parse_range(range);
        if (!model.empty())
            s.model = parse_map_model(model);
        s.smooth_frequencies = frequencies;
        if (!(spacing > 0))
            throw InvalidArgument("--spacing must be positive");
        s.spacing = spacing;
        if (!truth_file.empty()) {
            s.truth = read_tensor_file(truth_file).tensor;
            s.dims = s.truth->dims();
        }
        s.anomaly_ratio = anomaly_ratio;
        s.anomaly_magnitude = anomaly_mag;
        s.anomaly_mode = parse_anomaly_mode(anomaly_mode);
        s.seed = seed;
        if (trials < 1)
            throw InvalidArgument("--trials must be positive");
        s.trials = trials;
        s.solver = solver.config(s.dims, Method::tcwa);
        if (solver.lambda_opt->count())
            s.lambda = solver.lambda;
        return s;
    }
};

void print_summary(const ExperimentReport& report, const char* parameter, std::ostream& out) {
    out << std::left << std::setw(14) << "condition" << std::setw(10) << parameter << std::setw(8) << "method"
        << std::setw(14) << "mean_nse" << std::setw(14) << "std_nse" << "trials\n";
    for (const SummaryRow& s : report.summary)
        out << std::left << std::setw(14) << s.condition << std::setw(10) << fmt(s.parameter) << std::setw(8)
            << s.method << std::setw(14) << fmt(s.mean_nse) << std::setw(14) << fmt(s.std_nse) << s.trials << '\n';
    int unconverged = 0;
    for (const TrialRow& r : report.rows)
        unconverged += r.converged ? 0 : 1;
    if (unconverged)
        out << unconverged << " of " << report.rows.size() << " runs hit the iteration limit\n";
}

void finish_report(const ExperimentReport& report, const std::string& dir, std::ostream& out) {
    if (dir.empty())
        return;
    write_report_files(report, dir);
    out << "wrote " << (fs::path(dir) / "report.json").string() << '\n';
}

// ---- synth -----------------------------------------------------------------

struct SynthCmd {
    std::string dims = "40x40x10";
    Index rank = 3;
    std::string range = "0:100";
    std::string model = "low_rank";
    Index frequencies = 0;
    std::uint64_t seed = 1;
    double anomaly_ratio = 0.0;
    double anomaly_mag = 100.0;
    std::string anomaly_mode = "tube";
    std::string out;

    void attach(CLI::App* app) {
        app->add_option("--dims", dims, "tensor size AxBxC")->capture_default_str();
        app->add_option("--rank", rank, "requested tubal rank")->capture_default_str();
        app->add_option("--range", range, "value range LO:HI")->capture_default_str();
        app->add_option("--model", model, "low_rank or smooth")
            ->check(CLI::IsMember({"low_rank", "smooth"}))
            ->capture_default_str();
        app->add_option("--frequencies", frequencies, "cosine terms per factor for --model smooth (0: auto)");
        app->add_option("--seed", seed, "generator seed")->capture_default_str();
        app->add_option("--anomaly-ratio", anomaly_ratio, "fraction of tubes (or entries) to corrupt")
            ->capture_default_str();
        app->add_option("--anomaly-mag", anomaly_mag, "anomaly values are uniform in [-mag, mag]")
            ->capture_default_str();
        app->add_option("--anomaly-mode", anomaly_mode, "tube or entry")
            ->check(CLI::IsMember({"tube", "entry"}))
            ->capture_default_str();
        app->add_option("--out", out, "output directory")->required();
    }

    int run(std::ostream& os) const {
        const Dims d = parse_dims(dims);
        const auto [lo, hi] = parse_range(range);
        const MapModel m = parse_map_model(model);
        const LowRankTensor truth = m == MapModel::smooth
                                        ? generate_smooth_low_tubal_rank(d.n1, d.n2, d.n3, rank, lo, hi, seed,
                                                                         frequencies)
                                        : generate_low_tubal_rank(d.n1, d.n2, d.n3, rank, lo, hi, seed);
        make_dir(out);
        const fs::path dir(out);
        std::ostringstream prov;
        prov << "synth model=" << model << " rank=" << rank << " seed=" << seed;
        write_tensor_file(dir / "truth.rtt", {truth.tensor, "value", prov.str()});

        json meta{{"dims", {d.n1, d.n2, d.n3}},
                  {"model", model},
                  {"requested_rank", truth.requested_rank},
                  {"measured_rank", truth.measured_rank},
                  {"range", {lo, hi}},
                  {"seed", seed},
                  {"files", {{"truth", "truth.rtt"}}}};

        if (anomaly_ratio > 0) {
            AnomalySpec spec;
            spec.ratio = anomaly_ratio;
            spec.magnitude = anomaly_mag;
            spec.mode = parse_anomaly_mode(anomaly_mode);
            spec.seed = derive_seed(seed, 2);
            const AnomalyInjection inj = inject_anomalies(truth.tensor, spec);
            write_tensor_file(dir / "anomalies.rtt", {inj.truth, "value", prov.str() + " anomalies"});
            write_tensor_file(dir / "corrupted.rtt", {inj.corrupted, "value", prov.str() + " corrupted"});
            write_mask_file(dir / "anomaly_support.json", inj.support);
            meta["anomalies"] = {{"ratio", anomaly_ratio},
                                 {"magnitude", anomaly_mag},
                                 {"mode", anomaly_mode},
                                 {"seed", spec.seed},
                                 {"count", anomaly_count(spec, d)},
                                 {"corrupted_tubes", inj.support.count()}};
            meta["files"]["anomalies"] = "anomalies.rtt";
            meta["files"]["corrupted"] = "corrupted.rtt";
            meta["files"]["anomaly_support"] = "anomaly_support.json";
        }
        write_json(dir / "meta.json", meta);
        os << "truth " << d.n1 << 'x' << d.n2 << 'x' << d.n3 << " requested rank " << truth.requested_rank
           << ", measured rank " << truth.measured_rank << '\n';
        os << "wrote " << dir.string() << '\n';
        return ok;
    }
};

// ---- sample ----------------------------------------------------------------

struct SampleCmd {
    std::string in;
    std::string dims;
    double rate = 0.4;
    std::uint64_t seed = 1;
    std::string out;

    void attach(CLI::App* app) {
        auto* in_opt = app->add_option("--in", in, "tensor file to sample (writes observed.rtt)");
        app->add_option("--dims", dims, "grid size AxBxC when no --in is given")->excludes(in_opt);
        app->add_option("--rate", rate, "fraction of tubes sampled")->capture_default_str();
        app->add_option("--seed", seed, "sampling seed")->capture_default_str();
        app->add_option("--out", out, "output directory")->required();
    }

    int run(std::ostream& os) const {
        std::optional<TensorFile> source;
        Dims d{};
        if (!in.empty()) {
            source = read_tensor_file(in);
            d = source->tensor.dims();
        } else if (!dims.empty()) {
            d = parse_dims(dims);
        } else {
            throw InvalidArgument("sample needs --in or --dims");
        }
        const SampleMask omega = sample_uniform_tubes(d.n1, d.n2, rate, seed);
        make_dir(out);
        const fs::path dir(out);
        write_mask_file(dir / "mask.json", omega);
        if (source) {
            std::ostringstream prov;
            prov << "sample rate=" << rate << " seed=" << seed << " of " << in;
            write_tensor_file(dir / "observed.rtt", {apply_mask(source->tensor, omega), source->units, prov.str()});
        }
        os << "sampled " << omega.count() << " of " << d.n1 * d.n2 << " tubes\n";
        os << "wrote " << dir.string() << '\n';
        return ok;
    }
};

// ---- recover ---------------------------------------------------------------

struct RecoverCmd {
    std::string in;
    std::string mask;
    CLI::Option* rate_opt = nullptr;
    double rate = 0.4;
    std::uint64_t seed = 1;
    std::string truth;
    std::string anomaly_truth;
    std::string method = "tcwa";
    std::string out;
    SolverFlags solver;

    void attach(CLI::App* app) {
        app->add_option("--in", in, "observed or full tensor file; entries off the mask are ignored")->required();
        auto* mask_opt = app->add_option("--mask", mask, "sample mask file");
        rate_opt = app->add_option("--rate", rate, "draw a uniform tube mask at this rate instead of --mask")
                       ->excludes(mask_opt);
        app->add_option("--seed", seed, "seed for --rate")->capture_default_str();
        app->add_option("--truth", truth, "ground-truth tensor file; enables the NSE report");
        app->add_option("--anomaly-truth", anomaly_truth, "mask file of the anomalous tubes (required by oracle)");
        app->add_option("--method", method, "tcwa, stc or oracle")
            ->check(CLI::IsMember({"tcwa", "stc", "oracle"}))
            ->capture_default_str();
        app->add_option("--out", out, "output directory")->required();
        solver.attach(app);
    }

    int run(std::ostream& os) const {
        const TensorFile input = read_tensor_file(in);
        const Dims d = input.tensor.dims();
        const Method m = parse_method(method);
        const SolverConfig cfg = solver.config(d, m);

        std::optional<SampleMask> support;
        if (!anomaly_truth.empty())
            support = read_mask_file(anomaly_truth);
        if (m == Method::oracle && !support)
            throw InvalidArgument("--method oracle needs --anomaly-truth");

        SampleMask omega;
        json mask_source;
        if (!mask.empty()) {
            omega = read_mask_file(mask);
            mask_source = {{"file", mask}};
        } else if (rate_opt->count()) {
            omega = sample_uniform_tubes(d.n1, d.n2, rate, seed);
            mask_source = {{"rate", rate}, {"seed", seed}};
        } else {
            throw InvalidArgument("recover needs --mask or --rate");
        }
        if (omega.n1() != d.n1 || omega.n2() != d.n2)
            throw InvalidArgument("mask grid does not match the tensor");
        if (support && (support->n1() != d.n1 || support->n2() != d.n2))
            throw InvalidArgument("anomaly support grid does not match the tensor");

        std::optional<Tensor3> truth_tensor;
        if (!truth.empty()) {
            truth_tensor = read_tensor_file(truth).tensor;
            if (truth_tensor->dims() != d)
                throw InvalidArgument("--truth dimensions differ from --in");
        }

        const Tensor3 observed = apply_mask(input.tensor, omega);
        const SolverResult result = solve(observed, omega, cfg, support);

        json report{{"kind", "recover"},
                    {"config",
                     {{"input", in},
                      {"method", method},
                      {"mask", mask_source},
                      {"solver", to_json(cfg)},
                      {"dims", {d.n1, d.n2, d.n3}}}},
                    {"iterations", result.iterations},
                    {"converged", result.converged},
                    {"sampled_tubes", omega.count()}};
        if (m == Method::oracle)
            report["config"]["oracle_definition"] = "stc on the sample set with the true anomalous tubes removed";
        if (!result.history.empty()) {
            const IterationRecord& last = result.history.back();
            report["final_feasibility"] = last.feasibility;
            report["final_splitting"] = last.splitting;
            report["final_objective"] = last.objective;
        }

        std::string nse_note;
        if (truth_tensor) {
            try {
                const double v = nse(result.x_hat, *truth_tensor, omega);
                report["nse"] = v;
                nse_note = fmt(v);
            } catch (const EmptyComplement&) {
                report["nse"] = nullptr;
                report["nse_status"] = "not applicable: every tube is sampled";
                nse_note = "n/a (every tube is sampled)";
            } catch (const ZeroDenominator&) {
                report["nse"] = nullptr;
                report["nse_status"] = "not applicable: truth is zero on the unsampled tubes";
                nse_note = "n/a (truth is zero on the unsampled tubes)";
            }
        }

        json history = json::array();
        for (const IterationRecord& r : result.history)
            history.push_back({{"iter", r.iter},
                               {"feasibility", r.feasibility},
                               {"splitting", r.splitting},
                               {"objective", r.objective},
                               {"mu", r.mu}});
        report["history"] = history;

        make_dir(out);
        const fs::path dir(out);
        const std::string prov = "recover method=" + method + " from " + in;
        write_tensor_file(dir / "x_hat.rtt", {result.x_hat, input.units, prov});
        if (m == Method::tcwa)
            write_tensor_file(dir / "y_hat.rtt", {result.y_hat, input.units, prov});
        write_mask_file(dir / "mask.json", omega);
        write_json(dir / "report.json", report);

        os << method << ": " << result.iterations << " iterations, "
           << (result.converged ? "converged" : "not converged (iteration limit)") << '\n';
        if (!nse_note.empty())
            os << "NSE " << nse_note << '\n';
        os << "wrote " << dir.string() << '\n';
        return ok;
    }
};

// ---- experiment drivers ----------------------------------------------------

struct LocalizeCmd {
    ExperimentFlags flags;
    double rate = 0.2;
    Index k = 3;
    Index test_points = 200;
    double noise_sigma = 0.0;

    void attach(CLI::App* app) {
        flags.attach(app, true, true);
        app->add_option("--rate", rate, "sampling rate")->capture_default_str();
        app->add_option("--k", k, "neighbours averaged by KNN")->capture_default_str();
        app->add_option("--test-points", test_points, "held-out reference points per trial")->capture_default_str();
        app->add_option("--noise-sigma", noise_sigma, "Gaussian noise (dB) added to the queries")
            ->capture_default_str();
    }

    int run(std::ostream& os) const {
        LocalizationConfig cfg;
        cfg.setup = flags.setup(localization_setup());
        cfg.rate = rate;
        cfg.k = k;
        cfg.test_points = test_points;
        if (!(noise_sigma >= 0))
            throw InvalidArgument("--noise-sigma must be non-negative");
        cfg.noise_sigma = noise_sigma;
        cfg.methods = parse_methods(flags.methods);
        const ExperimentReport report = run_localization_eval(cfg);
        print_summary(report, "rate", os);
        for (const auto& [method, p80] : report.p80)
            os << "p80 " << method << ' ' << fmt(p80) << " m\n";
        finish_report(report, flags.out, os);
        return ok;
    }
};

struct CurveCmd {
    ExperimentFlags flags;
    std::vector<double> rates = RecoveryCurveConfig{}.rates;

    void attach(CLI::App* app) {
        flags.attach(app, true, true);
        app->add_option("--rates", rates, "comma-separated sampling rates")->delimiter(',')->capture_default_str();
    }

    int run(std::ostream& os) const {
        RecoveryCurveConfig cfg;
        cfg.setup = flags.setup(cfg.setup);
        cfg.rates = rates;
        cfg.methods = parse_methods(flags.methods);
        const ExperimentReport report = run_recovery_curve(cfg);
        print_summary(report, "rate", os);
        finish_report(report, flags.out, os);
        return ok;
    }
};

struct Fig1Cmd {
    ExperimentFlags flags;
    double rate = 0.4;
    std::vector<double> ratios = Fig1Config{}.anomaly_ratios;
    bool no_tcwa = false;

    void attach(CLI::App* app) {
        flags.attach(app, false, false);
        app->add_option("--rate", rate, "sampling rate")->capture_default_str();
        app->add_option("--anomaly-ratios", ratios, "comma-separated anomaly ratios")
            ->delimiter(',')
            ->capture_default_str();
        app->add_flag("--no-tcwa", no_tcwa, "skip the TCwA run on the largest ratio");
    }

    int run(std::ostream& os) const {
        Fig1Config cfg;
        cfg.setup = flags.setup(cfg.setup);
        cfg.rate = rate;
        cfg.anomaly_ratios = ratios;
        cfg.include_tcwa = !no_tcwa;
        const ExperimentReport report = run_fig1_study(cfg);
        print_summary(report, "ratio", os);
        finish_report(report, flags.out, os);
        return ok;
    }
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust tensor completion for RF fingerprint radio maps", "rtc"};
    app.require_subcommand(1);

    SynthCmd synth;
    SampleCmd sample;
    RecoverCmd recover;
    LocalizeCmd localize;
    CurveCmd curve;
    Fig1Cmd fig1;
    auto* synth_app = app.add_subcommand("synth", "generate a low-tubal-rank tensor, optionally with anomalies");
    auto* sample_app = app.add_subcommand("sample", "draw a uniform tube sampling mask");
    auto* recover_app = app.add_subcommand("recover", "complete a sampled tensor with tcwa, stc or oracle");
    auto* localize_app = app.add_subcommand("localize", "KNN localization error on recovered radio maps");
    auto* curve_app = app.add_subcommand("curve", "NSE versus sampling rate for each method");
    auto* fig1_app = app.add_subcommand("fig1", "STC under increasing anomaly ratios at a fixed rate");
    synth.attach(synth_app);
    sample.attach(sample_app);
    recover.attach(recover_app);
    localize.attach(localize_app);
    curve.attach(curve_app);
    fig1.attach(fig1_app);

    std::vector<std::string> storage{"rtc"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage)
        argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : invalid_args;
    }

    try {
        if (synth_app->parsed())
            return synth.run(out);
        if (sample_app->parsed())
            return sample.run(out);
        if (recover_app->parsed())
            return recover.run(out);
        if (localize_app->parsed())
            return localize.run(out);
        if (curve_app->parsed())
            return curve.run(out);
        if (fig1_app->parsed())
            return fig1.run(out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return io_error;
    } catch (const InvalidArgument& e) {
        err << "invalid arguments: " << e.what() << '\n';
        return invalid_args;
    } catch (const ShapeMismatch& e) {
        err << "invalid arguments: " << e.what() << '\n';
        return invalid_args;
    } catch (const RankTooLarge& e) {
        err << "invalid arguments: " << e.what() << '\n';
        return invalid_args;
    } catch (const KTooLarge& e) {
        err << "invalid arguments: " << e.what() << '\n';
        return invalid_args;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
    return invalid_args;
}

} // namespace rtc::cli
