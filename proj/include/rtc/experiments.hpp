#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtc/localization.hpp"
#include "rtc/sampling.hpp"
#include "rtc/solver.hpp"

namespace rtc {

/// Ground-truth model used when no tensor is supplied.
enum class MapModel {
    low_rank,  // generate_low_tubal_rank rescaled onto [lo, hi]
    smooth,    // generate_smooth_low_tubal_rank rescaled onto [lo, hi]
    path_loss, // log-distance path loss from randomly placed access points
};

/// Smooth synthetic radio map: access points placed uniformly over the grid
/// (plus a margin), RSS = p0 - 10 * eta * log10(max(d, 1 m)) with a per-AP
/// exponent eta drawn from [2, 3.5], clamped below at floor_value.
RadioMap generate_path_loss_map(Index n1, Index n2, Index n3, double spacing, std::uint64_t seed,
                                double floor_value = -110.0, double p0 = -30.0);

/// Options shared by every driver.
struct SyntheticSetup {
    Dims dims{40, 40, 10};
    Index rank = 3;
    double lo = 0.0;
    double hi = 100.0;
    MapModel model = MapModel::low_rank;
    Index smooth_frequencies = 0; // 0: generator default
    double spacing = 1.0;
    /// Replaces the synthetic ground truth when set.
    std::optional<Tensor3> truth;

    double anomaly_ratio = 0.05;
    double anomaly_magnitude = 100.0;
    AnomalyMode anomaly_mode = AnomalyMode::tube;

    /// Base solver settings; `method` is overridden per run.
    SolverConfig solver;
    /// Sparsity weight; default_lambda(dims) when unset.
    std::optional<double> lambda;

    std::uint64_t seed = 1;
    int trials = 5;
};

/// Seeds used by one trial. Every report row carries `trial` so that a run
/// can be reproduced from the echoed base seed.
struct TrialSeeds {
    std::uint64_t trial = 0;
    std::uint64_t truth = 0;
    std::uint64_t anomaly = 0;
    std::uint64_t mask = 0;
    std::uint64_t test_points = 0;
};

TrialSeeds trial_seeds(std::uint64_t base, int trial, int condition = 0);

struct TrialRow {
    std::string condition;
    double parameter = 0.0; // sampling rate or anomaly ratio
    std::string method;
    int trial = 0;
    std::uint64_t seed = 0;
    double nse = 0.0;
    int iterations = 0;
    bool converged = false;
    bool support_ok = true; // y_hat vanishes outside the sample mask
    // Recomputed from the returned tensors on the problem the solver saw
    // (the oracle sees the mask with anomalous tubes removed).
    double final_feasibility = 0.0; // ||M - P(X + Y)||_F
    double final_splitting = 0.0;   // ||X - Z||_F
    double observation_norm = 0.0;  // ||M||_F
    double first_feasibility = 0.0; // from the iteration log
    double wall_seconds = 0.0;
};

struct SummaryRow {
    std::string condition;
    double parameter = 0.0;
    std::string method;
    double mean_nse = 0.0;
    double std_nse = 0.0;
    int trials = 0;
};

struct PointError {
    std::string method;
    int trial = 0;
    std::uint64_t seed = 0;
    Index i = 0;
    Index j = 0;
    double error = 0.0;
};

struct ExperimentReport {
    std::string kind;
    nlohmann::json config;
    std::vector<TrialRow> rows;
    std::vector<SummaryRow> summary;

    // Localization runs only.
    std::vector<PointError> point_errors;
    std::map<std::string, std::vector<CdfPoint>> cdf;
    std::map<std::string, double> p80;
    /// Per trial, 80th-percentile error keyed by method.
    std::vector<std::map<std::string, double>> p80_by_trial;
    /// Largest error of exact-match, k = 1 queries against the oracle map.
    double oracle_self_match_max_error = 0.0;

    nlohmann::json to_json() const;
};

struct RecoveryCurveConfig {
    SyntheticSetup setup;
    std::vector<double> rates{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<Method> methods{Method::tcwa, Method::stc, Method::oracle};
};

/// NSE versus sampling rate for each method; summary rows are
/// (rate, method, mean, std, trials).
ExperimentReport run_recovery_curve(const RecoveryCurveConfig& cfg);

struct Fig1Config {
    SyntheticSetup setup;
    double rate = 0.4;
    std::vector<double> anomaly_ratios{0.0, 0.01, 0.05};
    /// Add a TCwA run on the last (largest) anomaly ratio.
    bool include_tcwa = true;
};

/// STC under increasing anomaly ratios at a fixed sampling rate.
ExperimentReport run_fig1_study(const Fig1Config& cfg);

/// Smooth low-rank map in dBm ([-110, -10]) on a 1 m grid.
SyntheticSetup localization_setup();

struct LocalizationConfig {
    SyntheticSetup setup = localization_setup();
    double rate = 0.2;
    Index test_points = 200;
    Index k = 3;
    double noise_sigma = 0.0;
    std::vector<Method> methods{Method::tcwa, Method::stc, Method::oracle};
};

/// Recover the map with each method, localize held-out reference points
/// with KNN and report per-point errors, CDFs and 80th percentiles.
ExperimentReport run_localization_eval(const LocalizationConfig& cfg);

/// Solver settings for one run of `method` under `setup`.
SolverConfig resolve_solver(const SyntheticSetup& setup, Method method);

/// Ground truth for one trial: the supplied tensor or a synthetic one.
Tensor3 make_truth(const SyntheticSetup& setup, std::uint64_t seed);

/// Writes report.json and summary.csv; trials.csv, and for localization
/// runs errors.csv and cdf.csv, alongside.
void write_report_files(const ExperimentReport& report, const std::string& dir);

nlohmann::json to_json(const SolverConfig& cfg);
nlohmann::json to_json(const SyntheticSetup& setup);

const char* to_string(MapModel model);
MapModel parse_map_model(const std::string& text);

} // namespace rtc
