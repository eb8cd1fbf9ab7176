#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rtc/sampling.hpp"
#include "rtc/tensor.hpp"

namespace rtc {

enum class Method {
    tcwa,   // low-rank plus tube-sparse anomaly completion
    stc,    // plain TNN completion, anomaly tensor pinned to zero
    oracle, // STC with the true anomalous tubes removed from the sample set
};

/// Which penalty sets the singular-value threshold in the Z-update.
enum class ThresholdSource {
    rho, // 1/rho: exact proximal step of the Z subproblem
    mu,  // 1/mu: the alternative printed form
};

/// Units of SolverConfig::mu, rho and penalty_max.
enum class PenaltyScale {
    absolute,      // used as given
    spectral_norm, // divided by the largest Fourier-slice singular value of M
};

struct SolverConfig {
    double lambda = 0.05;
    double mu = 1.25;
    double rho = 1.25;
    ThresholdSource svt_threshold_source = ThresholdSource::rho;
    int max_iters = 1000;
    double tol = 1e-6;
    Method method = Method::tcwa;
    PenaltyScale penalty_scale = PenaltyScale::spectral_norm;
    /// mu and rho are multiplied by this after every iteration, up to
    /// penalty_max. 1 keeps them fixed.
    double penalty_growth = 1.02;
    double penalty_max = 1e6;

    /// Throws InvalidArgument unless lambda, mu, rho, tol > 0, max_iters >= 1
    /// and penalty_growth >= 1.
    void validate() const;
};

/// 5 / sqrt(max(n1, n2) * n3).
double default_lambda(Dims d);

/// Defaults with lambda scaled to the problem size.
SolverConfig default_config(Dims d, Method method = Method::tcwa);

struct SolverState {
    Tensor3 x, z, y, a, b;
    int iter = 0;

    static SolverState zeros(Dims d);
};

struct IterationRecord {
    int iter = 0;
    double feasibility = 0.0; // ||M - P(X + Y)||_F
    double splitting = 0.0;   // ||X - Z||_F
    double objective = 0.0;   // tnn(Z) + lambda * norm_112(Y)
    double mu = 0.0;
};

struct SolverResult {
    Tensor3 x_hat;
    Tensor3 y_hat;
    Tensor3 z_hat; // splitting copy of x_hat; equal to it at convergence
    int iterations = 0;
    bool converged = false;
    std::vector<IterationRecord> history;
};

double soft_threshold(double x, double eps);

/// Shrink the singular values of every Fourier slice of j by eps.
Tensor3 singular_value_threshold(const Tensor3& j, double eps);

/// Same as singular_value_threshold; also returns tnn of the result.
std::pair<Tensor3, double> singular_value_threshold_with_norm(const Tensor3& j, double eps);

Tensor3 update_x(const SolverState& state, const Tensor3& m, const SampleMask& omega, const SolverConfig& cfg);
Tensor3 update_z(const SolverState& state, const SolverConfig& cfg);
Tensor3 update_y(const SolverState& state, const Tensor3& m, const SampleMask& omega, const SolverConfig& cfg);
std::pair<Tensor3, Tensor3> update_duals(const SolverState& state, const Tensor3& m, const SampleMask& omega,
                                         const SolverConfig& cfg);

/// Largest singular value over the Fourier slices of t (spectral norm of
/// the block-diagonal spectrum); the penalty unit under spectral_norm scaling.
double spectral_norm(const Tensor3& t);

/// ADMM from zero initialization. `m` must be supported on `omega`.
/// Method::oracle requires `anomaly_support`; it is ignored otherwise.
SolverResult solve(const Tensor3& m, const SampleMask& omega, const SolverConfig& cfg,
                   const std::optional<SampleMask>& anomaly_support = std::nullopt);

const char* to_string(Method method);
Method parse_method(const std::string& text);
const char* to_string(ThresholdSource source);
ThresholdSource parse_threshold_source(const std::string& text);

} // namespace rtc
