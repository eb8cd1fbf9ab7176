#include "rtc/solver.hpp"

#include <algorithm>
#include <cmath>

#include "rtc/t_algebra.hpp"

namespace rtc {

namespace {

void require_shape(const Tensor3& t, Dims d, const char* what) {
    if (t.dims() != d)
        throw ShapeMismatch(std::string(what) + ": dimensions differ from the observation tensor");
}

void require_mask(const SampleMask& omega, Dims d) {
    if (omega.n1() != d.n1 || omega.n2() != d.n2)
        throw ShapeMismatch("sample mask does not match the tensor grid");
}

void require_state(const SolverState& s, Dims d) {
    require_shape(s.x, d, "state.x");
    require_shape(s.z, d, "state.z");
    require_shape(s.y, d, "state.y");
    require_shape(s.a, d, "state.a");
    require_shape(s.b, d, "state.b");
}

// ||M - P(X + Y)||_F
double feasibility_residual(const Tensor3& m, const Tensor3& x, const Tensor3& y, const SampleMask& omega) {
    double sum = 0.0;
    const Dims d = m.dims();
    for (Index k = 0; k < d.n3; ++k)
        for (Index j = 0; j < d.n2; ++j)
            for (Index i = 0; i < d.n1; ++i) {
                const double r = omega.contains(i, j) ? m(i, j, k) - x(i, j, k) - y(i, j, k) : m(i, j, k);
                sum += r * r;
            }
    return std::sqrt(sum);
}

double threshold_for(const SolverConfig& cfg) {
    return cfg.svt_threshold_source == ThresholdSource::rho ? 1.0 / cfg.rho : 1.0 / cfg.mu;
}

} // namespace

void SolverConfig::validate() const {
    if (!(lambda > 0) || !(mu > 0) || !(rho > 0) || !(tol > 0))
        throw InvalidArgument("lambda, mu, rho and tol must be positive");
    if (max_iters < 1)
        throw InvalidArgument("max_iters must be at least 1");
    if (!(penalty_growth >= 1.0) || !(penalty_max > 0))
        throw InvalidArgument("penalty_growth must be >= 1 and penalty_max positive");
}

double default_lambda(Dims d) {
    // 1/sqrt(max(n1,n2) n3) alone leaves too many anomalies in X at 40x40x10.
    return 5.0 / std::sqrt(static_cast<double>(std::max(d.n1, d.n2) * d.n3));
}

SolverConfig default_config(Dims d, Method method) {
    SolverConfig cfg;
    cfg.lambda = default_lambda(d);
    cfg.method = method;
    return cfg;
}

SolverState SolverState::zeros(Dims d) {
    return SolverState{Tensor3(d), Tensor3(d), Tensor3(d), Tensor3(d), Tensor3(d), 0};
}

double soft_threshold(double x, double eps) {
    if (x > eps)
        return x - eps;
    if (x < -eps)
        return x + eps;
    return 0.0;
}

std::pair<Tensor3, double> singular_value_threshold_with_norm(const Tensor3& j, double eps) {
    if (!(eps >= 0))
        throw InvalidArgument("singular value threshold must be non-negative");
    const Index n3 = j.n3();
    const SpectralTensor fj = dft_mode3(j);
    SpectralTensor fz(j.dims());
    double norm = 0.0;
    for (Index k = 0; k < spectral::independent_slices(n3); ++k) {
        const bool self_conj = spectral::is_self_conjugate(k, n3);
        const auto svd = spectral::slice_svd(fj.slice(k), self_conj, spectral::SvdFactors::thin);
        Eigen::VectorXd shrunk = svd.sigma;
        Index keep = 0;
        for (Index m = 0; m < shrunk.size(); ++m) {
            shrunk(m) = soft_threshold(shrunk(m), eps);
            if (shrunk(m) > 0)
                keep = m + 1;
        }
        norm += (self_conj ? 1.0 : 2.0) * shrunk.sum();
        if (keep == 0)
            continue;
        fz.slice(k) = svd.u.leftCols(keep) * shrunk.head(keep).cast<Complex>().asDiagonal() *
                      svd.v.leftCols(keep).adjoint();
    }
    spectral::mirror_conjugate_slices(fz);
    return {idft_mode3(fz), norm};
}

Tensor3 singular_value_threshold(const Tensor3& j, double eps) {
    return singular_value_threshold_with_norm(j, eps).first;
}

Tensor3 update_x(const SolverState& state, const Tensor3& m, const SampleMask& omega, const SolverConfig& cfg) {
    const Dims d = m.dims();
    require_state(state, d);
    require_mask(omega, d);
    const double mu = cfg.mu;
    const double rho = cfg.rho;
    Tensor3 x(d);
    for (Index k = 0; k < d.n3; ++k)
        for (Index j = 0; j < d.n2; ++j)
            for (Index i = 0; i < d.n1; ++i) {
                const double z = state.z(i, j, k);
                const double b = state.b(i, j, k);
                if (omega.contains(i, j)) {
                    const double observed = mu * (m(i, j, k) - state.y(i, j, k)) + state.a(i, j, k);
                    x(i, j, k) = (observed + rho * z - b) / (mu + rho);
                } else {
                    x(i, j, k) = z - b / rho;
                }
            }
    return x;
}

Tensor3 update_z(const SolverState& state, const SolverConfig& cfg) {
    Tensor3 j = state.b;
    j *= 1.0 / cfg.rho;
    j += state.x;
    return singular_value_threshold(j, threshold_for(cfg));
}

Tensor3 update_y(const SolverState& state, const Tensor3& m, const SampleMask& omega, const SolverConfig& cfg) {
    const Dims d = m.dims();
    require_state(state, d);
    require_mask(omega, d);
    const double shrink = cfg.lambda / cfg.mu;
    Tensor3 y(d);
    Eigen::VectorXd g(d.n3);
    for (Index j = 0; j < d.n2; ++j)
        for (Index i = 0; i < d.n1; ++i) {
            if (!omega.contains(i, j))
                continue;
            g = m.tube(i, j) - state.x.tube(i, j) + state.a.tube(i, j) / cfg.mu;
            const double norm = g.norm();
            if (norm == 0.0)
                continue;
            const double factor = std::max(0.0, 1.0 - shrink / norm);
            if (factor > 0.0)
                y.tube(i, j) = factor * g;
        }
    return y;
}

std::pair<Tensor3, Tensor3> update_duals(const SolverState& state, const Tensor3& m, const SampleMask& omega,
                                         const SolverConfig& cfg) {
    const Dims d = m.dims();
    require_state(state, d);
    require_mask(omega, d);
    Tensor3 a = state.a;
    Tensor3 b = state.b;
    for (Index k = 0; k < d.n3; ++k)
        for (Index j = 0; j < d.n2; ++j)
            for (Index i = 0; i < d.n1; ++i) {
                const double projected = omega.contains(i, j) ? state.x(i, j, k) + state.y(i, j, k) : 0.0;
                a(i, j, k) += cfg.mu * (m(i, j, k) - projected);
                b(i, j, k) += cfg.rho * (state.x(i, j, k) - state.z(i, j, k));
            }
    return {std::move(a), std::move(b)};
}

double spectral_norm(const Tensor3& t) {
    const SpectralTensor ft = dft_mode3(t);
    double best = 0.0;
    for (Index k = 0; k < spectral::independent_slices(t.n3()); ++k) {
        const auto svd = spectral::slice_svd(ft.slice(k), spectral::is_self_conjugate(k, t.n3()),
                                             spectral::SvdFactors::none);
        best = std::max(best, svd.sigma(0));
    }
    return best;
}

SolverResult solve(const Tensor3& m, const SampleMask& omega, const SolverConfig& cfg,
                   const std::optional<SampleMask>& anomaly_support) {
    cfg.validate();
    const Dims d = m.dims();
    require_mask(omega, d);
    if (!m.all_finite())
        throw InvalidArgument("observation tensor contains non-finite values");
    if (apply_mask(m, omega) != m)
        throw InvalidArgument("observation tensor must be zero outside the sample mask");

    if (cfg.method == Method::oracle) {
        if (!anomaly_support)
            throw InvalidArgument("oracle baseline requires the true anomaly support");
        require_mask(*anomaly_support, d);
        const SampleMask clean = omega.minus(*anomaly_support);
        SolverConfig stc = cfg;
        stc.method = Method::stc;
        return solve(apply_mask(m, clean), clean, stc);
    }

    SolverConfig work = cfg;
    double penalty_cap = cfg.penalty_max;
    if (cfg.penalty_scale == PenaltyScale::spectral_norm) {
        const double unit = spectral_norm(m);
        if (unit > 0) {
            work.mu /= unit;
            work.rho /= unit;
            penalty_cap /= unit;
        }
    }
    SolverState state = SolverState::zeros(d);
    SolverResult result;
    result.history.reserve(static_cast<std::size_t>(cfg.max_iters));
    const double limit = cfg.tol * m.frobenius_norm();

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        state.x = update_x(state, m, omega, work);

        Tensor3 j = state.b;
        j *= 1.0 / work.rho;
        j += state.x;
        auto [z, tnn_z] = singular_value_threshold_with_norm(j, threshold_for(work));
        state.z = std::move(z);

        if (work.method == Method::tcwa)
            state.y = update_y(state, m, omega, work);

        auto [a, b] = update_duals(state, m, omega, work);
        state.a = std::move(a);
        state.b = std::move(b);
        state.iter = iter;

        IterationRecord rec;
        rec.iter = iter;
        rec.feasibility = feasibility_residual(m, state.x, state.y, omega);
        rec.splitting = (state.x.flat() - state.z.flat()).norm();
        rec.objective = tnn_z + work.lambda * norm_112(state.y);
        rec.mu = work.mu;
        result.history.push_back(rec);

        if (rec.feasibility <= limit && rec.splitting <= limit) {
            result.converged = true;
            break;
        }
        if (work.penalty_growth > 1.0) {
            work.mu = std::max(work.mu, std::min(work.mu * work.penalty_growth, penalty_cap));
            work.rho = std::max(work.rho, std::min(work.rho * work.penalty_growth, penalty_cap));
        }
    }

    result.iterations = state.iter;
    result.x_hat = std::move(state.x);
    result.y_hat = std::move(state.y);
    result.z_hat = std::move(state.z);
    return result;
}

const char* to_string(Method method) {
    switch (method) {
    case Method::tcwa:
        return "tcwa";
    case Method::stc:
        return "stc";
    case Method::oracle:
        return "oracle";
    }
    return "?";
}

Method parse_method(const std::string& text) {
    if (text == "tcwa")
        return Method::tcwa;
    if (text == "stc")
        return Method::stc;
    if (text == "oracle")
        return Method::oracle;
    throw InvalidArgument("unknown method: " + text);
}

const char* to_string(ThresholdSource source) { return source == ThresholdSource::rho ? "rho" : "mu"; }

ThresholdSource parse_threshold_source(const std::string& text) {
    if (text == "rho")
        return ThresholdSource::rho;
    if (text == "mu")
        return ThresholdSource::mu;
    throw InvalidArgument("unknown threshold source: " + text);
}

} // namespace rtc
