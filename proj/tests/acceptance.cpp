// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "oracles.hpp"
#include "rtc/experiments.hpp"
#include "rtc/localization.hpp"
#include "rtc/solver.hpp"
#include "rtc/t_algebra.hpp"

using namespace rtc;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty())
                detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

int failures = 0;

void report(const char* id, const char* title, double limit_s, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0)
        v.require(secs < limit_s, "runtime " + fmt(secs) + " s over " + fmt(limit_s) + " s");
    if (!v.pass)
        ++failures;
    std::cout << id << ' ' << (v.pass ? "PASS" : "FAIL") << ' ' << title << " (" << fmt(secs) << " s)";
    if (!v.detail.empty())
        std::cout << ": " << v.detail;
    std::cout << std::endl;
}

double orthogonality_defect(const Tensor3& q) {
    const Tensor3 g = oracle::circular_t_product(oracle::transpose(q), q);
    return oracle::max_abs(g, identity_tensor(q.n1(), q.n3()));
}

SolverState random_state(std::mt19937& gen, Dims d) {
    SolverState s = SolverState::zeros(d);
    s.x = oracle::random_tensor(gen, d.n1, d.n2, d.n3);
    s.y = oracle::random_tensor(gen, d.n1, d.n2, d.n3);
    s.z = oracle::random_tensor(gen, d.n1, d.n2, d.n3);
    s.a = oracle::random_tensor(gen, d.n1, d.n2, d.n3);
    s.b = oracle::random_tensor(gen, d.n1, d.n2, d.n3);
    return s;
}

SolverConfig absolute(double mu, double rho, double lambda) {
    SolverConfig cfg;
    cfg.mu = mu;
    cfg.rho = rho;
    cfg.lambda = lambda;
    cfg.penalty_scale = PenaltyScale::absolute;
    cfg.penalty_growth = 1.0;
    return cfg;
}

// Shared with the A5 checks.
ExperimentReport clean_run, degradation_run, curve_run;

Fig1Config clean_config() {
    Fig1Config cfg;
    cfg.anomaly_ratios = {0.0};
    cfg.include_tcwa = true;
    cfg.setup.solver.max_iters = 500;
    return cfg;
}

Verdict a1() {
    Verdict v;
    std::mt19937 gen(2024);
    std::uniform_int_distribution<Index> side(1, 20), depth(1, 10);
    double recon = 0, ortho = 0, tnn_gap = 0, prod = 0;
    for (int n = 0; n < 50; ++n) {
        const Index n1 = side(gen), n2 = side(gen), n3 = depth(gen);
        const Tensor3 t = oracle::random_tensor(gen, n1, n2, n3);
        const TSvdFactors f = t_svd(t);
        const Tensor3 back =
            oracle::circular_t_product(oracle::circular_t_product(f.u, f.theta), oracle::transpose(f.v));
        recon = std::max(recon, relative_error(back, t));
        ortho = std::max({ortho, orthogonality_defect(f.u), orthogonality_defect(f.v)});
        const double ref = oracle::blkdiag_tnn(t);
        tnn_gap = std::max(tnn_gap, std::abs(tnn(t) - ref) / ref);

        const Tensor3 b = oracle::random_tensor(gen, n2, side(gen), n3);
        prod = std::max(prod, oracle::max_abs(t_product(t, b), oracle::circular_t_product(t, b)));
    }
    v.require(recon <= 1e-8, "reconstruction " + fmt(recon));
    v.require(ortho <= 1e-8, "orthogonality " + fmt(ortho));
    v.require(tnn_gap <= 1e-8, "tnn gap " + fmt(tnn_gap));
    v.require(prod <= 1e-10, "t-product " + fmt(prod));
    v.detail = v.pass ? "max recon " + fmt(recon) + ", ortho " + fmt(ortho) + ", tnn " + fmt(tnn_gap) + ", product " +
                            fmt(prod)
                      : v.detail;
    return v;
}

Verdict a2() {
    Verdict v;
    clean_run = run_fig1_study(clean_config());
    double worst = 0;
    for (const TrialRow& r : clean_run.rows) {
        worst = std::max(worst, r.nse);
        v.require(r.nse <= 1e-2, r.method + " trial " + std::to_string(r.trial) + " NSE " + fmt(r.nse));
        v.require(r.iterations <= 500, r.method + " ran " + std::to_string(r.iterations) + " iterations");
    }
    v.require(clean_run.rows.size() == 10, "expected 10 runs");
    if (v.pass)
        v.detail = "worst NSE " + fmt(worst) + " over " + std::to_string(clean_run.rows.size()) + " runs";
    return v;
}

Verdict a3() {
    Verdict v;
    Fig1Config cfg;
    cfg.anomaly_ratios = {0.0, 0.01, 0.05};
    cfg.include_tcwa = false;
    degradation_run = run_fig1_study(cfg);
    std::map<int, std::vector<double>> by_trial;
    for (const TrialRow& r : degradation_run.rows)
        by_trial[r.trial].push_back(r.nse);
    int ordered = 0;
    std::string seq;
    for (const auto& [trial, nses] : by_trial) {
        bool up = nses.size() == 3;
        for (std::size_t n = 1; up && n < nses.size(); ++n)
            up = nses[n] > nses[n - 1];
        ordered += up;
    }
    for (const SummaryRow& s : degradation_run.summary)
        seq += (seq.empty() ? "" : " < ") + fmt(s.mean_nse);
    v.require(ordered >= 4, "only " + std::to_string(ordered) + " of 5 trials strictly increasing");
    v.detail = std::to_string(ordered) + "/5 increasing, means " + seq;
    return v;
}

Verdict a4() {
    Verdict v;
    curve_run = run_recovery_curve(RecoveryCurveConfig{});
    std::map<double, std::map<std::string, double>> mean;
    for (const SummaryRow& s : curve_run.summary)
        mean[s.parameter][s.method] = s.mean_nse;
    double tightest = 1e9;
    for (const auto& [rate, m] : mean) {
        const double tc = m.at("tcwa"), st = m.at("stc"), os = m.at("oracle");
        v.require(tc <= st, "rate " + fmt(rate) + ": tcwa " + fmt(tc) + " > stc " + fmt(st));
        v.require(os <= tc + 0.01, "rate " + fmt(rate) + ": oracle " + fmt(os) + " > tcwa + 0.01");
        tightest = std::min(tightest, st - tc);
    }
    v.require(mean.size() == 9, "expected 9 rates");
    const double at02 = mean.at(0.2).at("tcwa");
    v.require(at02 <= 0.05, "tcwa at 0.2 " + fmt(at02));
    if (v.pass)
        v.detail = "tcwa at 0.2 " + fmt(at02) + ", smallest stc - tcwa gap " + fmt(tightest);
    return v;
}

Verdict a5() {
    Verdict v;
    int checked = 0;
    for (const ExperimentReport* rep : {&clean_run, &degradation_run, &curve_run})
        for (const TrialRow& r : rep->rows) {
            ++checked;
            const std::string tag = rep->kind + " " + r.condition + " " + r.method + " " + fmt(r.parameter) + " #" +
                                    std::to_string(r.trial);
            v.require(r.support_ok, tag + ": y off the mask");
            v.require(r.final_feasibility <= r.first_feasibility, tag + ": feasibility grew");
            if (r.converged) {
                const double limit = 1e-6 * r.observation_norm;
                v.require(r.final_feasibility <= limit, tag + ": feasibility " + fmt(r.final_feasibility));
                v.require(r.final_splitting <= limit, tag + ": splitting " + fmt(r.final_splitting));
            }
        }
    v.require(checked == 10 + 15 + 135, "missing runs (" + std::to_string(checked) + ")");

    const ExperimentReport again = run_fig1_study(clean_config());
    bool same = again.rows.size() == clean_run.rows.size();
    for (std::size_t n = 0; same && n < again.rows.size(); ++n)
        same = again.rows[n].nse == clean_run.rows[n].nse && again.rows[n].iterations == clean_run.rows[n].iterations;
    v.require(same, "rerun differs");

    // Full output tensors, bit for bit, on one anomalous instance.
    const Tensor3 truth = generate_low_tubal_rank(40, 40, 10, 3, 0.0, 100.0, 77).tensor;
    AnomalySpec spec;
    spec.ratio = 0.05;
    spec.seed = 78;
    const Tensor3 corrupted = inject_anomalies(truth, spec).corrupted;
    const SampleMask omega = sample_uniform_tubes(40, 40, 0.3, 79);
    const Tensor3 m = apply_mask(corrupted, omega);
    const SolverConfig cfg = default_config(truth.dims(), Method::tcwa);
    const SolverResult r1 = solve(m, omega, cfg), r2 = solve(m, omega, cfg);
    v.require(r1.x_hat == r2.x_hat && r1.y_hat == r2.y_hat && r1.iterations == r2.iterations,
              "repeated solve not bit-identical");
    v.require(apply_mask(r1.y_hat, omega.complement()) == Tensor3(truth.dims()), "y off the mask");

    if (v.pass)
        v.detail = std::to_string(checked) + " runs checked, reruns identical";
    return v;
}

Verdict a6() {
    Verdict v;
    std::mt19937 gen(606);
    std::uniform_real_distribution<double> u(0.3, 3.0);

    double worst_x = 0;
    for (int n = 0; n < 20; ++n) {
        const Dims d{3, 3, 1 + n % 3};
        const SolverState s = random_state(gen, d);
        const Tensor3 m = oracle::random_tensor(gen, d.n1, d.n2, d.n3);
        std::vector<bool> flags(9);
        std::vector<std::pair<Index, Index>> picked;
        for (Index j = 0; j < 3; ++j)
            for (Index i = 0; i < 3; ++i)
                if ((flags[static_cast<std::size_t>(i + 3 * j)] = gen() % 2 == 0))
                    picked.emplace_back(i, j);
        const SampleMask omega = SampleMask::from_indices(3, 3, picked);
        const SolverConfig cfg = absolute(u(gen), u(gen), 0.1);
        const Tensor3 mo = apply_mask(m, omega);
        const oracle::XObjective f{mo, s.y, s.z, s.a, s.b, flags, cfg.mu, cfg.rho};
        const Tensor3 ref = oracle::descend(f, Tensor3(d), 0.9 / (cfg.mu + cfg.rho), 400);
        worst_x = std::max(worst_x, oracle::max_abs(update_x(s, mo, omega, cfg), ref));
    }
    v.require(worst_x <= 1e-6, "update_x off by " + fmt(worst_x));

    double worst_y = 0;
    for (int n = 0; n < 20; ++n) {
        const Index n3 = 1 + n % 6;
        const Dims d{1, 1, n3};
        const SolverState s = random_state(gen, d);
        const Tensor3 m = oracle::random_tensor(gen, 1, 1, n3);
        const SolverConfig cfg = absolute(u(gen), 1.0, n % 4 == 0 ? 10.0 : u(gen));
        const Tensor3 y = update_y(s, m, SampleMask::full(1, 1), cfg);
        const Eigen::VectorXd ref =
            oracle::y_line_search(m.tube(0, 0), s.x.tube(0, 0), s.a.tube(0, 0), cfg.lambda, cfg.mu);
        worst_y = std::max(worst_y, (y.tube(0, 0) - ref).cwiseAbs().maxCoeff());
    }
    v.require(worst_y <= 1e-6, "update_y off by " + fmt(worst_y));

    double worst_svt = 0;
    for (int n = 0; n < 20; ++n) {
        const Tensor3 j = oracle::random_tensor(gen, 2 + n % 7, 3 + n % 5, 1 + n % 6, 3.0);
        const double eps = u(gen) * 2.0;
        worst_svt = std::max(worst_svt, oracle::max_abs(singular_value_threshold(j, eps), oracle::blkdiag_svt(j, eps)));
    }
    v.require(worst_svt <= 1e-8, "svt off by " + fmt(worst_svt));
    if (v.pass)
        v.detail = "x " + fmt(worst_x) + ", y " + fmt(worst_y) + ", svt " + fmt(worst_svt);
    return v;
}

Verdict a7() {
    Verdict v;
    const ExperimentReport r = run_localization_eval(LocalizationConfig{});
    int wins = 0;
    for (const auto& trial : r.p80_by_trial)
        wins += trial.at("tcwa") <= trial.at("stc");
    v.require(wins >= 4, "tcwa p80 <= stc p80 in only " + std::to_string(wins) + " of 5 trials");
    v.require(r.oracle_self_match_max_error == 0.0,
              "self-match error " + fmt(r.oracle_self_match_max_error) + " m");
    if (v.pass)
        v.detail = std::to_string(wins) + "/5 trials; pooled p80 tcwa " + fmt(r.p80.at("tcwa")) + " m, stc " +
                   fmt(r.p80.at("stc")) + " m, oracle " + fmt(r.p80.at("oracle")) + " m";
    return v;
}

Verdict a8() {
    Verdict v;
    Tensor3 truth(2, 1, 2), est(2, 1, 2);
    truth(0, 0, 0) = 3.0;
    truth(0, 0, 1) = 4.0;
    truth(1, 0, 1) = 5.0;
    est(0, 0, 0) = 3.0;
    est(0, 0, 1) = 4.0;
    v.require(nse(est, truth, SampleMask(2, 1)) == 0.5, "nse hand case");
    v.require(cdf_percentile(error_cdf({1.0, 2.0, 3.0, 4.0}), 0.8) == 3.2, "cdf 80th percentile");
    struct Row {
        double x, eps, want;
    };
    for (const Row& row : {Row{3, 1, 2}, Row{-3, 1, -2}, Row{0.5, 1, 0}, Row{-0.5, 1, 0}, Row{1, 1, 0},
                           Row{-1, 1, 0}, Row{0, 0, 0}, Row{2.5, 0, 2.5}})
        v.require(soft_threshold(row.x, row.eps) == row.want,
                  "soft_threshold(" + fmt(row.x) + ", " + fmt(row.eps) + ")");
    return v;
}

} // namespace

int main() {
    report("A1", "t-algebra against oracles on 50 random tensors", 30, a1);
    report("A2", "clean 40x40x10 recovery at 40%, stc and tcwa NSE <= 1e-2 within 500 iterations", 180, a2);
    report("A3", "stc NSE rises with 0/1/5% tube anomalies", 0, a3);
    report("A4", "recovery curve ordering tcwa <= stc, oracle <= tcwa + 0.01, tcwa(0.2) <= 0.05", 0, a4);
    report("A5", "solver contracts and feasibility trend on A2-A4 runs, reproducibility", 0, a5);
    report("A6", "subproblem solvers against independent oracles", 0, a6);
    report("A7", "localization p80 tcwa <= stc in >= 4/5 trials, oracle self-match 0 m", 300, a7);
    report("A8", "metric hand cases", 0, a8);
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}
