#include "rtc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rtc/rng.hpp"
#include "rtc/t_algebra.hpp"

namespace rtc {

SampleMask::SampleMask(Index n1, Index n2) : n1_(n1), n2_(n2) {
    if (n1 < 1 || n2 < 1)
        throw InvalidArgument("mask dimensions must be positive");
    flags_.assign(static_cast<std::size_t>(n1 * n2), 0);
}

SampleMask SampleMask::full(Index n1, Index n2) {
    SampleMask m(n1, n2);
    std::fill(m.flags_.begin(), m.flags_.end(), 1);
    return m;
}

SampleMask SampleMask::from_indices(Index n1, Index n2,
                                    const std::vector<std::pair<Index, Index>>& indices) {
    SampleMask m(n1, n2);
    for (const auto& [i, j] : indices) {
        if (i < 0 || i >= n1 || j < 0 || j >= n2)
            throw InvalidArgument("mask index out of range");
        m.set(i, j, true);
    }
    return m;
}

Index SampleMask::count() const {
    return static_cast<Index>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

SampleMask SampleMask::complement() const {
    SampleMask m = *this;
    for (auto& f : m.flags_)
        f = f ? 0 : 1;
    return m;
}

SampleMask SampleMask::minus(const SampleMask& other) const {
    if (other.n1_ != n1_ || other.n2_ != n2_)
        throw ShapeMismatch("mask dimensions differ");
    SampleMask m = *this;
    for (std::size_t p = 0; p < m.flags_.size(); ++p)
        m.flags_[p] = (flags_[p] && !other.flags_[p]) ? 1 : 0;
    return m;
}

std::vector<std::pair<Index, Index>> SampleMask::true_indices() const {
    std::vector<std::pair<Index, Index>> out;
    for (Index i = 0; i < n1_; ++i)
        for (Index j = 0; j < n2_; ++j)
            if (contains(i, j))
                out.emplace_back(i, j);
    return out;
}

SampleMask sample_uniform_tubes(Index n1, Index n2, double rate, std::uint64_t seed) {
    if (!(rate >= 0.0 && rate <= 1.0))
        throw InvalidArgument("sampling rate must lie in [0, 1]");
    SampleMask mask(n1, n2);
    const auto total = static_cast<std::uint64_t>(n1 * n2);
    const auto budget = static_cast<std::uint64_t>(std::llround(rate * static_cast<double>(total)));
    Rng rng(seed);
    for (std::uint64_t p : rng.choose(total, budget))
        mask.set(static_cast<Index>(p) / n2, static_cast<Index>(p) % n2, true);
    return mask;
}

Tensor3 apply_mask(const Tensor3& t, const SampleMask& omega) {
    if (omega.n1() != t.n1() || omega.n2() != t.n2())
        throw ShapeMismatch("mask dimensions do not match tensor grid");
    Tensor3 out(t.dims());
    for (Index k = 0; k < t.n3(); ++k)
        for (Index j = 0; j < t.n2(); ++j)
            for (Index i = 0; i < t.n1(); ++i)
                if (omega.contains(i, j))
                    out(i, j, k) = t(i, j, k);
    return out;
}

namespace {

LowRankTensor rescale_product(const Tensor3& product, Index r, double lo, double hi) {
    const Dims d = product.dims();
    const double vmin = product.flat().minCoeff();
    const double vmax = product.flat().maxCoeff();
    Tensor3 out(d);
    if (vmax > vmin) {
        const double scale = (hi - lo) / (vmax - vmin);
        for (Index e = 0; e < out.size(); ++e)
            out.values()[e] = std::clamp(lo + (product.values()[e] - vmin) * scale, lo, hi);
    } else {
        out = Tensor3::constant(d, 0.5 * (lo + hi));
    }
    const Index measured = tubal_rank(out);
    if (measured > r + 1)
        throw std::logic_error("generated tensor exceeds tubal rank r + 1");
    return LowRankTensor{std::move(out), r, measured};
}

void check_rank_request(Index n1, Index n2, Index r, double lo, double hi) {
    if (r < 0)
        throw InvalidArgument("tubal rank must be non-negative");
    if (r > std::min(n1, n2))
        throw RankTooLarge("requested tubal rank exceeds min(n1, n2)");
    if (!(lo < hi))
        throw InvalidArgument("value range must satisfy lo < hi");
}

} // namespace

LowRankTensor generate_low_tubal_rank(Index n1, Index n2, Index n3, Index r, double lo, double hi,
                                      std::uint64_t seed) {
    check_rank_request(n1, n2, r, lo, hi);
    if (r == 0)
        return LowRankTensor{Tensor3::constant(Dims{n1, n2, n3}, 0.5 * (lo + hi)), 0, 0};

    Rng rng(seed);
    Tensor3 p(n1, r, n3);
    Tensor3 q(r, n2, n3);
    for (double& v : p.values())
        v = rng.normal();
    for (double& v : q.values())
        v = rng.normal();
    return rescale_product(t_product(p, q), r, lo, hi);
}

LowRankTensor generate_smooth_low_tubal_rank(Index n1, Index n2, Index n3, Index r, double lo, double hi,
                                             std::uint64_t seed, Index frequencies) {
    check_rank_request(n1, n2, r, lo, hi);
    if (frequencies < 0)
        throw InvalidArgument("frequency count must be non-negative");
    if (frequencies == 0)
        frequencies = std::max<Index>(1, std::min(n1, n2) / 4);
    if (r == 0)
        return LowRankTensor{Tensor3::constant(Dims{n1, n2, n3}, 0.5 * (lo + hi)), 0, 0};

    Rng rng(seed);
    const auto series = [&](Index len, Index count) {
        // count independent smooth profiles of length len
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(len, count);
        for (Index c = 0; c < count; ++c)
            for (Index f = 0; f < frequencies; ++f) {
                const double amp = rng.normal() / static_cast<double>(1 + f);
                const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
                for (Index x = 0; x < len; ++x)
                    out(x, c) += amp * std::cos(std::numbers::pi * static_cast<double>(f) *
                                                    (static_cast<double>(x) + 0.5) / static_cast<double>(len) +
                                                phase);
            }
        return out;
    };

    Tensor3 p(n1, r, n3);
    Tensor3 q(r, n2, n3);
    const Eigen::MatrixXd rows = series(n1, r * n3);
    const Eigen::MatrixXd cols = series(n2, r * n3);
    for (Index k = 0; k < n3; ++k)
        for (Index c = 0; c < r; ++c) {
            for (Index i = 0; i < n1; ++i)
                p(i, c, k) = rows(i, k * r + c);
            for (Index j = 0; j < n2; ++j)
                q(c, j, k) = cols(j, k * r + c);
        }
    return rescale_product(t_product(p, q), r, lo, hi);
}

namespace {

// Draw an additive corruption for `base` such that base + y and
// (base + y) - y are both exact in floating point. Draws that would round
// are rejected and redrawn from the same stream.
double exact_corruption(Rng& rng, double base, double magnitude) {
    for (;;) {
        const double corrupted = base + rng.uniform(-magnitude, magnitude);
        const double y = corrupted - base;
        if (base + y == corrupted && corrupted - y == base)
            return y;
    }
}

} // namespace

Index anomaly_count(const AnomalySpec& spec, Dims d) {
    const double cells = spec.mode == AnomalyMode::tube ? static_cast<double>(d.tubes())
                                                        : static_cast<double>(d.size());
    return static_cast<Index>(std::llround(spec.ratio * cells));
}

AnomalyInjection inject_anomalies(const Tensor3& t, const AnomalySpec& spec) {
    if (!(spec.ratio >= 0.0 && spec.ratio <= 1.0))
        throw InvalidArgument("anomaly ratio must lie in [0, 1]");
    if (!(spec.magnitude >= 0.0) || !std::isfinite(spec.magnitude))
        throw InvalidArgument("anomaly magnitude must be finite and non-negative");

    const Dims d = t.dims();
    Tensor3 truth(d);
    SampleMask support(d.n1, d.n2);
    Rng rng(spec.seed);
    const auto count = static_cast<std::uint64_t>(anomaly_count(spec, d));

    if (spec.mode == AnomalyMode::tube) {
        for (std::uint64_t p : rng.choose(static_cast<std::uint64_t>(d.tubes()), count)) {
            const Index i = static_cast<Index>(p) / d.n2;
            const Index j = static_cast<Index>(p) % d.n2;
            for (Index k = 0; k < d.n3; ++k)
                truth(i, j, k) = exact_corruption(rng, t(i, j, k), spec.magnitude);
            support.set(i, j, true);
        }
    } else {
        // Entry positions are enumerated row-major over (i, j) with k fastest.
        for (std::uint64_t p : rng.choose(static_cast<std::uint64_t>(d.size()), count)) {
            const Index k = static_cast<Index>(p) % d.n3;
            const Index tube = static_cast<Index>(p) / d.n3;
            const Index i = tube / d.n2;
            const Index j = tube % d.n2;
            truth(i, j, k) = exact_corruption(rng, t(i, j, k), spec.magnitude);
            support.set(i, j, true);
        }
    }

    Tensor3 corrupted = t;
    corrupted += truth;
    return AnomalyInjection{std::move(corrupted), std::move(truth), std::move(support)};
}

const char* to_string(AnomalyMode mode) { return mode == AnomalyMode::tube ? "tube" : "entry"; }

AnomalyMode parse_anomaly_mode(const std::string& text) {
    if (text == "tube")
        return AnomalyMode::tube;
    if (text == "entry")
        return AnomalyMode::entry;
    throw InvalidArgument("unknown anomaly mode: " + text);
}

} // namespace rtc
