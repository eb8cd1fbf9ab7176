#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rtc/tensor.hpp"

namespace rtc {

/// Set of surveyed reference points on an n1 x n2 grid (tube sampling).
class SampleMask {
public:
    SampleMask() = default;
    SampleMask(Index n1, Index n2);

    static SampleMask full(Index n1, Index n2);
    static SampleMask from_indices(Index n1, Index n2, const std::vector<std::pair<Index, Index>>& indices);

    Index n1() const { return n1_; }
    Index n2() const { return n2_; }

    bool contains(Index i, Index j) const { return flags_[static_cast<std::size_t>(i * n2_ + j)] != 0; }
    void set(Index i, Index j, bool on) { flags_[static_cast<std::size_t>(i * n2_ + j)] = on ? 1 : 0; }

    Index count() const;
    SampleMask complement() const;
    /// Positions in this mask but not in `other`.
    SampleMask minus(const SampleMask& other) const;

    /// Sampled positions in row-major order.
    std::vector<std::pair<Index, Index>> true_indices() const;

    friend bool operator==(const SampleMask&, const SampleMask&) = default;

private:
    Index n1_ = 0;
    Index n2_ = 0;
    std::vector<std::uint8_t> flags_; // row-major
};

/// Exactly round(rate * n1 * n2) distinct positions, uniform without replacement.
SampleMask sample_uniform_tubes(Index n1, Index n2, double rate, std::uint64_t seed);

/// Keep tubes on the mask, zero all others.
Tensor3 apply_mask(const Tensor3& t, const SampleMask& omega);

struct LowRankTensor {
    Tensor3 tensor;
    Index requested_rank = 0;
    Index measured_rank = 0;
};

/// Random low-tubal-rank tensor P * Q (standard-normal factors of inner size
/// r) affinely rescaled onto [lo, hi]. The rescale only moves the zero-frequency
/// Fourier slice, so the tubal rank grows by at most one.
LowRankTensor generate_low_tubal_rank(Index n1, Index n2, Index n3, Index r, double lo, double hi,
                                      std::uint64_t seed);

/// Like generate_low_tubal_rank, but every factor varies smoothly over the
/// grid: P(i,r,k) and Q(r,j,k) are random cosine series with `frequencies`
/// terms and 1/(1+f) amplitude decay, so neighbouring tubes are similar.
/// frequencies = 0 picks max(1, min(n1, n2) / 4).
LowRankTensor generate_smooth_low_tubal_rank(Index n1, Index n2, Index n3, Index r, double lo, double hi,
                                             std::uint64_t seed, Index frequencies = 0);

enum class AnomalyMode { tube, entry };

struct AnomalySpec {
    double ratio = 0.0;
    double magnitude = 100.0;
    AnomalyMode mode = AnomalyMode::tube;
    std::uint64_t seed = 0;
};

/// Number of corrupted tubes (tube mode) or entries (entry mode).
Index anomaly_count(const AnomalySpec& spec, Dims d);

struct AnomalyInjection {
    Tensor3 corrupted; // t + truth
    Tensor3 truth;     // additive anomaly tensor
    SampleMask support; // tubes that carry any corruption
};

AnomalyInjection inject_anomalies(const Tensor3& t, const AnomalySpec& spec);

const char* to_string(AnomalyMode mode);
AnomalyMode parse_anomaly_mode(const std::string& text);

} // namespace rtc
