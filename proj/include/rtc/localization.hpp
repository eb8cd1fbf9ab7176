#pragma once

#include <span>
#include <vector>

#include "rtc/sampling.hpp"
#include "rtc/tensor.hpp"

namespace rtc {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Fingerprint database: one RSS tube per reference point of a regular grid.
struct RadioMap {
    Tensor3 fingerprints;      // n1 x n2 x n3, dBm
    double spacing = 1.0;      // metres between adjacent reference points
    Point origin{};            // coordinates of reference point (0, 0)
    double floor_value = -110; // RSS assigned to undetected access points

    Point rp_coords(Index i, Index j) const {
        return {origin.x + static_cast<double>(i) * spacing, origin.y + static_cast<double>(j) * spacing};
    }

    /// True when no fingerprint dips below floor_value (1e-9 slack).
    /// Recovered maps may legitimately fail this.
    bool above_floor() const;
};

struct Neighbor {
    Index i = 0;
    Index j = 0;
    double distance = 0.0;
};

struct LocationEstimate {
    Point position;
    std::vector<Neighbor> neighbors; // nearest first
};

/// Centroid of the k reference points whose fingerprints are nearest to
/// `query` in Euclidean RSS distance. Equal distances are resolved by
/// row-major reference-point index.
LocationEstimate knn_localize(const RadioMap& map, std::span<const double> query, Index k);

double localization_error(const LocationEstimate& est, Point truth);

/// Normalized square error over the unsampled tubes.
double nse(const Tensor3& estimate, const Tensor3& truth, const SampleMask& omega);

struct CdfPoint {
    double error = 0.0;
    double fraction = 0.0;
};

/// Pairs (e_(i), i/n) over the sorted errors.
std::vector<CdfPoint> error_cdf(std::vector<double> errors);

/// Error at cumulative fraction p in (0, 1], interpolating linearly between
/// consecutive CDF points; fractions below 1/n map to the smallest error.
double cdf_percentile(const std::vector<CdfPoint>& cdf, double p);

} // namespace rtc
