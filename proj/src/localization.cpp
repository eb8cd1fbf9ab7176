#include "rtc/localization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rtc {

bool RadioMap::above_floor() const {
    return fingerprints.empty() || fingerprints.flat().minCoeff() >= floor_value - 1e-9;
}

LocationEstimate knn_localize(const RadioMap& map, std::span<const double> query, Index k) {
    const Tensor3& fp = map.fingerprints;
    const Index n1 = fp.n1();
    const Index n2 = fp.n2();
    if (static_cast<Index>(query.size()) != fp.n3())
        throw DimensionMismatch("query length differs from the number of access points");
    if (k < 1 || k > n1 * n2)
        throw KTooLarge("k must lie in [1, number of reference points]");

    const Eigen::Map<const Eigen::VectorXd> q(query.data(), static_cast<Index>(query.size()));
    std::vector<double> dist(static_cast<std::size_t>(n1 * n2));
    for (Index i = 0; i < n1; ++i)
        for (Index j = 0; j < n2; ++j)
            dist[static_cast<std::size_t>(i * n2 + j)] = (fp.tube(i, j) - q).norm();

    std::vector<Index> order(dist.size());
    std::iota(order.begin(), order.end(), Index{0});
    const auto closer = [&](Index a, Index b) {
        const double da = dist[static_cast<std::size_t>(a)];
        const double db = dist[static_cast<std::size_t>(b)];
        return da < db || (da == db && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + k, order.end(), closer);

    LocationEstimate est;
    est.neighbors.reserve(static_cast<std::size_t>(k));
    double sx = 0.0;
    double sy = 0.0;
    for (Index n = 0; n < k; ++n) {
        const Index idx = order[static_cast<std::size_t>(n)];
        const Index i = idx / n2;
        const Index j = idx % n2;
        est.neighbors.push_back({i, j, dist[static_cast<std::size_t>(idx)]});
        const Point p = map.rp_coords(i, j);
        sx += p.x;
        sy += p.y;
    }
    est.position = {sx / static_cast<double>(k), sy / static_cast<double>(k)};
    return est;
}

double localization_error(const LocationEstimate& est, Point truth) {
    return std::hypot(est.position.x - truth.x, est.position.y - truth.y);
}

double nse(const Tensor3& estimate, const Tensor3& truth, const SampleMask& omega) {
    if (!estimate.same_shape(truth))
        throw ShapeMismatch("nse: estimate and truth differ in shape");
    if (omega.n1() != truth.n1() || omega.n2() != truth.n2())
        throw ShapeMismatch("nse: mask does not match the tensor grid");
    if (omega.count() == omega.n1() * omega.n2())
        throw EmptyComplement("nse: every tube is sampled, nothing to evaluate");

    double num = 0.0;
    double den = 0.0;
    for (Index i = 0; i < truth.n1(); ++i)
        for (Index j = 0; j < truth.n2(); ++j) {
            if (omega.contains(i, j))
                continue;
            num += (estimate.tube(i, j) - truth.tube(i, j)).squaredNorm();
            den += truth.tube(i, j).squaredNorm();
        }
    if (den == 0.0)
        throw ZeroDenominator("nse: ground truth is zero on the unsampled tubes");
    return num / den;
}

std::vector<CdfPoint> error_cdf(std::vector<double> errors) {
    if (errors.empty())
        throw EmptyInput("error_cdf: no errors given");
    std::sort(errors.begin(), errors.end());
    const double n = static_cast<double>(errors.size());
    std::vector<CdfPoint> cdf;
    cdf.reserve(errors.size());
    for (std::size_t i = 0; i < errors.size(); ++i)
        cdf.push_back({errors[i], static_cast<double>(i + 1) / n});
    return cdf;
}

double cdf_percentile(const std::vector<CdfPoint>& cdf, double p) {
    if (cdf.empty())
        throw EmptyInput("cdf_percentile: empty CDF");
    if (!(p > 0.0 && p <= 1.0))
        throw InvalidArgument("percentile fraction must lie in (0, 1]");
    if (p <= cdf.front().fraction)
        return cdf.front().error;
    for (std::size_t i = 1; i < cdf.size(); ++i) {
        if (p <= cdf[i].fraction) {
            const CdfPoint& lo = cdf[i - 1];
            const CdfPoint& hi = cdf[i];
            const double t = (p - lo.fraction) / (hi.fraction - lo.fraction);
            return lo.error + t * (hi.error - lo.error);
        }
    }
    return cdf.back().error;
}

} // namespace rtc
