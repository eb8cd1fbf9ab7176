#include <doctest.h>

#include <algorithm>
#include <tuple>

#include "oracles.hpp"
#include "rtc/localization.hpp"

using namespace rtc;

namespace {

RadioMap random_map(std::mt19937& gen, Index n1, Index n2, Index n3, double spacing = 1.0) {
    RadioMap map;
    map.fingerprints = oracle::random_tensor(gen, n1, n2, n3, 10.0);
    map.spacing = spacing;
    return map;
}

// Every distance, sorted with the row-major tie-break, averaged by hand.
Point brute_knn(const RadioMap& map, const Eigen::VectorXd& q, Index k) {
    std::vector<std::tuple<double, Index, Index>> all;
    for (Index i = 0; i < map.fingerprints.n1(); ++i)
        for (Index j = 0; j < map.fingerprints.n2(); ++j) {
            double sq = 0.0;
            for (Index t = 0; t < q.size(); ++t) {
                const double d = map.fingerprints(i, j, t) - q(t);
                sq += d * d;
            }
            all.emplace_back(std::sqrt(sq), i, j);
        }
    std::sort(all.begin(), all.end());
    Point p;
    for (Index n = 0; n < k; ++n) {
        p.x += map.origin.x + static_cast<double>(std::get<1>(all[static_cast<std::size_t>(n)])) * map.spacing;
        p.y += map.origin.y + static_cast<double>(std::get<2>(all[static_cast<std::size_t>(n)])) * map.spacing;
    }
    p.x /= static_cast<double>(k);
    p.y /= static_cast<double>(k);
    return p;
}

} // namespace

TEST_CASE("knn matches exhaustive enumeration") {
    std::mt19937 gen(201);
    for (int trial = 0; trial < 20; ++trial) {
        const RadioMap map = random_map(gen, 6, 7, 4, 0.5 + trial % 3);
        const Eigen::VectorXd q = oracle::random_tensor(gen, 1, 1, 4, 10.0).tube(0, 0);
        for (Index k : {1, 3, 5}) {
            const LocationEstimate est = knn_localize(map, std::span<const double>(q.data(), q.size()), k);
            const Point ref = brute_knn(map, q, k);
            CHECK(est.position.x == doctest::Approx(ref.x).epsilon(1e-14));
            CHECK(est.position.y == doctest::Approx(ref.y).epsilon(1e-14));
            REQUIRE(est.neighbors.size() == static_cast<std::size_t>(k));
            for (std::size_t n = 1; n < est.neighbors.size(); ++n)
                CHECK(est.neighbors[n].distance >= est.neighbors[n - 1].distance);
        }
    }
}

TEST_CASE("knn ties resolve by row-major index") {
    RadioMap map;
    map.fingerprints = Tensor3::constant({3, 3, 2}, -50.0);
    const std::vector<double> q{-50.0, -50.0};
    const LocationEstimate est = knn_localize(map, q, 2);
    REQUIRE(est.neighbors.size() == 2);
    CHECK(est.neighbors[0].i == 0);
    CHECK(est.neighbors[0].j == 0);
    CHECK(est.neighbors[1].i == 0);
    CHECK(est.neighbors[1].j == 1);
    CHECK(est.position.x == 0.0);
    CHECK(est.position.y == 0.5);
}

TEST_CASE("knn exact match and errors") {
    std::mt19937 gen(202);
    const RadioMap map = random_map(gen, 5, 4, 3, 2.0);
    for (Index i = 0; i < 5; ++i)
        for (Index j = 0; j < 4; ++j) {
            const Eigen::VectorXd q = map.fingerprints.tube(i, j);
            const auto est = knn_localize(map, std::span<const double>(q.data(), q.size()), 1);
            CHECK(localization_error(est, map.rp_coords(i, j)) == 0.0);
        }
    const std::vector<double> q(3, 0.0);
    CHECK_THROWS_AS(knn_localize(map, q, 21), KTooLarge);
    CHECK_THROWS_AS(knn_localize(map, q, 0), KTooLarge);
    CHECK_THROWS_AS(knn_localize(map, std::vector<double>(2, 0.0), 1), DimensionMismatch);
    CHECK(localization_error({{3.0, 0.0}, {}}, {0.0, 4.0}) == 5.0);
}

TEST_CASE("property: knn is shift invariant and stays in the hull") {
    std::mt19937 gen(203);
    std::uniform_real_distribution<double> shift(-80.0, 80.0);
    for (int trial = 0; trial < 20; ++trial) {
        RadioMap map = random_map(gen, 5, 6, 3, 1.5);
        map.origin = {-2.0, 3.0};
        Eigen::VectorXd q = oracle::random_tensor(gen, 1, 1, 3, 10.0).tube(0, 0);
        const Index k = 1 + trial % 4;
        const auto before = knn_localize(map, std::span<const double>(q.data(), q.size()), k);

        const double c = std::round(shift(gen)); // integer shift keeps distances exact
        for (double& v : map.fingerprints.values())
            v += c;
        q.array() += c;
        const auto after = knn_localize(map, std::span<const double>(q.data(), q.size()), k);
        CHECK(after.position.x == doctest::Approx(before.position.x));
        CHECK(after.position.y == doctest::Approx(before.position.y));
        for (std::size_t n = 0; n < before.neighbors.size(); ++n) {
            CHECK(after.neighbors[n].i == before.neighbors[n].i);
            CHECK(after.neighbors[n].j == before.neighbors[n].j);
        }

        CHECK(after.position.x >= -2.0);
        CHECK(after.position.x <= -2.0 + 4 * 1.5);
        CHECK(after.position.y >= 3.0);
        CHECK(after.position.y <= 3.0 + 5 * 1.5);
    }
}

TEST_CASE("nse hand case and normalization") {
    // 2 x 1 grid, tubes of length 2, nothing sampled
    Tensor3 truth(2, 1, 2), est(2, 1, 2);
    truth(0, 0, 0) = 3.0;
    truth(0, 0, 1) = 4.0;
    truth(1, 0, 1) = 5.0;
    est(0, 0, 0) = 3.0;
    est(0, 0, 1) = 4.0;
    const SampleMask none(2, 1);
    CHECK(nse(est, truth, none) == 0.5);
    CHECK(nse(truth, truth, none) == 0.0);
    CHECK(nse(Tensor3(2, 1, 2), truth, none) == 1.0);

    // Sampled tubes are ignored entirely.
    const SampleMask first = SampleMask::from_indices(2, 1, {{0, 0}});
    Tensor3 wild = est;
    wild(0, 0, 0) = 1e6;
    CHECK(nse(wild, truth, first) == 1.0);

    CHECK_THROWS_AS(nse(est, truth, SampleMask::full(2, 1)), EmptyComplement);
    Tensor3 zero_off(2, 1, 2);
    zero_off(0, 0, 0) = 1.0;
    CHECK_THROWS_AS(nse(est, zero_off, first), ZeroDenominator);
    CHECK_THROWS_AS(nse(Tensor3(2, 1, 3), truth, none), ShapeMismatch);
}

TEST_CASE("property: nse of a single-tube perturbation") {
    std::mt19937 gen(204);
    const Tensor3 truth = oracle::random_tensor(gen, 6, 5, 4);
    const SampleMask omega = SampleMask::from_indices(6, 5, {{0, 0}, {1, 1}, {2, 2}});
    double denom = 0.0;
    for (auto [i, j] : omega.complement().true_indices())
        denom += truth.tube(i, j).squaredNorm();
    Tensor3 est = truth;
    est(4, 3, 0) += 2.0;
    est(4, 3, 2) -= 1.0;
    CHECK(nse(est, truth, omega) == doctest::Approx(5.0 / denom).epsilon(1e-14));
}

TEST_CASE("error cdf and percentiles") {
    const auto single = error_cdf({2.0});
    REQUIRE(single.size() == 1);
    CHECK(single[0].error == 2.0);
    CHECK(single[0].fraction == 1.0);

    const auto cdf = error_cdf({4.0, 1.0, 3.0, 2.0});
    REQUIRE(cdf.size() == 4);
    CHECK(cdf[0].error == 1.0);
    CHECK(cdf[0].fraction == 0.25);
    CHECK(cdf[3].fraction == 1.0);
    CHECK(cdf_percentile(cdf, 0.8) == 3.2);
    CHECK(cdf_percentile(cdf, 1.0) == 4.0);
    CHECK(cdf_percentile(cdf, 0.1) == 1.0);

    const auto flat = error_cdf({1.5, 1.5, 1.5});
    for (const auto& p : flat)
        CHECK(p.error == 1.5);
    CHECK(cdf_percentile(flat, 0.5) == 1.5);

    CHECK_THROWS_AS(error_cdf({}), EmptyInput);
    CHECK_THROWS_AS(cdf_percentile(cdf, 0.0), InvalidArgument);
    CHECK_THROWS_AS(cdf_percentile(cdf, 1.5), InvalidArgument);
}

TEST_CASE("property: cdf is non-decreasing and ends at one") {
    std::mt19937 gen(205);
    std::exponential_distribution<double> e(0.5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> errs(1 + trial * 7);
        for (double& v : errs)
            v = e(gen);
        const auto cdf = error_cdf(errs);
        for (std::size_t n = 1; n < cdf.size(); ++n) {
            CHECK(cdf[n].error >= cdf[n - 1].error);
            CHECK(cdf[n].fraction > cdf[n - 1].fraction);
        }
        CHECK(cdf.back().fraction == 1.0);
    }
}

TEST_CASE("radio map helpers") {
    RadioMap map;
    map.fingerprints = Tensor3::constant({2, 2, 2}, -90.0);
    map.spacing = 2.5;
    map.origin = {1.0, -1.0};
    CHECK(map.rp_coords(1, 1).x == 3.5);
    CHECK(map.rp_coords(1, 1).y == 1.5);
    CHECK(map.above_floor());
    map.fingerprints(0, 1, 1) = -111.0;
    CHECK_FALSE(map.above_floor());
}
