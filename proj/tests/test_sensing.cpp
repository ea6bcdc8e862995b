#include <doctest.h>

#include <cmath>
#include <set>

#include "cavity_cs/sensing.hpp"
#include "oracles.hpp"

using namespace cavity_cs;
using cplx = std::complex<double>;

namespace {

const TimeGrid kGrid{0.0, 1000.0, 1000, 32};

int sign_changes(const Eigen::RowVectorXd& row) {
    int changes = 0;
    for (Eigen::Index i = 1; i < row.size(); ++i)
        if (row(i) != row(i - 1)) ++changes;
    return changes;
}

}  // namespace

TEST_CASE("sample_flip_schedule draws sorted distinct indices") {
    Rng stream(1234);
    SUBCASE("K = 0 gives an empty schedule") {
        CHECK(sample_flip_schedule(stream, 0, 1000).flips.empty());
    }
    SUBCASE("K = N-1 exhausts the index range") {
        const FlipSchedule s = sample_flip_schedule(stream, 9, 10);
        REQUIRE(s.flips.size() == 9);
        for (int j = 0; j < 9; ++j) CHECK(s.flips[static_cast<std::size_t>(j)] == j + 1);
    }
    SUBCASE("K = 20, N = 1000") {
        const FlipSchedule s = sample_flip_schedule(stream, 20, 1000);
        REQUIRE(s.flips.size() == 20);
        std::set<int> seen;
        for (std::size_t j = 0; j < s.flips.size(); ++j) {
            CHECK(s.flips[j] >= 1);
            CHECK(s.flips[j] <= 999);
            if (j > 0) CHECK(s.flips[j] > s.flips[j - 1]);
            seen.insert(s.flips[j]);
        }
        CHECK(seen.size() == 20);
    }
    SUBCASE("K beyond N-1 is an argument error") {
        CHECK_THROWS_AS(sample_flip_schedule(stream, 1000, 1000), std::invalid_argument);
    }
    SUBCASE("equal streams draw equal schedules") {
        Rng a(55);
        Rng b(55);
        CHECK(sample_flip_schedule(a, 20, 1000).flips == sample_flip_schedule(b, 20, 1000).flips);
    }
}

TEST_CASE("build_row sign structure") {
    SUBCASE("no flips keeps every entry +1") {
        const Eigen::RowVectorXd row = build_row(FlipSchedule{{}, 0}, 4);
        for (int n = 0; n < 4; ++n) CHECK(row(n) == 1.0);
    }
    SUBCASE("single flip at index 2 of 4") {
        const Eigen::RowVectorXd row = build_row(FlipSchedule{{2}, 0}, 4);
        CHECK(row(0) == -1.0);
        CHECK(row(1) == -1.0);
        CHECK(row(2) == 1.0);
        CHECK(row(3) == 1.0);
    }
    SUBCASE("flips at (1,3) of 5, enumerated by hand") {
        const Eigen::RowVectorXd row = build_row(FlipSchedule{{1, 3}, 0}, 5);
        CHECK(row(0) == 1.0);
        CHECK(row(1) == -1.0);
        CHECK(row(2) == -1.0);
        CHECK(row(3) == 1.0);
        CHECK(row(4) == 1.0);
    }
    SUBCASE("invalid schedules are rejected") {
        CHECK_THROWS_AS(build_row(FlipSchedule{{0}, 0}, 4), std::invalid_argument);
        CHECK_THROWS_AS(build_row(FlipSchedule{{4}, 0}, 4), std::invalid_argument);
        CHECK_THROWS_AS(build_row(FlipSchedule{{2, 2}, 0}, 4), std::invalid_argument);
    }
}

TEST_CASE("build_matrix row invariants") {
    SUBCASE("M = 1, K = 0 is a single all-ones row") {
        const SensingMatrix a = build_matrix(9, 1, 0, 8);
        CHECK(a.rows() == 1);
        CHECK(a.entries.row(0).minCoeff() == 1.0);
    }
    SUBCASE("production scale: 220 x 1000 with 20 sign changes per row") {
        const SensingMatrix a = build_matrix(2024, 220, 20, 1000);
        REQUIRE(a.rows() == 220);
        REQUIRE(a.cols() == 1000);
        REQUIRE(a.schedules.size() == 220);
        for (Eigen::Index m = 0; m < a.rows(); ++m) {
            const Eigen::RowVectorXd row = a.entries.row(m);
            CHECK(sign_changes(row) == 20);
            CHECK(row(999) == 1.0);                       // last entry +1
            CHECK(row(0) == 1.0);                         // (-1)^K with K even
            CHECK(row.cwiseAbs().maxCoeff() == 1.0);
            CHECK(row.cwiseAbs().minCoeff() == 1.0);
        }
        // rows come from independent streams
        CHECK(a.schedules[0].flips != a.schedules[1].flips);
    }
    SUBCASE("odd K starts at -1") {
        const SensingMatrix a = build_matrix(7, 4, 3, 64);
        for (Eigen::Index m = 0; m < a.rows(); ++m) CHECK(a.entries(m, 0) == -1.0);
    }
    SUBCASE("same seed rebuilds the identical matrix") {
        const SensingMatrix a = build_matrix(31, 16, 5, 128);
        const SensingMatrix b = build_matrix(31, 16, 5, 128);
        CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("measure is the complex matrix action") {
    SUBCASE("zero signal measures zero") {
        const SensingMatrix a = build_matrix(1, 8, 3, 16);
        const TimeGrid g{0.0, 16.0, 16, 4};
        const ComplexSeries beta{SeriesKind::beta, g,
                                 std::vector<cplx>(16, cplx{0.0, 0.0})};
        const MeasurementVector v = measure(a, beta);
        CHECK(v.provenance == MeasurementVector::Provenance::matrix);
        for (Eigen::Index m = 0; m < v.values.size(); ++m) CHECK(std::abs(v.values(m)) == 0.0);
    }
    SUBCASE("all-ones row sums the signal") {
        SensingMatrix a = build_matrix(1, 1, 0, 2);
        const TimeGrid g{0.0, 2.0, 2, 4};
        const ComplexSeries beta{SeriesKind::beta, g, {{1.0, 0.0}, {0.0, 1.0}}};
        const MeasurementVector v = measure(a, beta);
        CHECK(v.values(0) == cplx(1.0, 1.0));
    }
    SUBCASE("dimension mismatch is an error") {
        const SensingMatrix a = build_matrix(1, 4, 2, 32);
        const TimeGrid g{0.0, 16.0, 16, 4};
        const ComplexSeries beta{SeriesKind::beta, g, std::vector<cplx>(16, cplx{0.0, 0.0})};
        CHECK_THROWS_AS(measure(a, beta), std::invalid_argument);
    }
}

TEST_CASE("simulate_measurement closed cases") {
    const SquarePulse pulse{0.1, 200.0, 0.2, 0.0};
    SUBCASE("no flips gives the full-window amplitude") {
        const cplx direct = integrate_alpha(pulse, 0.02, 0.0, 1000.0, kGrid);
        const cplx sim = simulate_measurement(pulse, 0.02, kGrid, FlipSchedule{{}, 0});
        CHECK(oracles::rel_diff(direct, sim) < 1e-14);
    }
    SUBCASE("one flip negates the first segment") {
        const int k = 137;
        const double tk = kGrid.time_at(k);
        const cplx expect = integrate_alpha(pulse, 0.02, tk, 1000.0, kGrid) -
                            integrate_alpha(pulse, 0.02, 0.0, tk, kGrid);
        const cplx sim = simulate_measurement(pulse, 0.02, kGrid, FlipSchedule{{k}, 0});
        CHECK(oracles::rel_diff(expect, sim) < 1e-12);
    }
}

TEST_CASE("master property: matrix route equals recursion route") {
    Rng rng(777);
    const SquarePulse pulse{0.1, 200.0, 0.2, 0.0};
    const RandomSmooth smooth(4, 5, 8, 0.1, 0.0, 1000.0);
    for (int trial = 0; trial < 40; ++trial) {
        const bool use_square = trial % 2 == 0;
        const DrivingProtocol p =
            use_square ? DrivingProtocol(pulse) : DrivingProtocol(smooth);
        NoiseSpec noise;
        if (trial % 3 == 0) noise = NoiseSpec{true, 0.05, 1000 + static_cast<std::uint64_t>(trial)};
        const int K = static_cast<int>(rng.below(100));
        Rng stream(rng.next_u64());
        FlipSchedule s = sample_flip_schedule(stream, K, kGrid.steps);

        const ComplexSeries beta = discretize_beta(p, 0.02, kGrid, noise);
        const Eigen::RowVectorXd row = build_row(s, kGrid.steps);
        cplx via_matrix{0.0, 0.0};
        for (int n = 0; n < kGrid.steps; ++n)
            via_matrix += row(n) * beta.values[static_cast<std::size_t>(n)];
        const cplx via_recursion = simulate_measurement(p, 0.02, kGrid, s, noise);
        CHECK(oracles::rel_diff(via_matrix, via_recursion) < 1e-9);
    }
}

TEST_CASE("property: measurement is linear in the signal") {
    const SensingMatrix a = build_matrix(5, 12, 7, 64);
    const TimeGrid g{0.0, 64.0, 64, 4};
    Rng rng(31337);
    std::vector<cplx> v1(64);
    std::vector<cplx> v2(64);
    std::vector<cplx> vsum(64);
    for (std::size_t i = 0; i < 64; ++i) {
        v1[i] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        v2[i] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        vsum[i] = v1[i] + v2[i];
    }
    const MeasurementVector m1 = measure(a, {SeriesKind::beta, g, v1});
    const MeasurementVector m2 = measure(a, {SeriesKind::beta, g, v2});
    const MeasurementVector ms = measure(a, {SeriesKind::beta, g, vsum});
    for (Eigen::Index m = 0; m < ms.values.size(); ++m)
        CHECK(oracles::rel_diff(ms.values(m), m1.values(m) + m2.values(m)) < 1e-12);
}

TEST_CASE("flips preserve the photon number exactly") {
    Rng stream(2468);
    const FlipSchedule s = sample_flip_schedule(stream, 25, kGrid.steps);
    const RandomSmooth p(6, 5, 8, 0.1, 0.0, 1000.0);
    const NoiseSpec noise{true, 0.05, 5};
    const MeasurementTrace trace = simulate_measurement_trace(p, 0.02, kGrid, s, noise);
    REQUIRE(trace.before_flip.size() == 25);
    REQUIRE(trace.after_flip.size() == 25);
    for (std::size_t j = 0; j < 25; ++j) {
        CHECK(std::abs(trace.before_flip[j]) == std::abs(trace.after_flip[j]));
        CHECK(trace.after_flip[j] == -trace.before_flip[j]);
    }
}
