#include <doctest.h>

#include <cmath>
#include <vector>

#include "mpbs/analysis.hpp"
#include "mpbs/errors.hpp"

using namespace mpbs;
using namespace mpbs::analysis;

namespace {

std::vector<ConvergencePoint> power_law(double slope, double offset, Scheme scheme = Scheme::mpdata) {
    std::vector<ConvergencePoint> pts;
    for (double x : {-8.0, -7.0, -6.0, -5.0, -4.5}) pts.push_back({x, offset + slope * x, scheme, {}});
    return pts;
}

}  // namespace

TEST_CASE("error measure") {
    const std::vector<double> exact{1.0, 2.0, 3.0, 4.0};
    SUBCASE("identical fields") {
        CHECK(error_measure(ScalarField::from_interior(exact), exact, 4, 10) == 0.0);
    }
    SUBCASE("constant offset") {
        const double delta = 0.3;
        std::vector<double> shifted = exact;
        for (auto& v : shifted) v += delta;
        for (std::size_t n_t : {1u, 4u, 25u}) {
            CHECK(error_measure(ScalarField::from_interior(shifted), exact, 4, n_t) ==
                  doctest::Approx(delta / std::sqrt(static_cast<double>(n_t))).epsilon(1e-14));
        }
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(error_measure(ScalarField::from_interior(exact), std::vector<double>{1, 2}, 4, 1), ConfigError);
        CHECK_THROWS_AS(error_measure(ScalarField::from_interior(exact), exact, 4, 0), ConfigError);
    }
}

TEST_CASE("order fitting") {
    CHECK(std::abs(fit_order(power_law(2.0, -3.0)) - 2.0) < 1e-12);
    CHECK(std::abs(fit_order(power_law(1.0, 0.7)) - 1.0) < 1e-12);
    CHECK(std::abs(fit_order(power_law(0.37, 5.0)) - 0.37) < 1e-12);

    auto mixed = power_law(2.0, -3.0, Scheme::mpdata);
    const auto up = power_law(1.0, -1.0, Scheme::upwind);
    mixed.insert(mixed.end(), up.begin(), up.end());
    CHECK(std::abs(fit_order(mixed, Scheme::mpdata) - 2.0) < 1e-12);
    CHECK(std::abs(fit_order(mixed, Scheme::upwind) - 1.0) < 1e-12);

    auto two = power_law(2.0, 0.0);
    two.resize(2);
    CHECK_THROWS_AS(fit_order(two), ConfigError);
    two.resize(1);
    CHECK_THROWS_AS(fit_order(two), ConfigError);
}

TEST_CASE("corridor sweeps") {
    const CorridorStudy study;
    SUBCASE("single point cannot be fitted") {
        const double c[] = {0.01};
        const auto sweep = sweep_spatial(2.0, c, study);
        CHECK(sweep.points.size() == 2);  // one per scheme
        CHECK_THROWS_AS(fit_order(sweep.points, Scheme::mpdata), ConfigError);
    }
    SUBCASE("points carry their own resolution") {
        const auto sweep = sweep_spatial(2.0, kSweepCourants, study);
        REQUIRE(sweep.points.size() == 8);
        for (const auto& p : sweep.points) {
            CHECK(std::isfinite(p.log2_error));
            CHECK(p.log2_abscissa == doctest::Approx(std::log2(p.config.courant)));
            CHECK(p.config.lambda_squared == 2.0);
            CHECK(p.config.n_t >= 4u);
        }
    }
    SUBCASE("corrective iteration beats upwind at every shared point") {
        for (double l2 : {2.0, 4.0, 8.0}) {
            const auto sweep = sweep_spatial(l2, kSweepCourants, study);
            for (const auto& a : sweep.points) {
                for (const auto& b : sweep.points) {
                    if (a.scheme == Scheme::mpdata && b.scheme == Scheme::upwind && a.config.n_t == b.config.n_t &&
                        a.config.n_x == b.config.n_x) {
                        CHECK(a.log2_error < b.log2_error);
                    }
                }
            }
        }
    }
    SUBCASE("sub-critical lambda^2 is flagged and excluded") {
        const double lambdas[] = {1.0, 2.0, 4.0, 8.0};
        const auto sweep = sweep_temporal(0.01, lambdas, study);
        CHECK_FALSE(sweep.flagged.empty());
        for (const auto& p : sweep.points) CHECK(p.config.lambda_squared >= 2.0);
        CHECK(sweep.points.size() == 6);
    }
    SUBCASE("too few timesteps are flagged") {
        const double c[] = {0.2, 0.01};
        const auto sweep = sweep_spatial(8.0, c, study);
        CHECK(sweep.flagged.size() == 1);
        CHECK(sweep.points.size() == 2);
    }
    SUBCASE("errors shrink with resolution") {
        const auto sweep = sweep_spatial(2.0, kSweepCourants, study);
        CHECK(fit_order(sweep.points, Scheme::mpdata) > 1.0);
        CHECK(fit_order(sweep.points, Scheme::upwind) > 0.5);
    }
}

TEST_CASE("American table") {
    AmericanTableSettings settings;
    settings.tenures = {0.25};
    settings.spots = {80.0, 100.0};
    const double courants[] = {0.02, 0.01, 0.005};
    const auto rows = american_table(courants, settings);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        REQUIRE(row.log2_error.size() == 3);
        CHECK(row.log2_error[1] < row.log2_error[0]);
        CHECK(row.log2_error[2] < row.log2_error[1]);
        CHECK(row.resolutions[2].lambda_squared == 2.0);
    }
    CHECK(rows[0].price == doctest::Approx(19.998).epsilon(0.05 / 20.0));
    CHECK(rows[0].bs93 == doctest::Approx(20.0).epsilon(1e-4));
    CHECK(rows[0].european == doctest::Approx(18.089).epsilon(0.0005 / 18.089));
}
