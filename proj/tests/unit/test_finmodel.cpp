#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mpbs/errors.hpp"
#include "mpbs/finmodel.hpp"
#include "mpbs/oracles.hpp"

using namespace mpbs;

namespace {

const MpdataOptions kAll{2, true, true, true};

InstrumentSpec coarse_corridor() { return InstrumentSpec::corridor(0.0075, 0.0175, 0.5); }
const MarketParams kCorridorMarket{0.008, 0.6};

Resolution coarse_corridor_grid() {
    const auto inst = coarse_corridor();
    return size_grid_steps(10, 2.0, kCorridorMarket, inst.tenure, default_domain(inst, kCorridorMarket));
}

Resolution manual_grid(double x_lo, double dx, std::size_t n_x, double tenure, std::size_t n_t) {
    Resolution r;
    r.delta_x = dx;
    r.n_x = n_x;
    r.x_min = x_lo;
    r.n_t = n_t;
    r.delta_t = tenure / static_cast<double>(n_t);
    r.domain = {std::exp(x_lo), std::exp(x_lo + dx * static_cast<double>(n_x))};
    return r;
}

}  // namespace

TEST_CASE("transport coefficients") {
    auto c = transform_params(0.08, 0.2);
    CHECK(c.u == doctest::Approx(0.06).epsilon(1e-14));
    CHECK(c.nu == doctest::Approx(-0.02).epsilon(1e-14));
    c = transform_params(0.008, 0.6);
    CHECK(c.u == doctest::Approx(-0.172).epsilon(1e-14));
    CHECK(c.nu == doctest::Approx(-0.18).epsilon(1e-14));
    c = transform_params(0.02, 0.2);
    CHECK(c.u == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(transform_params(0.05, 0.0), ConfigError);
    CHECK_THROWS_AS(transform_params(0.05, -0.1), ConfigError);
}

TEST_CASE("payoffs") {
    const auto corridor = InstrumentSpec::corridor(0.75, 1.75, 1.0);
    CHECK(payoff(corridor, 0.5) == 0.0);
    CHECK(payoff(corridor, 1.25) == doctest::Approx(0.5));
    CHECK(payoff(corridor, 2.5) == doctest::Approx(1.0));
    CHECK(payoff(InstrumentSpec::put(100, 1), 80) == 20.0);
    CHECK(payoff(InstrumentSpec::american_put(100, 1), 120) == 0.0);
    CHECK(payoff(InstrumentSpec::call(100, 1), 120) == 20.0);
    CHECK(payoff(InstrumentSpec::forward(100, 1), 80) == -20.0);
}

TEST_CASE("instrument validation") {
    CHECK_THROWS_AS(InstrumentSpec::corridor(1.75, 0.75, 1).validate(), ConfigError);
    CHECK_THROWS_AS(InstrumentSpec::corridor(0.0, 0.75, 1).validate(), ConfigError);
    CHECK_THROWS_AS(InstrumentSpec::put(-1, 1).validate(), ConfigError);
    CHECK_THROWS_AS(InstrumentSpec::put(100, 0).validate(), ConfigError);
    auto spec = InstrumentSpec::call(100, 1);
    spec.notional = 0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    for (auto kind : {InstrumentKind::corridor, InstrumentKind::call, InstrumentKind::put,
                      InstrumentKind::forward, InstrumentKind::american_put}) {
        CHECK(parse_instrument_kind(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(parse_instrument_kind("swaption"), ConfigError);
}

TEST_CASE("terminal condition") {
    const GridSpec grid{std::log(50.0), 0.01, 140, 0.001, 1};
    SUBCASE("zero rate gives the raw payoff") {
        const auto inst = InstrumentSpec::put(100, 0.25);
        const ScalarField f = terminal_condition(inst, {0.0, 0.2}, grid);
        for (std::size_t i = 0; i < grid.n_x; ++i) {
            CHECK(f[static_cast<std::ptrdiff_t>(i)] == payoff(inst, std::exp(grid.center(i))));
        }
    }
    SUBCASE("discounted put value at S = 80") {
        const GridSpec g{std::log(80.0) - 0.005, 0.01, 100, 0.001, 1};
        const ScalarField f = terminal_condition(InstrumentSpec::put(100, 0.25), {0.08, 0.2}, g);
        CHECK(f[0] == doctest::Approx(20.0 * std::exp(-0.02)).epsilon(1e-12));
        CHECK(f[0] == doctest::Approx(19.604).epsilon(1e-4));
    }
    SUBCASE("corridor is zero below the lower strike") {
        const auto res = coarse_corridor_grid();
        const GridSpec g = res.grid();
        const ScalarField f = terminal_condition(coarse_corridor(), kCorridorMarket, g);
        for (std::size_t i = 0; i < g.n_x; ++i) {
            if (g.center(i) < std::log(0.0075)) CHECK(f[static_cast<std::ptrdiff_t>(i)] == 0.0);
        }
    }
    SUBCASE("doubling the tenure scales the maximum by the discount ratio") {
        const auto a = terminal_condition(InstrumentSpec::put(100, 0.5), {0.08, 0.2}, grid);
        const auto b = terminal_condition(InstrumentSpec::put(100, 1.0), {0.08, 0.2}, grid);
        CHECK(b.interior_max() < a.interior_max());
        CHECK(b.interior_max() / a.interior_max() == doctest::Approx(std::exp(-0.04)).epsilon(1e-12));
    }
    SUBCASE("strike near the edge warns") {
        std::vector<std::string> warnings;
        terminal_condition(InstrumentSpec::put(50.5, 1), {0.08, 0.2}, grid, &warnings);
        CHECK(warnings.size() == 1);
        warnings.clear();
        terminal_condition(InstrumentSpec::put(100, 1), {0.08, 0.2}, grid, &warnings);
        CHECK(warnings.empty());
    }
}

TEST_CASE("grid sizing") {
    const MarketParams market{0.08, 0.2};
    SUBCASE("closed-form step sizes") {
        const auto r = size_grid(0.005, 2.0, market, 0.25, kAmericanDomain);
        // dx = lambda^2 sigma^2 C / |u|, dt = C dx / |u|
        const double dx = 2.0 * 0.04 * 0.005 / 0.06;
        const double dt = 0.005 * dx / 0.06;
        CHECK(dx == doctest::Approx(6.7e-3).epsilon(0.01));
        CHECK(r.n_t == static_cast<std::size_t>(std::llround(0.25 / dt)));
        CHECK(r.delta_x == doctest::Approx(dx).epsilon(1e-9));
        CHECK(r.delta_x * r.delta_x / (0.04 * r.delta_t) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(0.06 * r.delta_t / r.delta_x == doctest::Approx(r.courant).epsilon(1e-12));
    }
    SUBCASE("doubling the Courant target doubles the grid step") {
        const auto a = size_grid(0.005, 2.0, market, 3.0, kAmericanDomain);
        const auto b = size_grid(0.01, 2.0, market, 3.0, kAmericanDomain);
        CHECK(b.delta_x / a.delta_x == doctest::Approx(2.0).epsilon(0.01));
    }
    SUBCASE("round trip holds for every configuration") {
        for (double c : {0.0025, 0.005, 0.01, 0.02, 0.05}) {
            for (double l2 : {2.0, 3.0, 4.0, 8.0, 16.0}) {
                for (double t : {0.25, 0.5, 3.0}) {
                    const auto r = size_grid(c, l2, market, t, kAmericanDomain);
                    CHECK(static_cast<double>(r.n_t) * r.delta_t == doctest::Approx(t).epsilon(1e-14));
                    const double realized = r.delta_x * r.delta_x / (0.04 * r.delta_t);
                    CHECK(std::abs(realized - l2) < 1e-12);
                    CHECK(r.x_min + static_cast<double>(r.n_x) * r.delta_x >= std::log(500.0) - 1e-12);
                }
            }
        }
    }
    SUBCASE("ten steps at lambda^2 = 2 give about thirty cells") {
        const auto r = coarse_corridor_grid();
        CHECK(r.n_t == 10);
        CHECK(r.n_x >= 25);
        CHECK(r.n_x <= 35);
    }
    SUBCASE("zero drift cannot target a Courant number") {
        CHECK_THROWS_AS(size_grid(0.01, 2.0, {0.02, 0.2}, 1.0, kAmericanDomain), ConfigError);
        CHECK_NOTHROW(size_grid_steps(100, 2.0, {0.02, 0.2}, 1.0, kAmericanDomain));
    }
    SUBCASE("aligning puts a cell centre on the spot") {
        const auto r = align_to_spot(size_grid(0.005, 2.0, market, 0.25, kAmericanDomain), 93.7);
        const double p = (std::log(93.7) - r.x_min) / r.delta_x - 0.5;
        CHECK(std::abs(p - std::round(p)) < 1e-9);
        CHECK_THROWS_AS(align_to_spot(r, 600.0), ConfigError);
        CHECK_THROWS_AS(align_to_spot(r, 0.4), ConfigError);
    }
}

TEST_CASE("price extraction") {
    const GridSpec grid{0.0, 0.1, 10, 0.01, 1};
    ScalarField f(10);
    SUBCASE("exact node") {
        f[4] = 3.229;
        CHECK(extract_price(f, grid, std::exp(grid.center(4))) == 3.229);
    }
    SUBCASE("linear in x is reproduced") {
        for (std::ptrdiff_t i = 0; i < 10; ++i) f[i] = 2.0 + 3.0 * grid.center(static_cast<std::size_t>(i));
        for (double x : {0.17, 0.33, 0.5, 0.91}) {
            CHECK(extract_price(f, grid, std::exp(x)) == doctest::Approx(2.0 + 3.0 * x).epsilon(1e-12));
        }
    }
    SUBCASE("outside the interior is rejected") {
        CHECK_THROWS_AS(extract_price(f, grid, std::exp(-0.5)), ConfigError);
        CHECK_THROWS_AS(extract_price(f, grid, std::exp(2.0)), ConfigError);
        CHECK_THROWS_AS(extract_price(f, grid, -1.0), ConfigError);
    }
}

TEST_CASE("European pricing") {
    SUBCASE("coarse corridor stays within one percent of the notional range") {
        const auto inst = coarse_corridor();
        const double spot = std::sqrt(0.0075 * 0.0175);
        const auto pr = price_european(inst, kCorridorMarket, coarse_corridor_grid(), kAll, spot);
        const double exact = oracles::corridor_value(spot, 0.0075, 0.0175, 0.008, 0.6, 0.5);
        CHECK(std::abs(pr.price - exact) < 0.01 * 0.01);
        CHECK(pr.solution.interior_min() >= 0.0);
        CHECK(pr.solution.interior_max() <= pr.terminal.interior_max());
        CHECK(pr.stability.satisfied);
    }
    SUBCASE("near-zero volatility forward is the discounted forward") {
        const MarketParams market{0.05, 1e-6};
        const auto r = align_to_spot(manual_grid(std::log(50.0), 0.01, 140, 1.0, 100), 100.0);
        const auto pr = price_european(InstrumentSpec::forward(100, 1.0), market, r, kAll, 100.0);
        CHECK(pr.price == doctest::Approx(100.0 - 100.0 * std::exp(-0.05)).epsilon(1e-4));
    }
    SUBCASE("deep in-the-money call matches the closed form") {
        const MarketParams market{0.08, 0.2};
        const auto inst = InstrumentSpec::call(1.0, 0.25);
        const auto r = align_to_spot(size_grid(0.005, 2.0, market, 0.25, {50.0, 200.0}), 100.0);
        const auto pr = price_european(inst, market, r, kAll, 100.0, {Boundary::log_linear, false});
        const double exact = oracles::bs_call({100.0, 1.0, 0.08, 0.2, 0.25});
        CHECK(exact == doctest::Approx(100.0 - std::exp(-0.02)).epsilon(1e-12));
        CHECK(pr.price == doctest::Approx(exact).epsilon(1e-4));
    }
    SUBCASE("non-negative payoffs give non-negative prices everywhere") {
        const MarketParams market{0.08, 0.2};
        for (const auto& inst : {InstrumentSpec::put(100, 0.5), InstrumentSpec::call(100, 0.5)}) {
            for (const auto& o : {MpdataOptions{1}, MpdataOptions{2}, kAll, MpdataOptions{2, true, false, true}}) {
                const auto r = size_grid(0.01, 2.0, market, 0.5, default_domain(inst, market));
                const auto pr = price_european(inst, market, r, o, 100.0);
                CHECK(pr.solution.interior_min() >= 0.0);
            }
        }
    }
    SUBCASE("limited corridor stays inside the discounted payoff envelope") {
        const auto inst = coarse_corridor();
        for (double c : {0.005, 0.01, 0.02}) {
            const auto r = size_grid(c, 2.0, kCorridorMarket, 0.5, default_domain(inst, kCorridorMarket));
            const auto pr = price_european(inst, kCorridorMarket, r, kAll, 0.0125);
            const double cap = std::exp(-0.008 * 0.5) * (0.0175 - 0.0075) * (1.0 + 1e-12);
            CHECK(pr.solution.interior_min() >= 0.0);
            CHECK(pr.solution.interior_max() <= cap);
        }
    }
    SUBCASE("sub-critical lambda^2 is refused before integrating") {
        const MarketParams market{0.08, 0.2};
        const auto r = size_grid(0.005, 0.5, market, 0.25, {50.0, 200.0});
        CHECK_THROWS_AS(price_european(InstrumentSpec::put(100, 0.25), market, r, kAll, 100.0), StabilityError);
    }
}

TEST_CASE("volatility dependence of a linear payoff is a second-order truncation effect") {
    // spread of the spot value across sigma in {0.1, 0.2, 0.4} at two resolutions
    auto spread = [](double dx, std::size_t n_t) {
        const double tenure = 0.25;
        const auto n_x = static_cast<std::size_t>(6.0 / dx);
        const auto r = align_to_spot(manual_grid(std::log(100.0) - 3.0, dx, n_x, tenure, n_t), 100.0);
        std::vector<double> prices;
        for (double sigma : {0.1, 0.2, 0.4}) {
            prices.push_back(price_european(InstrumentSpec::forward(1.0, tenure), {0.05, sigma}, r, kAll, 100.0).price);
        }
        return (*std::max_element(prices.begin(), prices.end()) - *std::min_element(prices.begin(), prices.end())) /
               prices[0];
    };
    const double coarse = spread(0.05, 50);
    const double fine = spread(0.025, 200);
    CHECK(coarse > 0.0);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.15));
}
