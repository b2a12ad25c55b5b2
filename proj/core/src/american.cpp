#include "mpbs/american.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mpbs/errors.hpp"

namespace mpbs {

ScalarField exercise_floor(const InstrumentSpec& instrument, const MarketParams& params,
                           const GridSpec& grid, double t) {
    const double discount = std::exp(-params.r * t);
    ScalarField floor(grid.n_x);
    auto out = floor.interior();
    for (std::size_t i = 0; i < grid.n_x; ++i) {
        out[i] = discount * std::max(instrument.strike - std::exp(grid.center(i)), 0.0);
    }
    return floor;
}

ScalarField lcp_step(const ScalarField& psi_star, const ScalarField& floor, double delta_t,
                     ComplementarityCount* count) {
    if (psi_star.n_x() != floor.n_x()) throw ConfigError("lcp_step: field lengths differ");
    if (!(delta_t > 0.0)) throw ConfigError("lcp_step: timestep must be positive");

    ScalarField out = psi_star;
    auto psi = out.interior();
    const auto bound = floor.interior();
    ComplementarityCount local;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        // Source term R = (max(psi*, floor) - psi*) / dt; adding dt*R lands on the max.
        if (bound[i] > psi[i]) {
            psi[i] = bound[i];
            ++local.exercised;
        } else {
            ++local.continued;
        }
    }
    if (count) {
        count->exercised += local.exercised;
        count->continued += local.continued;
    }
    return out;
}

AmericanResult price_american(const InstrumentSpec& instrument, const MarketParams& params,
                              const Resolution& resolution, const MpdataOptions& options,
                              double spot, const SolverControls& controls) {
    if (instrument.kind != InstrumentKind::american_put) {
        throw ConfigError("price_american expects an american_put instrument");
    }
    instrument.validate();
    params.validate();

    AmericanResult result;
    PricingResult& pr = result.pricing;
    pr.resolution = align_to_spot(resolution, spot);
    pr.options = options;
    pr.boundary = controls.boundary.value_or(Boundary::log_linear);

    const TransportProblem problem =
        make_problem(params, pr.resolution, pr.boundary, controls.allow_unstable);
    problem.validate();
    pr.stability = check_stability(problem, params.sigma);
    if (!pr.stability.satisfied && !controls.allow_unstable) {
        std::ostringstream msg;
        msg << "stability bound violated: lambda^2 = " << pr.stability.lambda_squared;
        throw StabilityError(msg.str());
    }

    pr.terminal = terminal_condition(instrument, params, problem.grid, &pr.warnings);

    const StepHook project = [&](ScalarField& psi, std::size_t, double t_destination) {
        const ScalarField floor = exercise_floor(instrument, params, problem.grid, t_destination);
        psi = lcp_step(psi, floor, problem.grid.delta_t, &result.totals);
    };
    pr.solution = integrate_backward(problem, pr.terminal, options, project, &pr.stats);
    pr.price = extract_price(pr.solution, problem.grid, spot);
    return result;
}

}  // namespace mpbs
