#include "mpbs/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "mpbs/errors.hpp"

namespace mpbs {

std::string_view to_string(Boundary b) {
    switch (b) {
        case Boundary::open: return "open";
        case Boundary::log_linear: return "log-linear";
        case Boundary::periodic: return "periodic";
    }
    return "unknown";
}

Boundary parse_boundary(std::string_view name) {
    if (name == "open") return Boundary::open;
    if (name == "log-linear" || name == "log_linear") return Boundary::log_linear;
    if (name == "periodic") return Boundary::periodic;
    throw ConfigError("unknown boundary condition '" + std::string(name) + "'");
}

void TransportProblem::validate() const {
    if (grid.n_x < 4) throw ConfigError("transport grid needs at least 4 cells");
    if (!(grid.delta_x > 0.0) || !std::isfinite(grid.delta_x)) {
        throw ConfigError("grid step must be positive and finite");
    }
    if (!(grid.delta_t > 0.0) || !std::isfinite(grid.delta_t)) {
        throw ConfigError("timestep must be positive and finite");
    }
    if (!std::isfinite(u) || !std::isfinite(nu) || !std::isfinite(grid.x_min)) {
        throw ConfigError("transport coefficients must be finite");
    }
}

FaceField effective_courant(const ScalarField& field, const TransportProblem& problem,
                            double epsilon) {
    const GridSpec& g = problem.grid;
    const double scale = problem.time_sign() * g.delta_t / g.delta_x;
    const double eps = epsilon * std::max(1.0, field.max_abs());

    FaceField out = FaceField::matching(field);
    for (std::ptrdiff_t i = out.first(); i <= out.last(); ++i) {
        double velocity = problem.u;
        if (problem.nu != 0.0) {
            const double a = (field[i + 1] - field[i]) / (field[i + 1] + field[i] + eps);
            velocity -= problem.nu * (2.0 / g.delta_x) * a;
        }
        out[i] = velocity * scale;
    }
    if (!out.finite()) throw NumericError("effective Courant number is not finite");
    return out;
}

StabilityReport check_stability(const TransportProblem& problem, double sigma) {
    const GridSpec& g = problem.grid;
    StabilityReport report;
    report.advective_courant = std::abs(problem.u) * g.delta_t / g.delta_x;
    report.lambda_squared = sigma > 0.0 ? g.delta_x * g.delta_x / (sigma * sigma * g.delta_t)
                                        : std::numeric_limits<double>::infinity();
    const double fickian = 1.0 / report.lambda_squared;
    report.worst_case_courant = report.advective_courant + fickian;
    report.bound = (sigma > 0.0 && problem.nu != 0.0) ? 0.5 : 1.0;
    report.max_effective_courant = std::max(report.advective_courant, fickian);
    // lambda^2 == 2 sits exactly on the bound and is admissible.
    report.satisfied = report.max_effective_courant <= report.bound * (1.0 + 1e-12);
    return report;
}

HaloReport fill_halo(ScalarField& field, Boundary boundary) {
    HaloReport report;
    const auto n = static_cast<std::ptrdiff_t>(field.n_x());
    const auto h = static_cast<std::ptrdiff_t>(field.halo());
    if (n == 0) return report;

    switch (boundary) {
        case Boundary::periodic:
            fill_periodic(field);
            return report;
        case Boundary::log_linear: {
            if (n >= 2 && field[0] > 0.0 && field[1] > 0.0) {
                const double ratio = field[0] / field[1];
                for (std::ptrdiff_t k = 1; k <= h; ++k) field[-k] = field[-k + 1] * ratio;
            } else {
                report.left_fallback = true;
                for (std::ptrdiff_t k = 1; k <= h; ++k) field[-k] = field[0];
            }
            if (n >= 2 && field[n - 1] > 0.0 && field[n - 2] > 0.0) {
                const double ratio = field[n - 1] / field[n - 2];
                for (std::ptrdiff_t k = 0; k < h; ++k) field[n + k] = field[n + k - 1] * ratio;
            } else {
                report.right_fallback = true;
                for (std::ptrdiff_t k = 0; k < h; ++k) field[n + k] = field[n - 1];
            }
            return report;
        }
        case Boundary::open:
            for (std::ptrdiff_t k = 1; k <= h; ++k) {
                field[-k] = field[0];
                field[n - 1 + k] = field[n - 1];
            }
            return report;
    }
    return report;
}

ScalarField integrate_backward(const TransportProblem& problem, const ScalarField& terminal,
                               const MpdataOptions& options, const StepHook& hook,
                               IntegrationStats* stats) {
    problem.validate();
    options.validate();
    if (terminal.n_x() != problem.grid.n_x) {
        throw ConfigError("terminal field does not match the grid");
    }

    IntegrationStats local;
    MpdataOptions step_options = options;
    step_options.outflow_limit =
        problem.allow_unstable ? std::numeric_limits<double>::infinity() : 1.0 + 1e-12;

    const HaloFill fill = [&](ScalarField& f) {
        if (fill_halo(f, problem.boundary).any()) ++local.halo_fallbacks;
    };

    ScalarField psi = terminal;
    fill(psi);
    if (!psi.interior_finite()) throw NumericError("terminal condition is not finite");

    const double t_end = problem.grid.duration();
    for (std::size_t step = 0; step < problem.grid.n_t; ++step) {
        const FaceField courant = effective_courant(psi, problem, options.epsilon);
        local.max_courant_seen = std::max(local.max_courant_seen, courant.max_abs_active());
        local.max_outflow_seen = std::max(local.max_outflow_seen, courant.max_outflow());
        try {
            psi = mpdata_step(psi, courant, step_options, fill,
                              problem.boundary == Boundary::periodic ? FaceFill(fill_periodic_faces)
                                                                     : FaceFill{});
        } catch (const StabilityError& e) {
            std::ostringstream msg;
            msg << "step " << step << ": " << e.what();
            throw StabilityError(msg.str());
        }
        const bool last = step + 1 == problem.grid.n_t;
        double t_dest = static_cast<double>(step + 1) * problem.grid.delta_t;
        if (problem.direction == TimeDirection::backward) t_dest = last ? 0.0 : t_end - t_dest;
        if (hook) {
            hook(psi, step, t_dest);
            fill(psi);
        }
        if (!psi.interior_finite()) {
            throw NumericError("non-finite value after step " + std::to_string(step));
        }
        ++local.steps;
    }

    if (stats) *stats = local;
    return psi;
}

}  // namespace mpbs
