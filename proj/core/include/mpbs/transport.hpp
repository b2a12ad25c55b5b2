#pragma once

/**
 * @file transport.hpp
 * @brief Backward-in-time integration of psi_t + u psi_x - nu psi_xx = 0.
 *
 * The Fickian term is folded into the advective velocity,
 *
 *   v = u - nu * (d psi / dx) / psi,
 *
 * discretised at faces as u - nu * (2/dx) * A with
 * A = (psi_{i+1} - psi_i) / (psi_{i+1} + psi_i), and each step is handed to
 * the MPDATA core. The velocity is re-evaluated from the pre-step field.
 */

#include <cstddef>
#include <functional>
#include <string_view>

#include "mpbs/mpdata.hpp"

namespace mpbs {

enum class Boundary { open, log_linear, periodic };
enum class TimeDirection { backward, forward };

std::string_view to_string(Boundary b);
Boundary parse_boundary(std::string_view name);

/// Uniform grid in x = ln S; x_min is the left edge of cell 0.
struct GridSpec {
    double x_min = 0.0;
    double delta_x = 0.0;
    std::size_t n_x = 0;
    double delta_t = 0.0;
    std::size_t n_t = 0;

    double center(std::size_t i) const { return x_min + (static_cast<double>(i) + 0.5) * delta_x; }
    double x_max() const { return x_min + static_cast<double>(n_x) * delta_x; }
    double duration() const { return static_cast<double>(n_t) * delta_t; }
};

struct TransportProblem {
    double u = 0.0;
    double nu = 0.0;
    GridSpec grid;
    Boundary boundary = Boundary::open;
    TimeDirection direction = TimeDirection::backward;
    bool allow_unstable = false;  // research override: skip the per-step Courant check

    /// Throws ConfigError on n_x < 4, non-positive steps or non-finite coefficients.
    void validate() const;
    /// +1 forward, -1 backward (negative timesteps of magnitude delta_t).
    double time_sign() const { return direction == TimeDirection::backward ? -1.0 : 1.0; }
};

struct StabilityReport {
    double max_effective_courant = 0.0;  // governing estimate, compared with `bound`
    double advective_courant = 0.0;      // |u| dt/dx
    double worst_case_courant = 0.0;     // |u| dt/dx + 1/lambda^2, i.e. |A| = 1 with both terms aligned
    double lambda_squared = 0.0;         // dx^2 / (sigma^2 dt); infinite for sigma = 0
    double bound = 0.5;
    bool satisfied = false;
};

/**
 * Face Courant numbers [u - nu (2/dx) A] * s * dt/dx, s = time_sign().
 * Throws NumericError on non-finite results.
 */
FaceField effective_courant(const ScalarField& field, const TransportProblem& problem,
                            double epsilon = 1e-15);

/**
 * A-priori stability estimate. With nu != 0 the governing number is
 * max(|u| dt/dx, 1/lambda^2) against 1/2 (lambda^2 >= 2 passes); with nu == 0
 * it is |u| dt/dx against 1.
 */
StabilityReport check_stability(const TransportProblem& problem, double sigma);

struct HaloReport {
    bool left_fallback = false;   // log-linear fell back to zero-gradient
    bool right_fallback = false;
    bool any() const { return left_fallback || right_fallback; }
};

/**
 * open: zero-gradient copy of the edge value.
 * log_linear: constant ratio between adjacent cells continued outward; falls
 *   back to open on a side whose two edge values are not strictly positive.
 * periodic: wraparound.
 */
HaloReport fill_halo(ScalarField& field, Boundary boundary);

/// Called after every MPDATA step with the destination time of that step.
using StepHook = std::function<void(ScalarField& field, std::size_t step, double t_destination)>;

struct IntegrationStats {
    std::size_t steps = 0;
    double max_courant_seen = 0.0;  // largest |C| on an active face
    double max_outflow_seen = 0.0;  // largest per-cell outgoing Courant sum
    std::size_t halo_fallbacks = 0;
};

/**
 * Runs n_t steps from the terminal field (t = T) down to t = 0. The grid's
 * n_t * delta_t defines T. Throws StabilityError when a cell's outgoing
 * Courant numbers sum past 1 (unless allow_unstable). Since |A| <= 1 for
 * non-negative fields, the outflow never exceeds max(2/lambda^2, |u| dt/dx +
 * 1/lambda^2), so lambda^2 >= 2 with a small advective Courant number is
 * enough. Throws NumericError on non-finite values.
 */
ScalarField integrate_backward(const TransportProblem& problem, const ScalarField& terminal,
                               const MpdataOptions& options, const StepHook& hook = {},
                               IntegrationStats* stats = nullptr);

}  // namespace mpbs
