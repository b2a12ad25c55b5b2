#include "mpbs/mpdata.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mpbs/errors.hpp"

namespace mpbs {

namespace {

constexpr double pos(double x) noexcept { return x > 0.0 ? x : 0.0; }
constexpr double neg(double x) noexcept { return x < 0.0 ? x : 0.0; }

void require_same_layout(const ScalarField& cells, const FaceField& faces, const char* where) {
    if (cells.n_x() != faces.n_x() || cells.halo() != faces.halo()) {
        std::ostringstream msg;
        msg << where << ": field has n_x=" << cells.n_x() << ", halo=" << cells.halo()
            << " but face field has n_x=" << faces.n_x() << ", halo=" << faces.halo();
        throw ConfigError(msg.str());
    }
}

void require_same_layout(const ScalarField& a, const ScalarField& b, const char* where) {
    if (a.n_x() != b.n_x() || a.halo() != b.halo()) {
        throw ConfigError(std::string(where) + ": fields have different layouts");
    }
}

// Flux of a corrective pass; in infinite-gauge mode the pseudo-velocity
// already carries the psi dimension and advects the unit gauge.
double corrective_flux(double psi_left, double psi_right, double c, bool infinite_gauge) {
    return infinite_gauge ? c : upwind_flux(psi_left, psi_right, c);
}

ScalarField corrective_pass(const ScalarField& field, const FaceField& c, bool infinite_gauge) {
    ScalarField out = field;
    const auto n = static_cast<std::ptrdiff_t>(field.n_x());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double right = corrective_flux(field[i], field[i + 1], c[i], infinite_gauge);
        const double left = corrective_flux(field[i - 1], field[i], c[i - 1], infinite_gauge);
        out[i] = field[i] - (right - left);
    }
    return out;
}

}  // namespace

ScalarField::ScalarField(std::size_t n_x, std::size_t halo, double fill)
    : n_x_(n_x), halo_(halo), values_(n_x + 2 * halo, fill) {}

ScalarField ScalarField::from_interior(std::span<const double> interior, std::size_t halo) {
    ScalarField field(interior.size(), halo);
    std::copy(interior.begin(), interior.end(), field.interior().begin());
    return field;
}

double ScalarField::interior_min() const {
    const auto in = interior();
    return in.empty() ? 0.0 : *std::min_element(in.begin(), in.end());
}

double ScalarField::interior_max() const {
    const auto in = interior();
    return in.empty() ? 0.0 : *std::max_element(in.begin(), in.end());
}

double ScalarField::interior_sum() const {
    double sum = 0.0;
    for (double v : interior()) sum += v;
    return sum;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool ScalarField::interior_finite() const {
    const auto in = interior();
    return std::all_of(in.begin(), in.end(), [](double v) { return std::isfinite(v); });
}

FaceField::FaceField(std::size_t n_x, std::size_t halo, double fill)
    : n_x_(n_x), halo_(halo), values_(n_x + 2 * halo - 1, fill) {}

double FaceField::max_abs_active() const {
    double m = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(n_x_);
    for (std::ptrdiff_t i = -1; i < n; ++i) m = std::max(m, std::abs((*this)[i]));
    return m;
}

double FaceField::max_outflow() const {
    double m = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(n_x_);
    for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, pos((*this)[i]) - neg((*this)[i - 1]));
    return m;
}

bool FaceField::finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void MpdataOptions::validate() const {
    if (n_iterations < 1) throw ConfigError("MPDATA needs at least one iteration");
    if (!(epsilon > 0.0)) throw ConfigError("MPDATA epsilon must be positive");
    if (!(outflow_limit > 0.0)) throw ConfigError("outflow limit must be positive");
    // The gauge-limit pseudo-velocity of a corrective pass is a flux, so a
    // third pass would have no Courant number to build on.
    if (infinite_gauge && n_iterations > 2) {
        throw ConfigError("infinite-gauge MPDATA supports at most 2 iterations");
    }
}

double guard_epsilon(const ScalarField& field, const MpdataOptions& options) {
    return options.epsilon * std::max(1.0, field.max_abs());
}

ScalarField upwind_step(const ScalarField& field, const FaceField& courant) {
    require_same_layout(field, courant, "upwind_step");
    if (field.halo() < 1) throw ConfigError("upwind_step needs a halo of at least one cell");

    ScalarField out = field;
    const auto n = static_cast<std::ptrdiff_t>(field.n_x());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[i] = field[i] - (upwind_flux(field[i], field[i + 1], courant[i]) -
                             upwind_flux(field[i - 1], field[i], courant[i - 1]));
    }
    return out;
}

FaceField antidiffusive_courant(const ScalarField& field, const FaceField& courant,
                                const MpdataOptions& options) {
    require_same_layout(field, courant, "antidiffusive_courant");
    const double eps = guard_epsilon(field, options);
    const auto lo = -static_cast<std::ptrdiff_t>(field.halo());
    const auto hi = static_cast<std::ptrdiff_t>(field.n_x() + field.halo()) - 1;  // last cell

    FaceField out = FaceField::matching(field);
    for (std::ptrdiff_t i = courant.first(); i <= courant.last(); ++i) {
        const double c = courant[i];
        const double a = options.infinite_gauge
                             ? (field[i + 1] - field[i]) / 2.0
                             : (field[i + 1] - field[i]) / (field[i + 1] + field[i] + eps);
        double value = (std::abs(c) - c * c) * a;

        if (options.third_order && i - 1 >= lo && i + 2 <= hi) {
            const double curvature = field[i + 2] - field[i + 1] - field[i] + field[i - 1];
            const double b = options.infinite_gauge
                                 ? curvature / 4.0
                                 : curvature /
                                       (field[i + 2] + field[i + 1] + field[i] + field[i - 1] + eps);
            value += (3.0 * c * std::abs(c) - 2.0 * c * c * c - c) / 3.0 * b;
        }
        out[i] = value;
    }
    return out;
}

FaceField fct_factors(const FaceField& raw_antidiff, const ScalarField& field_before,
                      const ScalarField& field_after_upwind, const MpdataOptions& options) {
    require_same_layout(field_before, field_after_upwind, "fct_limit");
    require_same_layout(field_after_upwind, raw_antidiff, "fct_limit");
    if (field_before.halo() < 2) throw ConfigError("fct_limit needs a halo of at least two cells");

    const ScalarField& psi = field_after_upwind;
    const ScalarField& old = field_before;
    const bool iga = options.infinite_gauge;
    const double eps = guard_epsilon(psi, options);
    const auto n = static_cast<std::ptrdiff_t>(psi.n_x());

    // Cells -1 .. n need factors; store them with an offset of one.
    std::vector<double> beta_up(static_cast<std::size_t>(n + 2));
    std::vector<double> beta_dn(static_cast<std::size_t>(n + 2));
    for (std::ptrdiff_t i = -1; i <= n; ++i) {
        const double hi = std::max({old[i - 1], old[i], old[i + 1], psi[i - 1], psi[i], psi[i + 1]});
        const double lo = std::min({old[i - 1], old[i], old[i + 1], psi[i - 1], psi[i], psi[i + 1]});

        const double flux_left = corrective_flux(psi[i - 1], psi[i], raw_antidiff[i - 1], iga);
        const double flux_right = corrective_flux(psi[i], psi[i + 1], raw_antidiff[i], iga);
        const double incoming = pos(flux_left) - neg(flux_right);
        const double outgoing = pos(flux_right) - neg(flux_left);

        const auto k = static_cast<std::size_t>(i + 1);
        beta_up[k] = (hi - psi[i]) / (incoming + eps);
        beta_dn[k] = (psi[i] - lo) / (outgoing + eps);
    }

    FaceField factors = FaceField::matching(psi, 0.0);
    for (std::ptrdiff_t i = -1; i < n; ++i) {
        const auto here = static_cast<std::size_t>(i + 1);
        const auto next = here + 1;
        const double f = raw_antidiff[i] > 0.0
                             ? std::min({1.0, beta_dn[here], beta_up[next]})
                             : std::min({1.0, beta_up[here], beta_dn[next]});
        factors[i] = std::clamp(f, 0.0, 1.0);
    }
    return factors;
}

FaceField fct_limit(const FaceField& raw_antidiff, const ScalarField& field_before,
                    const ScalarField& field_after_upwind, const MpdataOptions& options) {
    const FaceField factors = fct_factors(raw_antidiff, field_before, field_after_upwind, options);
    FaceField out = FaceField::matching(field_after_upwind, 0.0);
    const auto n = static_cast<std::ptrdiff_t>(out.n_x());
    for (std::ptrdiff_t i = -1; i < n; ++i) out[i] = raw_antidiff[i] * factors[i];
    return out;
}

ScalarField mpdata_step(const ScalarField& field, const FaceField& courant,
                        const MpdataOptions& options, const HaloFill& fill_halo,
                        const FaceFill& fill_faces) {
    options.validate();
    require_same_layout(field, courant, "mpdata_step");
    if ((options.third_order || options.non_oscillatory) && field.halo() < 2) {
        throw ConfigError("third-order and non-oscillatory options need a halo of two cells");
    }

    const double outflow = courant.max_outflow();
    if (!(outflow <= options.outflow_limit)) {
        std::ostringstream msg;
        msg << "cell outflow Courant number " << outflow << " exceeds the stability limit "
            << options.outflow_limit;
        throw StabilityError(msg.str());
    }

    ScalarField psi = upwind_step(field, courant);
    if (fill_halo) fill_halo(psi);

    FaceField previous = courant;
    for (int pass = 1; pass < options.n_iterations; ++pass) {
        FaceField corrective = antidiffusive_courant(psi, previous, options);
        if (fill_faces) fill_faces(corrective);
        if (options.non_oscillatory) {
            corrective = fct_limit(corrective, field, psi, options);
            if (fill_faces) fill_faces(corrective);
        }
        psi = corrective_pass(psi, corrective, options.infinite_gauge);
        if (fill_halo) fill_halo(psi);
        previous = std::move(corrective);
    }
    return psi;
}

void fill_periodic(ScalarField& field) {
    const auto n = static_cast<std::ptrdiff_t>(field.n_x());
    const auto h = static_cast<std::ptrdiff_t>(field.halo());
    for (std::ptrdiff_t k = 1; k <= h; ++k) {
        field[-k] = field[((-k) % n + n) % n];
        field[n - 1 + k] = field[(k - 1) % n];
    }
}

void fill_periodic_faces(FaceField& faces) {
    // face i sits right of cell i; faces 0 .. n-1 are the distinct ones
    const auto n = static_cast<std::ptrdiff_t>(faces.n_x());
    for (auto i = faces.first(); i < 0; ++i) faces[i] = faces[i + n];
    for (auto i = n; i <= faces.last(); ++i) faces[i] = faces[i - n];
}

}  // namespace mpbs
