#pragma once

/**
 * @file mpdata.hpp
 * @brief One-dimensional MPDATA advection steps on a haloed cell-centred grid.
 *
 * Every pass of the scheme is the donor-cell (upwind) update
 *
 *   psi_i <- psi_i - [F(psi_i, psi_{i+1}, C_{i+1/2}) - F(psi_{i-1}, psi_i, C_{i-1/2})]
 *
 * The first pass uses the physical Courant numbers; each further pass uses an
 * antidiffusive pseudo-Courant field built from the previous pass's output,
 * optionally limited (flux-corrected transport) so no new extrema appear.
 */

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mpbs {

inline constexpr std::size_t kDefaultHalo = 2;

/**
 * Cell-centred values with `halo` ghost cells on each side.
 *
 * Indexing is relative to the first interior cell: valid indices run from
 * -halo to n_x + halo - 1.
 */
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(std::size_t n_x, std::size_t halo = kDefaultHalo, double fill = 0.0);

    static ScalarField from_interior(std::span<const double> interior,
                                     std::size_t halo = kDefaultHalo);

    std::size_t n_x() const noexcept { return n_x_; }
    std::size_t halo() const noexcept { return halo_; }
    std::size_t storage_size() const noexcept { return values_.size(); }

    double& operator[](std::ptrdiff_t i) { return values_[offset(i)]; }
    double operator[](std::ptrdiff_t i) const { return values_[offset(i)]; }

    std::span<double> interior() { return {values_.data() + halo_, n_x_}; }
    std::span<const double> interior() const { return {values_.data() + halo_, n_x_}; }
    std::span<const double> storage() const { return values_; }

    double interior_min() const;
    double interior_max() const;
    double interior_sum() const;
    /// Largest |psi| over the whole storage, halo included.
    double max_abs() const;
    bool interior_finite() const;

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    std::size_t offset(std::ptrdiff_t i) const {
        return static_cast<std::size_t>(i + static_cast<std::ptrdiff_t>(halo_));
    }

    std::size_t n_x_ = 0;
    std::size_t halo_ = kDefaultHalo;
    std::vector<double> values_;
};

/**
 * Courant numbers at the faces between consecutive stored cells.
 *
 * `field[i]` is C_{i+1/2}, the face between cells i and i+1; valid indices run
 * from -halo to n_x + halo - 2 (n_x + 2*halo - 1 faces).
 */
class FaceField {
public:
    FaceField() = default;
    FaceField(std::size_t n_x, std::size_t halo = kDefaultHalo, double fill = 0.0);

    /// Same face layout as `cells`.
    static FaceField matching(const ScalarField& cells, double fill = 0.0) {
        return FaceField(cells.n_x(), cells.halo(), fill);
    }

    std::size_t n_x() const noexcept { return n_x_; }
    std::size_t halo() const noexcept { return halo_; }
    std::size_t storage_size() const noexcept { return values_.size(); }
    std::ptrdiff_t first() const noexcept { return -static_cast<std::ptrdiff_t>(halo_); }
    std::ptrdiff_t last() const noexcept {
        return static_cast<std::ptrdiff_t>(n_x_ + halo_) - 2;
    }

    double& operator[](std::ptrdiff_t i) { return values_[offset(i)]; }
    double operator[](std::ptrdiff_t i) const { return values_[offset(i)]; }

    std::span<const double> storage() const { return values_; }

    /// max |C| over the faces the interior update touches (-1 .. n_x-1).
    double max_abs_active() const;
    /// Largest total outgoing Courant number of any interior cell. The donor-cell
    /// pass keeps non-negative fields non-negative while this is <= 1.
    double max_outflow() const;
    bool finite() const;

    friend bool operator==(const FaceField&, const FaceField&) = default;

private:
    std::size_t offset(std::ptrdiff_t i) const {
        return static_cast<std::size_t>(i + static_cast<std::ptrdiff_t>(halo_));
    }

    std::size_t n_x_ = 0;
    std::size_t halo_ = kDefaultHalo;
    std::vector<double> values_;
};

struct MpdataOptions {
    int n_iterations = 2;          // 1 = plain upwind
    bool non_oscillatory = false;  // FCT limiting of corrective passes
    bool infinite_gauge = false;   // treat psi as a perturbation about a large constant
    bool third_order = false;      // third-order-terms correction of the antidiffusive velocity
    double epsilon = 1e-15;        // relative; scaled by max(1, max|psi|)
    double outflow_limit = 1.0;    // max over cells of pos(C_{i+1/2}) - neg(C_{i-1/2}); exceeding it throws

    void validate() const;
};

/// Refills the halo of a field in place.
using HaloFill = std::function<void(ScalarField&)>;
/// Refills the outermost faces of a corrective Courant field, which a
/// two-cell halo cannot supply on its own.
using FaceFill = std::function<void(FaceField&)>;

/// Donor-cell flux: max(C,0)*psi_left + min(C,0)*psi_right.
constexpr double upwind_flux(double psi_left, double psi_right, double courant) noexcept {
    return (courant > 0.0 ? courant : 0.0) * psi_left + (courant < 0.0 ? courant : 0.0) * psi_right;
}

/// Absolute guard added to ratio denominators for this field.
double guard_epsilon(const ScalarField& field, const MpdataOptions& options);

/// One donor-cell pass over the interior. The halo of the result is copied from `field`.
ScalarField upwind_step(const ScalarField& field, const FaceField& courant);

/**
 * Antidiffusive pseudo-Courant numbers from the previous pass's output.
 *
 * Basic form: (|C| - C^2) * (psi_{i+1} - psi_i) / (psi_{i+1} + psi_i + eps).
 * In infinite-gauge mode the result is a flux (psi units) rather than a
 * Courant number, with the ratio replaced by (psi_{i+1} - psi_i) / 2.
 */
FaceField antidiffusive_courant(const ScalarField& field, const FaceField& courant,
                                const MpdataOptions& options);

/**
 * Zalesak-style limiting of corrective Courant numbers.
 *
 * The local envelope of each cell is taken over its neighbours in both
 * `field_before` (start of the step) and `field_after_upwind` (input of the
 * corrective pass). Limiter factors are clipped to [0, 1].
 */
FaceField fct_limit(const FaceField& raw_antidiff, const ScalarField& field_before,
                    const ScalarField& field_after_upwind, const MpdataOptions& options);

/// Limiter factors themselves (same layout as the faces), exposed for diagnostics.
FaceField fct_factors(const FaceField& raw_antidiff, const ScalarField& field_before,
                      const ScalarField& field_after_upwind, const MpdataOptions& options);

/**
 * Full MPDATA step: one upwind pass with `courant`, then n_iterations - 1
 * corrective passes. `fill_halo` is invoked on every intermediate field and on
 * the result. Throws StabilityError when courant.max_outflow() exceeds
 * options.outflow_limit.
 */
ScalarField mpdata_step(const ScalarField& field, const FaceField& courant,
                        const MpdataOptions& options, const HaloFill& fill_halo,
                        const FaceFill& fill_faces = {});

/// Wraparound halo, for tests and periodic problems.
void fill_periodic(ScalarField& field);
void fill_periodic_faces(FaceField& faces);

}  // namespace mpbs
