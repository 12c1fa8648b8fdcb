#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "core.hpp"
#include "quad.hpp"

namespace qvr
{
struct DensityOptions
{
    QuadratureOptions quad;
    //! Multiply by 2 to count both polarization states of the emitted photon
    bool both_polarizations{false};

    friend bool operator==(DensityOptions const&, DensityOptions const&) = default;
};

//! d^2N / (dOmega dk) at one mode, per steradian per (rad/um)
struct DensitySample
{
    double value{0};
    double est_rel_error{0};
    bool converged{true};
};

struct Range
{
    double min{0};
    double max{0};

    friend bool operator==(Range const&, Range const&) = default;
};

/*!
 * Angle x wavelength table of d^2N / (dOmega dk).
 *
 * Cells are stored row-major with the angle index outer. Angles are in
 * radians, wavelengths are vacuum wavelengths in micrometres.
 */
struct SpectrumGrid
{
    MediumParams medium;
    PerturbationParams pert;
    DensityOptions options;
    std::vector<double> alphas;
    std::vector<double> lambdas;
    std::vector<double> density;
    std::vector<std::uint8_t> converged;

    std::size_t index(std::size_t i_alpha, std::size_t j_lambda) const
    {
        return i_alpha * lambdas.size() + j_lambda;
    }
    double at(std::size_t i_alpha, std::size_t j_lambda) const
    {
        return density[this->index(i_alpha, j_lambda)];
    }
    bool below_threshold() const { return pert.beta() <= 1; }
    std::size_t failed_cells() const;
};

struct SpectrumPeak
{
    double lambda_max{0};  //!< um, parabolically refined
    double alpha_max{0};   //!< rad, grid node
    double value{0};       //!< density at the refined peak
    std::size_t i_alpha{0};
    std::size_t j_lambda{0};
};

/*!
 * Detector acceptance: a cone of the given half-angle about the propagation
 * axis and a vacuum wavelength band.
 */
struct DetectorSpec
{
    double half_angle{0};  //!< rad
    double lambda_min{0};  //!< um
    double lambda_max{0};  //!< um
    double rep_rate{0};    //!< Hz

    void validate() const;

    friend bool operator==(DetectorSpec const&, DetectorSpec const&) = default;
};

struct CountRate
{
    double photons_per_pulse{0};
    double counts_per_second{0};
    double est_rel_error{0};
    bool converged{true};
};

//---------------------------------------------------------------------------//
// Constant 2 eta^2 L sigma^3 / (pi^2 beta^2 n0^6) * beta gamma^2
double density_prefactor(MediumParams const& medium,
                         PerturbationParams const& pert,
                         KinematicFactors const& kin);

// Spectral-angular density; exactly zero below threshold
DensitySample density_at(PhotonMode const& mode,
                         MediumParams const& medium,
                         PerturbationParams const& pert,
                         DensityOptions const& opts = {});

// |dk / dlambda| = 2 pi n0 / lambda^2, converting a per-k to a per-lambda density
double per_lambda_jacobian(double lambda_vac_um, MediumParams const& medium);

// Evenly spaced nodes including both endpoints
std::vector<double> linspace(Range range, std::size_t count);

SpectrumGrid spectrum_grid(MediumParams const& medium,
                           PerturbationParams const& pert,
                           Range alpha_range,
                           Range lambda_range,
                           std::size_t n_alpha,
                           std::size_t n_lambda,
                           DensityOptions const& opts = {},
                           unsigned threads = 1);

// Brightest converged cell, refined in lambda by a parabola in log-density
SpectrumPeak find_peak(SpectrumGrid const& grid);

// Photons per pulse inside the detector cone and band, and the count rate
CountRate integrated_counts(MediumParams const& medium,
                           PerturbationParams const& pert,
                           DetectorSpec const& detector,
                           DensityOptions const& opts = {});

}  // namespace qvr
