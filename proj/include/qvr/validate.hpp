#pragma once

// Independent numerical oracles for the reduced emission formulas.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "spectra.hpp"

namespace qvr
{
struct OracleReport
{
    std::string quantity_name;
    double reference_value{0};
    double artifact_value{0};
    double rel_error{0};
    double budget{0};
    bool passed{false};
};

// Build a report; passed is rel_error <= budget
OracleReport make_report(std::string name, double reference, double artifact, double budget);

//---------------------------------------------------------------------------//
// Fourier transform of the comoving profile
//---------------------------------------------------------------------------//
// Closed form: -(eta / n0^3) (2 pi)^{3/2} sigma^3 exp(-sigma^2 |q|^2 / 2)
double xi_fourier_analytic(double q_u,
                           double k_y,
                           double k_z,
                           MediumParams const& medium,
                           PerturbationParams const& pert);

/*!
 * Direct tensor Gauss-Legendre quadrature of
 *   int du dy dz xi_linearized(u, y, z) exp(i (q_u u + k_y y + k_z z))
 * over a cube of half-width 12 sigma. The imaginary part vanishes by parity.
 */
double xi_fourier_numeric(double q_u,
                          double k_y,
                          double k_z,
                          MediumParams const& medium,
                          PerturbationParams const& pert,
                          int panels_per_axis = 16);

//---------------------------------------------------------------------------//
// Brute-force partner-momentum integral
//---------------------------------------------------------------------------//
//! Angular weight between the two photon directions
enum class AngularWeight
{
    printed_cosine_sq,  //!< (k_hat . k_hat')^2, as in the reduced integrand
    polarization_sum,   //!< 1 + (k_hat . k_hat')^2, summed over both polarizations
};

/*!
 * Discretization of the partner integral. Coordinates are cylindrical about
 * the x axis and centred on -k: k' = -k + (s, rho cos(phi), rho sin(phi)).
 * The constraint function is strictly increasing in s, so for each (rho, phi)
 * the s integral covers the window where the broadened delta exceeds
 * exp(-window_widths^2 / 2) of its peak.
 */
struct BruteForceGrid
{
    int rho_panels{32};
    int phi_nodes{96};
    int s_panels{12};
    double window_widths{9};
    //! Maximum relative change allowed when the delta width is halved
    double stability_budget{0.01};
    AngularWeight weight{AngularWeight::printed_cosine_sq};
};

struct BruteForceResult
{
    double value{0};            //!< at half the requested delta width
    double value_coarse{0};     //!< at the requested delta width
    double rel_change{0};
    double delta_width{0};
};

/*!
 * Smallest |k + k'| over partners on the constraint surface, found by a
 * coarse scan. Sets the depth of the Gaussian overlap tail at this mode.
 */
double constraint_surface_distance(PhotonMode const& mode, PerturbationParams const& pert);

/*!
 * Regularization width 0.05 (1 - 1/beta) / (sigma max(1, sigma d)) with d the
 * constraint surface distance. The constraint varies slowly along k'_x near
 * threshold and the overlap factor falls steeply deep in its tail; both
 * shrink the width needed for a fixed regularization bias.
 */
double default_delta_width(PhotonMode const& mode, PerturbationParams const& pert);

/*!
 * Single evaluation at a fixed delta width: the squared energy delta is
 * replaced by (L / 2 pi) times a normalized Gaussian of that width and the
 * three-dimensional partner integral is summed directly. Returns a density
 * per steradian per (rad/um), comparable with density_at.
 */
double brute_force_density_at_width(PhotonMode const& mode,
                                    MediumParams const& medium,
                                    PerturbationParams const& pert,
                                    double delta_width,
                                    BruteForceGrid const& grid = {});

/*!
 * Evaluate at delta_width and delta_width / 2. Throws NonConvergence when
 * the two differ by more than grid.stability_budget.
 */
BruteForceResult brute_force_density(PhotonMode const& mode,
                                     MediumParams const& medium,
                                     PerturbationParams const& pert,
                                     std::optional<double> delta_width = std::nullopt,
                                     BruteForceGrid const& grid = {});

//---------------------------------------------------------------------------//
// Suite
//---------------------------------------------------------------------------//
struct SamplePoint
{
    double alpha{0};       //!< rad
    double lambda_vac{0};  //!< um
    std::optional<double> beta;  //!< overrides the perturbation speed ratio

    friend bool operator==(SamplePoint const&, SamplePoint const&) = default;
};

struct ValidationBudgets
{
    double oracle{0.02};
    double near_threshold_oracle{0.05};
    double near_threshold_beta{1.2};
    double fourier{1e-6};
    double regularization{0.01};
    //! Self-convergence budget as a multiple of the quadrature rel_tol
    double self_convergence_factor{10};
    int fourier_points{20};

    friend bool operator==(ValidationBudgets const&, ValidationBudgets const&) = default;
};

//! Density evaluated by the artifact under test
using DensityFn = std::function<DensitySample(
    PhotonMode const&, MediumParams const&, PerturbationParams const&)>;

// Default sample points: inside, on and outside the cone plus a near-threshold point
std::vector<SamplePoint> default_sample_points(PerturbationParams const& pert);

/*!
 * Run the Fourier-transform oracle, the brute-force density oracle at every
 * sample point and the quadrature self-convergence audit. Failures are
 * reported rather than thrown. The density under test defaults to
 * density_at with the given options.
 */
std::vector<OracleReport> run_validation_suite(MediumParams const& medium,
                                               PerturbationParams const& pert,
                                               std::vector<SamplePoint> const& sample_points,
                                               ValidationBudgets const& budgets = {},
                                               DensityOptions const& opts = {},
                                               DensityFn const& density = nullptr);

bool all_passed(std::vector<OracleReport> const& reports);

}  // namespace qvr
