#pragma once

#include <cstddef>
#include <functional>

#include "core.hpp"

namespace qvr
{
struct QuadratureOptions
{
    double rel_tol{1e-6};
    int max_refinements{12};
    //! Strip truncation: the Gaussian factor at the cut is below
    //! exp(-r_cutoff_sigmas^2 / 2) of its maximum (and below rel_tol / 100)
    double r_cutoff_sigmas{10};
    int initial_nodes_r{64};
    int initial_nodes_theta{64};

    // Throws InvalidParam when out of range
    void validate() const;

    friend bool operator==(QuadratureOptions const&, QuadratureOptions const&) = default;
};

struct QuadratureResult
{
    double value{0};
    double est_rel_error{0};
    int refinements_used{0};
    std::size_t nodes_evaluated{0};
    bool converged{true};
};

// Throw NonConvergence if the result did not meet its tolerance
QuadratureResult const& require_converged(QuadratureResult const& result);

//---------------------------------------------------------------------------//
/*!
 * Upper end of the truncated r interval.
 *
 * The full exponent is sigma^2 |k + k'|^2, which is bounded below by
 * (r - sigma k_perp)_+^2 + (sigma k_x + beta gamma^2 sigma Delta + gamma r)_+^2
 * since f(r) >= beta gamma^2 sigma Delta + gamma r. This bound is
 * non-decreasing in r and the cut is placed where it exceeds the smallest
 * sampled exponent by the requested margin.
 */
struct StripCutoff
{
    double r_max{0};
    double reference_exponent{0};  //!< sampled upper bound on the minimum exponent
};

StripCutoff strip_cutoff(EmissionIntegrand const& integrand, QuadratureOptions const& opts);

//! r-dependent factors of a strip integrand (see EmissionIntegrand)
using RadialTermsFn = std::function<EmissionIntegrand::RadialTerms(double)>;

/*!
 * Adaptive tensor rule on [0, r_max] x [0, 2 pi]: composite 8-point
 * Gauss-Legendre panels in r and the periodic trapezoid rule in theta. Node
 * counts double per direction until successive estimates agree to rel_tol.
 *
 * exponent_shift is subtracted from every exponent during summation and
 * restored at the end so that deep Gaussian tails keep relative precision.
 */
QuadratureResult integrate_strip(RadialTermsFn const& radial,
                                 double r_max,
                                 double exponent_shift,
                                 QuadratureOptions const& opts);

// Reduced emission integral I(beta, sigma, k)
QuadratureResult integrate_I(PhotonMode const& mode,
                             KinematicFactors const& kin,
                             double sigma,
                             QuadratureOptions const& opts = {});

// Adaptive Gauss-Kronrod integral of a smooth function over [a, b]
QuadratureResult integrate_1d(std::function<double(double)> const& f,
                              double a,
                              double b,
                              QuadratureOptions const& opts = {});

}  // namespace qvr
