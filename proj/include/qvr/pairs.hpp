#pragma once

#include "core.hpp"

namespace qvr
{
//! Two photons emitted together, with the constraint residual g(a) + g(b).
struct PhotonPair
{
    PhotonMode a;
    PhotonMode b;
    double residual;

    //! |residual| <= 1e-9 (k_a + k_b)
    bool satisfies_constraint() const;
};

/*!
 * Conserved quantity g = beta k_x - k, proportional to k_x v - omega.
 *
 * Positive inside the cone (alpha < theta0), zero on it, negative outside.
 */
double g_value(PhotonMode const& mode, double beta);

PhotonPair make_pair(PhotonMode const& a, PhotonMode const& b, double beta);

/*!
 * Partner photon travelling along (partner_alpha, partner_phi) such that
 * g(mode) + g(partner) = 0.
 *
 * Throws NoPartnerSolution when the partner direction lies on the same side
 * of the cone as the given photon, and DegenerateConstraint when both lie on
 * the cone.
 */
PhotonMode solve_partner(PhotonMode const& mode,
                         double partner_alpha,
                         double partner_phi,
                         double beta);

// Sum over the polarizations mu of a of [1 - (k_b . e_{a,mu})^2]
double polarization_sum_factor(PhotonMode const& a, PhotonMode const& b);

/*!
 * Unnormalized pair density on the constraint surface:
 *
 *   2^5 sigma^6 pi^2 eta^2 / (n0^6 beta^2) * k_a k_b
 *   * exp(-sigma^2 |k_a + k_b|^2) * polarization_sum_factor(a, b)
 *
 * Only ratios between pairs are meaningful. Throws InvalidParam when the
 * pair violates the constraint.
 */
double joint_pair_density(PhotonPair const& pair,
                          MediumParams const& medium,
                          PerturbationParams const& pert);

}  // namespace qvr
