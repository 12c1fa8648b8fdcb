#include "qvr/pairs.hpp"

#include <cmath>
#include <string>

#include "qvr/errors.hpp"

namespace qvr
{
namespace
{
constexpr double constraint_tolerance = 1e-9;
constexpr double on_cone_tolerance = 1e-12;
}  // namespace

bool PhotonPair::satisfies_constraint() const
{
    return std::abs(residual) <= constraint_tolerance * (a.k() + b.k());
}

double g_value(PhotonMode const& mode, double beta)
{
    return -mode.cone_offset(beta);
}

PhotonPair make_pair(PhotonMode const& a, PhotonMode const& b, double beta)
{
    return {a, b, g_value(a, beta) + g_value(b, beta)};
}

PhotonMode solve_partner(PhotonMode const& mode,
                         double partner_alpha,
                         double partner_phi,
                         double beta)
{
    if (beta <= 1)
    {
        throw BelowThreshold(beta);
    }
    double g = g_value(mode, beta);
    // g(partner) = k' (beta cos(alpha') - 1)
    double per_k = beta * std::cos(partner_alpha) - 1;

    if (std::abs(g) <= on_cone_tolerance * mode.k()
        && std::abs(per_k) <= on_cone_tolerance)
    {
        throw DegenerateConstraint("both directions lie on the emission cone");
    }
    if (std::abs(per_k) <= on_cone_tolerance)
    {
        throw NoPartnerSolution("partner direction lies on the cone but the photon does not");
    }
    double k_partner = -g / per_k;
    if (!(k_partner > 0) || !std::isfinite(k_partner))
    {
        throw NoPartnerSolution(
            "partner direction lies on the same side of the cone as the photon "
            "(g = "
            + std::to_string(g) + ", beta cos(alpha') - 1 = " + std::to_string(per_k) + ")");
    }
    return PhotonMode(k_partner, partner_alpha, partner_phi);
}

double polarization_sum_factor(PhotonMode const& a, PhotonMode const& b)
{
    auto basis = polarization_basis(a.direction());
    Vec3 kb = b.direction();
    double total = 0;
    for (Vec3 const& e : basis.e)
    {
        double c = dot(kb, e);
        total += 1 - c * c;
    }
    return total;
}

double joint_pair_density(PhotonPair const& pair,
                          MediumParams const& medium,
                          PerturbationParams const& pert)
{
    if (!pair.satisfies_constraint())
    {
        throw InvalidParam("pair violates the emission constraint (residual "
                           + std::to_string(pair.residual) + ")");
    }
    double n0_sq = medium.n0() * medium.n0();
    double sigma = pert.sigma();
    double sigma_sq = sigma * sigma;
    double beta = pert.beta();
    double constant = 32 * sigma_sq * sigma_sq * sigma_sq * pi * pi * pert.eta() * pert.eta()
                      / (n0_sq * n0_sq * n0_sq * beta * beta);

    Vec3 total = pair.a.wavevector() + pair.b.wavevector();
    return constant * pair.a.k() * pair.b.k() * std::exp(-sigma_sq * dot(total, total))
           * polarization_sum_factor(pair.a, pair.b);
}

}  // namespace qvr
