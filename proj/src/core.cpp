#include "qvr/core.hpp"

#include <cmath>
#include <string>

#include "qvr/errors.hpp"

namespace qvr
{
namespace
{
void require(bool condition, char const* what)
{
    if (!condition)
    {
        throw InvalidParam(what);
    }
}

bool finite_positive(double x)
{
    return std::isfinite(x) && x > 0;
}
}  // namespace

//---------------------------------------------------------------------------//
MediumParams::MediumParams(double n0, std::optional<double> n2)
    : n0_(n0), n2_(n2)
{
    require(std::isfinite(n0) && n0 >= 1, "n0 must be >= 1");
    require(!n2 || (std::isfinite(*n2) && *n2 >= 0), "n2 must be >= 0");
}

//---------------------------------------------------------------------------//
PerturbationParams::PerturbationParams(double eta,
                                       double sigma_um,
                                       double beta,
                                       double length_um)
    : eta_(eta), sigma_(sigma_um), beta_(beta), length_(length_um)
{
    require(finite_positive(eta), "eta must be > 0");
    require(finite_positive(sigma_um), "sigma must be > 0");
    require(finite_positive(beta), "beta must be > 0");
    require(finite_positive(length_um), "interaction length must be > 0");
}

PerturbationParams PerturbationParams::with_eta(double eta) const
{
    return {eta, sigma_, beta_, length_};
}

PerturbationParams PerturbationParams::with_sigma(double sigma_um) const
{
    return {eta_, sigma_um, beta_, length_};
}

PerturbationParams PerturbationParams::with_beta(double beta) const
{
    return {eta_, sigma_, beta, length_};
}

PerturbationParams PerturbationParams::with_length(double length_um) const
{
    return {eta_, sigma_, beta_, length_um};
}

bool PerturbationParams::outside_perturbative_regime(MediumParams const& medium) const
{
    return eta_ / medium.n0() >= 0.1;
}

//---------------------------------------------------------------------------//
PhotonMode::PhotonMode(double k, double alpha, double phi)
    : k_(k)
    , alpha_(alpha)
    , phi_(phi)
    , kx_(k * std::cos(alpha))
    , kperp_(k * std::sin(alpha))
{
    require(finite_positive(k), "wavenumber must be > 0");
    require(alpha >= 0 && alpha <= pi, "polar angle must lie in [0, pi]");
    require(phi >= 0 && phi < two_pi, "azimuth must lie in [0, 2 pi)");
}

Vec3 PhotonMode::direction() const
{
    double s = std::sin(alpha_);
    return {std::cos(alpha_), s * std::cos(phi_), s * std::sin(phi_)};
}

//---------------------------------------------------------------------------//
KinematicFactors kinematics(double beta)
{
    require(finite_positive(beta), "beta must be > 0");
    if (beta <= 1)
    {
        throw BelowThreshold(beta);
    }
    return {beta, 1 / ((beta - 1) * (beta + 1)), std::acos(1 / beta)};
}

double kerr_eta(double n2_cm2_per_W, double intensity_W_per_cm2)
{
    require(std::isfinite(n2_cm2_per_W) && n2_cm2_per_W >= 0, "n2 must be >= 0");
    require(std::isfinite(intensity_W_per_cm2) && intensity_W_per_cm2 >= 0,
            "intensity must be >= 0");
    return n2_cm2_per_W * intensity_W_per_cm2;
}

double resolve_eta(std::optional<double> eta,
                   std::optional<double> n2_cm2_per_W,
                   std::optional<double> intensity_W_per_cm2)
{
    if (n2_cm2_per_W.has_value() != intensity_W_per_cm2.has_value())
    {
        throw InvalidParam("Kerr amplitude needs both n2 and intensity");
    }
    if (!n2_cm2_per_W)
    {
        if (!eta)
        {
            throw InvalidParam("either eta or (n2, intensity) must be given");
        }
        return *eta;
    }
    double kerr = kerr_eta(*n2_cm2_per_W, *intensity_W_per_cm2);
    if (eta && std::abs(*eta - kerr) > 1e-9 * std::abs(*eta))
    {
        throw InvalidParam("eta = " + std::to_string(*eta)
                           + " disagrees with n2 * I = " + std::to_string(kerr));
    }
    return eta ? *eta : kerr;
}

PhotonMode mode_from_angle_wavelength(double alpha,
                                      double lambda_vac_um,
                                      MediumParams const& medium,
                                      double phi)
{
    require(finite_positive(lambda_vac_um), "wavelength must be > 0");
    return PhotonMode(two_pi * medium.n0() / lambda_vac_um, alpha, phi);
}

PolarizationBasis polarization_basis(Vec3 direction)
{
    double length = norm(direction);
    if (!(length > 0) || !std::isfinite(length))
    {
        throw InvalidParam("polarization basis needs a non-zero direction");
    }
    Vec3 d = (1 / length) * direction;
    // Cross with the coordinate axis least aligned with d
    Vec3 helper{1, 0, 0};
    if (std::abs(d.y) <= std::abs(d.x) && std::abs(d.y) <= std::abs(d.z))
    {
        helper = {0, 1, 0};
    }
    else if (std::abs(d.z) <= std::abs(d.x))
    {
        helper = {0, 0, 1};
    }
    Vec3 e1 = cross(d, helper);
    e1 = (1 / norm(e1)) * e1;
    return {{e1, cross(d, e1)}};
}

//---------------------------------------------------------------------------//
namespace
{
double gaussian_envelope(Vec3 p, double sigma)
{
    return std::exp(-dot(p, p) / (2 * sigma * sigma));
}
}  // namespace

double xi_exact(Vec3 position_um, MediumParams const& medium, PerturbationParams const& pert)
{
    double n0 = medium.n0();
    double eps_b = n0 * n0;
    double eps = eps_b + 2 * n0 * pert.eta() * gaussian_envelope(position_um, pert.sigma());
    // Written as a single quotient to avoid cancellation far from the bump
    return 0.5 * (eps_b - eps) / (eps * eps_b);
}

double xi_linearized(Vec3 position_um,
                     MediumParams const& medium,
                     PerturbationParams const& pert)
{
    double n0 = medium.n0();
    return -(pert.eta() / (n0 * n0 * n0)) * gaussian_envelope(position_um, pert.sigma());
}

//---------------------------------------------------------------------------//
double f_of_r(double r, double delta, KinematicFactors const& kin, double sigma)
{
    double g2 = kin.gamma_sq;
    double a = g2 * sigma * delta;
    return kin.beta * a + std::sqrt(a * a + g2 * r * r);
}

double f_of_r(double r, PhotonMode const& mode, KinematicFactors const& kin, double sigma)
{
    return f_of_r(r, mode.cone_offset(kin.beta), kin, sigma);
}

//---------------------------------------------------------------------------//
EmissionIntegrand::EmissionIntegrand(PhotonMode const& mode,
                                     KinematicFactors const& kin,
                                     double sigma)
    : mode_(mode)
    , kin_(kin)
    , sigma_(sigma)
    , delta_(mode.cone_offset(kin.beta))
    , inv_k_sq_(1 / (mode.k() * mode.k()))
{
    require(finite_positive(sigma), "sigma must be > 0");
}

auto EmissionIntegrand::radial(double r) const -> RadialTerms
{
    RadialTerms t;
    if (r <= 0)
    {
        return t;
    }
    double g2 = kin_.gamma_sq;
    double a = g2 * sigma_ * delta_;
    double root = std::sqrt(a * a + g2 * r * r);
    double f = kin_.beta * a + root;
    double rho_sq = r * r + f * f;
    if (rho_sq == 0)
    {
        return t;
    }
    double longitudinal = sigma_ * mode_.kx() + f;
    double bracket = kin_.beta + a / root;

    t.amplitude = r * std::sqrt(rho_sq) * bracket * inv_k_sq_ / rho_sq;
    t.exponent = sigma_ * sigma_ * mode_.kperp() * mode_.kperp() + r * r
                 + longitudinal * longitudinal;
    t.spread = 2 * r * mode_.kperp() * sigma_;
    t.slope = mode_.kperp() * r;
    t.offset = mode_.kx() * f;
    return t;
}

double emission_integrand(double r,
                          double theta,
                          PhotonMode const& mode,
                          KinematicFactors const& kin,
                          double sigma)
{
    return EmissionIntegrand(mode, kin, sigma)(r, theta);
}

}  // namespace qvr
