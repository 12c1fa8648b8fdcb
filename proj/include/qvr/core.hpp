#pragma once

// Domain types and pointwise physics for vacuum pair emission from a
// moving Gaussian refractive-index perturbation.
//
// Unit conventions used throughout the library:
//   lengths        micrometres (um)
//   wavenumbers    rad/um, measured inside the medium (k = 2 pi n0 / lambda)
//   angles         radians
//   wavelengths    vacuum wavelength lambda = 2 pi n0 / k
// The speed of light never appears: the speed ratio beta = n0 v / c absorbs
// it everywhere.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

namespace qvr
{
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2 * std::numbers::pi;

inline constexpr double um_per_cm = 1e4;

inline constexpr double deg_to_rad(double deg) { return deg * pi / 180; }
inline constexpr double rad_to_deg(double rad) { return rad * 180 / pi; }

//---------------------------------------------------------------------------//
// Small 3-vector
//---------------------------------------------------------------------------//
struct Vec3
{
    double x{0};
    double y{0};
    double z{0};

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b)
    {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b)
    {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend constexpr Vec3 operator*(double s, Vec3 a)
    {
        return {s * a.x, s * a.y, s * a.z};
    }
};

inline constexpr double dot(Vec3 a, Vec3 b)
{
    return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline constexpr Vec3 cross(Vec3 a, Vec3 b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

//---------------------------------------------------------------------------//
// Domain types
//---------------------------------------------------------------------------//
/*!
 * Uniform, non-dispersive background medium.
 *
 * The Kerr index n2 [cm^2/W] is optional and only used to derive the
 * perturbation amplitude from a pump intensity.
 */
class MediumParams
{
  public:
    explicit MediumParams(double n0, std::optional<double> n2 = std::nullopt);

    double n0() const noexcept { return n0_; }
    std::optional<double> n2() const noexcept { return n2_; }

    friend bool operator==(MediumParams const&, MediumParams const&) = default;

  private:
    double n0_;
    std::optional<double> n2_;
};

/*!
 * Gaussian index bump n^2 = n0^2 + 2 n0 eta exp(-|x - vt|^2 / 2 sigma^2)
 * travelling along +x with speed ratio beta = n0 v / c over a length L.
 */
class PerturbationParams
{
  public:
    PerturbationParams(double eta, double sigma_um, double beta, double length_um);

    double eta() const noexcept { return eta_; }
    double sigma() const noexcept { return sigma_; }
    double beta() const noexcept { return beta_; }
    double length() const noexcept { return length_; }

    // Copy with one field replaced
    PerturbationParams with_eta(double eta) const;
    PerturbationParams with_sigma(double sigma_um) const;
    PerturbationParams with_beta(double beta) const;
    PerturbationParams with_length(double length_um) const;

    //! True when eta / n0 >= 0.1, where the linearized coupling is suspect.
    bool outside_perturbative_regime(MediumParams const& medium) const;

    friend bool operator==(PerturbationParams const&, PerturbationParams const&) = default;

  private:
    double eta_;
    double sigma_;
    double beta_;
    double length_;
};

//! Superluminal kinematic factors; only constructible for beta > 1.
struct KinematicFactors
{
    double beta;
    double gamma_sq;  //!< 1 / (beta^2 - 1)
    double theta0;    //!< cone half-angle arccos(1 / beta)
};

/*!
 * Single emitted photon: in-medium wavenumber k, polar angle alpha from the
 * propagation axis x and azimuth phi.
 */
class PhotonMode
{
  public:
    PhotonMode(double k, double alpha, double phi = 0);

    double k() const noexcept { return k_; }
    double alpha() const noexcept { return alpha_; }
    double phi() const noexcept { return phi_; }
    double kx() const noexcept { return kx_; }
    double kperp() const noexcept { return kperp_; }

    //! Frequency in units where c = 1
    double omega(MediumParams const& medium) const { return k_ / medium.n0(); }
    //! Vacuum wavelength [um]
    double vacuum_wavelength(MediumParams const& medium) const
    {
        return two_pi * medium.n0() / k_;
    }

    Vec3 direction() const;
    Vec3 wavevector() const { return k_ * direction(); }

    //! k - beta k_x evaluated as k (1 - beta cos alpha)
    double cone_offset(double beta) const
    {
        return k_ * (1 - beta * std::cos(alpha_));
    }

  private:
    double k_;
    double alpha_;
    double phi_;
    double kx_;
    double kperp_;
};

//! Orthonormal transverse basis attached to a propagation direction.
struct PolarizationBasis
{
    std::array<Vec3, 2> e;
};

//---------------------------------------------------------------------------//
// Operations
//---------------------------------------------------------------------------//
// Kinematic factors for a speed ratio; throws BelowThreshold when beta <= 1
KinematicFactors kinematics(double beta);

// Perturbation amplitude from the optical Kerr effect, eta = n2 I
double kerr_eta(double n2_cm2_per_W, double intensity_W_per_cm2);

/*!
 * Resolve the perturbation amplitude from an explicit value and/or a Kerr
 * pair (n2, I). When both are supplied they must agree to 1e-9 relative.
 */
double resolve_eta(std::optional<double> eta,
                   std::optional<double> n2_cm2_per_W,
                   std::optional<double> intensity_W_per_cm2);

// Photon mode from emission angle and vacuum wavelength
PhotonMode mode_from_angle_wavelength(double alpha,
                                      double lambda_vac_um,
                                      MediumParams const& medium,
                                      double phi = 0);

PolarizationBasis polarization_basis(Vec3 direction);

// Interaction density 1/2 (1/eps - 1/n0^2) of the full Gaussian profile
double xi_exact(Vec3 position_um,
                MediumParams const& medium,
                PerturbationParams const& pert);

// First-order form -(eta / n0^3) exp(-|r|^2 / 2 sigma^2)
double xi_linearized(Vec3 position_um,
                     MediumParams const& medium,
                     PerturbationParams const& pert);

/*!
 * Longitudinal partner coordinate on the pair constraint surface,
 *
 *   f(r) = beta gamma^2 sigma Delta + sqrt(gamma^4 sigma^2 Delta^2 + gamma^2 r^2)
 *
 * with Delta = k - beta k_x.
 */
double f_of_r(double r, double delta, KinematicFactors const& kin, double sigma);
double f_of_r(double r,
              PhotonMode const& mode,
              KinematicFactors const& kin,
              double sigma);

//---------------------------------------------------------------------------//
/*!
 * Integrand of the reduced emission integral I(beta, sigma, k) over the
 * dimensionless strip r in [0, inf), theta in [0, 2 pi]:
 *
 *   r sqrt(r^2 + f^2)
 *   * exp(-(sigma^2 k_perp^2 + r^2 + 2 r k_perp sigma cos(theta)
 *           + (sigma k_x + f)^2))
 *   * (k_perp r cos(theta) + k_x f)^2 / (k^2 (r^2 + f^2))
 *   * (beta + gamma^2 sigma Delta / sqrt(gamma^4 sigma^2 Delta^2 + gamma^2 r^2))
 *
 * For a fixed r the theta dependence factors as
 * amplitude * exp(-(exponent + spread cos(theta))) * (slope cos(theta) + offset)^2,
 * which the quadrature uses to hoist all r-only work out of the theta loop.
 */
class EmissionIntegrand
{
  public:
    struct RadialTerms
    {
        double amplitude{0};  //!< r rho bracket / (k^2 rho^2)
        double exponent{0};   //!< sigma^2 k_perp^2 + r^2 + (sigma k_x + f)^2
        double spread{0};     //!< 2 r k_perp sigma
        double slope{0};      //!< k_perp r
        double offset{0};     //!< k_x f

        double at_cos(double cos_theta) const
        {
            double p = slope * cos_theta + offset;
            return amplitude * std::exp(-(exponent + spread * cos_theta)) * p * p;
        }
    };

    EmissionIntegrand(PhotonMode const& mode, KinematicFactors const& kin, double sigma);

    RadialTerms radial(double r) const;

    double operator()(double r, double theta) const
    {
        return this->radial(r).at_cos(std::cos(theta));
    }

    double f(double r) const { return f_of_r(r, delta_, kin_, sigma_); }

    double delta() const noexcept { return delta_; }
    double sigma() const noexcept { return sigma_; }
    KinematicFactors const& kin() const noexcept { return kin_; }
    PhotonMode const& mode() const noexcept { return mode_; }

  private:
    PhotonMode mode_;
    KinematicFactors kin_;
    double sigma_;
    double delta_;
    double inv_k_sq_;
};

// Pointwise integrand value; zero at the removable singularity r^2 + f^2 = 0
double emission_integrand(double r,
                          double theta,
                          PhotonMode const& mode,
                          KinematicFactors const& kin,
                          double sigma);

}  // namespace qvr
