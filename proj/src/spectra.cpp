#include "qvr/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qvr/errors.hpp"
#include "qvr/parallel.hpp"

namespace qvr
{
//---------------------------------------------------------------------------//
std::size_t SpectrumGrid::failed_cells() const
{
    return static_cast<std::size_t>(std::count(converged.begin(), converged.end(), 0));
}

void DetectorSpec::validate() const
{
    if (!(half_angle > 0 && half_angle <= pi))
    {
        throw InvalidParam("detector half-angle must lie in (0, pi]");
    }
    if (!(lambda_min > 0 && lambda_min < lambda_max) || !std::isfinite(lambda_max))
    {
        throw InvalidParam("detector band must satisfy 0 < lambda_min < lambda_max");
    }
    if (!(rep_rate > 0) || !std::isfinite(rep_rate))
    {
        throw InvalidParam("repetition rate must be > 0");
    }
}

//---------------------------------------------------------------------------//
double density_prefactor(MediumParams const& medium,
                         PerturbationParams const& pert,
                         KinematicFactors const& kin)
{
    double n0_sq = medium.n0() * medium.n0();
    double n0_6 = n0_sq * n0_sq * n0_sq;
    double sigma = pert.sigma();
    double beta = kin.beta;
    double constant = 2 * pert.eta() * pert.eta() * pert.length() * sigma * sigma * sigma
                      / (pi * pi * beta * beta * n0_6);
    return constant * beta * kin.gamma_sq;
}

DensitySample density_at(PhotonMode const& mode,
                         MediumParams const& medium,
                         PerturbationParams const& pert,
                         DensityOptions const& opts)
{
    if (pert.beta() <= 1)
    {
        return {};
    }
    auto kin = kinematics(pert.beta());
    auto integral = integrate_I(mode, kin, pert.sigma(), opts.quad);
    double k = mode.k();
    double value = density_prefactor(medium, pert, kin) * k * k * k * integral.value;
    if (opts.both_polarizations)
    {
        value *= 2;
    }
    return {value, integral.est_rel_error, integral.converged};
}

double per_lambda_jacobian(double lambda_vac_um, MediumParams const& medium)
{
    return two_pi * medium.n0() / (lambda_vac_um * lambda_vac_um);
}

std::vector<double> linspace(Range range, std::size_t count)
{
    if (count < 2)
    {
        throw InvalidParam("linspace needs at least two nodes");
    }
    std::vector<double> result(count);
    double step = (range.max - range.min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
    {
        result[i] = range.min + step * static_cast<double>(i);
    }
    result.back() = range.max;
    return result;
}

//---------------------------------------------------------------------------//
SpectrumGrid spectrum_grid(MediumParams const& medium,
                           PerturbationParams const& pert,
                           Range alpha_range,
                           Range lambda_range,
                           std::size_t n_alpha,
                           std::size_t n_lambda,
                           DensityOptions const& opts,
                           unsigned threads)
{
    if (!(alpha_range.min >= 0 && alpha_range.min < alpha_range.max
          && alpha_range.max <= pi))
    {
        throw InvalidParam("angle range must satisfy 0 <= min < max <= pi");
    }
    if (!(lambda_range.min > 0 && lambda_range.min < lambda_range.max)
        || !std::isfinite(lambda_range.max))
    {
        throw InvalidParam("wavelength range must satisfy 0 < min < max");
    }
    if (n_alpha < 2 || n_lambda < 2)
    {
        throw InvalidParam("grid needs at least 2 nodes per axis");
    }
    opts.quad.validate();

    SpectrumGrid grid{medium,
                      pert,
                      opts,
                      linspace(alpha_range, n_alpha),
                      linspace(lambda_range, n_lambda),
                      std::vector<double>(n_alpha * n_lambda, 0.0),
                      std::vector<std::uint8_t>(n_alpha * n_lambda, 1)};
    if (grid.below_threshold())
    {
        return grid;
    }

    parallel_for(grid.density.size(), threads, [&](std::size_t cell) {
        std::size_t i = cell / n_lambda;
        std::size_t j = cell % n_lambda;
        auto mode = mode_from_angle_wavelength(grid.alphas[i], grid.lambdas[j], medium);
        auto sample = density_at(mode, medium, pert, opts);
        grid.density[cell] = sample.value;
        grid.converged[cell] = sample.converged ? 1 : 0;
    });
    return grid;
}

//---------------------------------------------------------------------------//
SpectrumPeak find_peak(SpectrumGrid const& grid)
{
    std::size_t best = grid.density.size();
    double best_value = 0;
    for (std::size_t c = 0; c < grid.density.size(); ++c)
    {
        if (grid.converged[c] && grid.density[c] > best_value)
        {
            best_value = grid.density[c];
            best = c;
        }
    }
    if (best == grid.density.size())
    {
        throw InvalidParam("spectrum has no positive converged cell");
    }

    SpectrumPeak peak;
    peak.i_alpha = best / grid.lambdas.size();
    peak.j_lambda = best % grid.lambdas.size();
    peak.alpha_max = grid.alphas[peak.i_alpha];
    peak.lambda_max = grid.lambdas[peak.j_lambda];
    peak.value = best_value;

    std::size_t j = peak.j_lambda;
    if (j == 0 || j + 1 == grid.lambdas.size())
    {
        return peak;
    }
    std::size_t lo = grid.index(peak.i_alpha, j - 1);
    std::size_t hi = grid.index(peak.i_alpha, j + 1);
    if (!grid.converged[lo] || !grid.converged[hi] || grid.density[lo] <= 0
        || grid.density[hi] <= 0)
    {
        return peak;
    }
    double y_lo = std::log(grid.density[lo]);
    double y_mid = std::log(best_value);
    double y_hi = std::log(grid.density[hi]);
    double curvature = y_lo - 2 * y_mid + y_hi;
    if (!(curvature < 0))
    {
        return peak;
    }
    double shift = 0.5 * (y_lo - y_hi) / curvature;
    double step = grid.lambdas[j + 1] - grid.lambdas[j];
    peak.lambda_max = grid.lambdas[j] + shift * step;
    peak.value = std::exp(y_mid - 0.25 * (y_lo - y_hi) * shift);
    return peak;
}

//---------------------------------------------------------------------------//
CountRate integrated_counts(MediumParams const& medium,
                            PerturbationParams const& pert,
                            DetectorSpec const& detector,
                            DensityOptions const& opts)
{
    detector.validate();
    opts.quad.validate();
    if (pert.beta() <= 1)
    {
        return {};
    }

    bool inner_converged = true;
    double inner_error = 0;
    auto spectral = [&](double alpha) {
        auto over_lambda = [&](double lambda) {
            auto mode = mode_from_angle_wavelength(alpha, lambda, medium);
            auto sample = density_at(mode, medium, pert, opts);
            inner_converged = inner_converged && sample.converged;
            inner_error = std::max(inner_error, sample.est_rel_error);
            return sample.value * per_lambda_jacobian(lambda, medium);
        };
        auto band = integrate_1d(over_lambda, detector.lambda_min, detector.lambda_max, opts.quad);
        inner_converged = inner_converged && band.converged;
        inner_error = std::max(inner_error, band.est_rel_error);
        // Azimuthal symmetry: the phi integral is 2 pi
        return two_pi * std::sin(alpha) * band.value;
    };
    auto total = integrate_1d(spectral, 0.0, detector.half_angle, opts.quad);

    CountRate rate;
    rate.photons_per_pulse = total.value;
    rate.counts_per_second = total.value * detector.rep_rate;
    rate.est_rel_error = std::max(total.est_rel_error, inner_error);
    rate.converged = total.converged && inner_converged;
    return rate;
}

}  // namespace qvr
