#include <cmath>

#include <doctest.h>

#include "qvr/errors.hpp"
#include "qvr/validate.hpp"

using namespace qvr;

namespace
{
MediumParams const glass{1.5};
PerturbationParams const baseline{1e-2, 1.0, 1.1, 5e4};

// Density with the sign of the square root in f(r) flipped
DensitySample flipped_root_density(PhotonMode const& mode,
                                   MediumParams const& medium,
                                   PerturbationParams const& pert)
{
    auto kin = kinematics(pert.beta());
    double sigma = pert.sigma();
    double d = mode.cone_offset(kin.beta);
    double k = mode.k();
    double kx = mode.kx();
    double kp = mode.kperp();
    auto radial = [&](double r) {
        EmissionIntegrand::RadialTerms t;
        double root = std::sqrt(kin.gamma_sq * kin.gamma_sq * sigma * sigma * d * d
                                + kin.gamma_sq * r * r);
        double f = kin.beta * kin.gamma_sq * sigma * d - root;
        double rho_sq = r * r + f * f;
        if (r <= 0 || rho_sq <= 0)
        {
            return t;
        }
        double bracket = kin.beta + kin.gamma_sq * sigma * d / root;
        t.amplitude = r * std::sqrt(rho_sq) * bracket / (k * k * rho_sq);
        t.exponent = sigma * sigma * kp * kp + r * r + (sigma * kx + f) * (sigma * kx + f);
        t.spread = 2 * r * kp * sigma;
        t.slope = kp * r;
        t.offset = kx * f;
        return t;
    };
    QuadratureOptions opts;
    auto cut = strip_cutoff(EmissionIntegrand(mode, kin, sigma), opts);
    auto result = integrate_strip(radial, cut.r_max, 0.0, opts);
    return {density_prefactor(medium, pert, kin) * k * k * k * result.value,
            result.est_rel_error,
            result.converged};
}

OracleReport const* find(std::vector<OracleReport> const& reports, std::string const& prefix)
{
    for (auto const& r : reports)
    {
        if (r.quantity_name.rfind(prefix, 0) == 0)
        {
            return &r;
        }
    }
    return nullptr;
}
}  // namespace

TEST_SUITE("validate")
{
TEST_CASE("report bookkeeping")
{
    auto ok = make_report("x", 2.0, 2.01, 0.01);
    CHECK(ok.quantity_name == "x");
    CHECK(ok.rel_error == doctest::Approx(0.005));
    CHECK(ok.passed);
    auto bad = make_report("y", 2.0, 2.1, 0.01);
    CHECK_FALSE(bad.passed);
    CHECK(make_report("z", 0.0, 0.0, 1e-9).passed);
    CHECK(all_passed({ok}));
    CHECK_FALSE(all_passed({ok, bad}));
}

TEST_CASE("analytic Fourier transform")
{
    double zero = xi_fourier_analytic(0, 0, 0, glass, baseline);
    CHECK(zero == doctest::Approx(-(1e-2 / 3.375) * std::pow(two_pi, 1.5)).epsilon(1e-14));
    // sigma |q| = 2
    double decayed = xi_fourier_analytic(2 / std::sqrt(3.0), 2 / std::sqrt(3.0), 2 / std::sqrt(3.0), glass, baseline);
    CHECK(decayed == doctest::Approx(zero * std::exp(-2.0)).epsilon(1e-14));
    auto wide = baseline.with_sigma(2);
    CHECK(xi_fourier_analytic(0, 0, 0, glass, wide) == doctest::Approx(8 * zero).epsilon(1e-14));
}

TEST_CASE("analytic transform matches direct quadrature")
{
    for (auto [qu, ky, kz] : {std::tuple{0.0, 0.0, 0.0}, {1.3, -0.4, 0.9}, {-1.9, 1.7, -0.2}})
    {
        double analytic = xi_fourier_analytic(qu, ky, kz, glass, baseline);
        double numeric = xi_fourier_numeric(qu, ky, kz, glass, baseline);
        CHECK(std::abs(numeric - analytic) <= 1e-6 * std::abs(analytic));
    }
}

TEST_CASE("brute-force density")
{
    auto mode = mode_from_angle_wavelength(deg_to_rad(15), 3, glass);
    CHECK(brute_force_density(mode, glass, baseline.with_beta(0.9)).value == 0);
    CHECK(brute_force_density(mode, glass, baseline.with_beta(1.0)).value == 0);

    auto brute = brute_force_density(mode, glass, baseline);
    double reduced = density_at(mode, glass, baseline).value;
    CHECK(brute.value == doctest::Approx(reduced).epsilon(0.02));
    CHECK(brute.rel_change < 0.01);
    CHECK(brute.delta_width == doctest::Approx(default_delta_width(mode, baseline)));

    BruteForceGrid strict;
    strict.stability_budget = 1e-12;
    CHECK_THROWS_AS(brute_force_density(mode, glass, baseline, std::nullopt, strict), NonConvergence);

    BruteForceGrid summed;
    summed.weight = AngularWeight::polarization_sum;
    double both = brute_force_density_at_width(mode, glass, baseline, brute.delta_width, summed);
    // 1 + c^2 >= 2 c^2 pointwise
    CHECK(both >= 2 * brute.value_coarse * (1 - 1e-12));
}

TEST_CASE("near-threshold agreement within the widened budget")
{
    auto pert = baseline.with_beta(1.05);
    auto mode = mode_from_angle_wavelength(deg_to_rad(10), 8, glass);
    auto brute = brute_force_density(mode, glass, pert);
    CHECK(brute.value == doctest::Approx(density_at(mode, glass, pert).value).epsilon(0.05));
}

TEST_CASE("default suite passes and a corrupted integrand fails")
{
    auto points = default_sample_points(baseline);
    REQUIRE(points.size() >= 5);
    auto reports = run_validation_suite(glass, baseline, points);
    for (auto const& r : reports)
    {
        INFO(r.quantity_name << ": reference " << r.reference_value << ", artifact "
                             << r.artifact_value << ", rel_error " << r.rel_error);
        CHECK(r.passed);
        CHECK(r.passed == (r.rel_error <= r.budget));
    }
    CHECK(find(reports, "xi_fourier") != nullptr);
    CHECK(find(reports, "brute_force") != nullptr);
    CHECK(find(reports, "delta_width_halving") != nullptr);
    CHECK(find(reports, "self_convergence") != nullptr);

    ValidationBudgets budgets;
    budgets.fourier_points = 0;
    auto mutant = run_validation_suite(glass, baseline, points, budgets, {}, flipped_root_density);
    int failed_oracles = 0;
    for (auto const& r : mutant)
    {
        if (r.quantity_name.rfind("brute_force", 0) == 0 && !r.passed)
        {
            ++failed_oracles;
        }
    }
    CHECK(failed_oracles >= 1);
    CHECK_FALSE(all_passed(mutant));
}

TEST_CASE("suite preconditions")
{
    auto points = default_sample_points(baseline);
    points.resize(2);
    CHECK_THROWS_AS(run_validation_suite(glass, baseline, points), InvalidParam);
}
}
