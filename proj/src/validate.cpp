#include "qvr/validate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "qvr/errors.hpp"

namespace qvr
{
namespace
{
constexpr int gl_order = 8;

struct Rule
{
    std::array<double, gl_order> x;
    std::array<double, gl_order> w;
};

Rule const& gl_rule()
{
    static Rule const rule = [] {
        using Gauss = boost::math::quadrature::gauss<double, gl_order>;
        Rule r;
        int half = gl_order / 2;
        for (int i = 0; i < half; ++i)
        {
            r.x[half - 1 - i] = -Gauss::abscissa()[i];
            r.w[half - 1 - i] = Gauss::weights()[i];
            r.x[half + i] = Gauss::abscissa()[i];
            r.w[half + i] = Gauss::weights()[i];
        }
        return r;
    }();
    return rule;
}

// Nodes and weights of a composite rule on [a, b]
void composite_nodes(double a, double b, int panels, std::vector<double>& x, std::vector<double>& w)
{
    auto const& rule = gl_rule();
    x.clear();
    w.clear();
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
    {
        double mid = a + (p + 0.5) * h;
        for (int i = 0; i < gl_order; ++i)
        {
            x.push_back(mid + 0.5 * h * rule.x[i]);
            w.push_back(0.5 * h * rule.w[i]);
        }
    }
}

// Root of an increasing function on an expanding bracket around zero
template <class F>
double increasing_root(F const& fn, double target, double scale)
{
    double lo = -scale;
    double hi = scale;
    while (fn(lo) > target)
    {
        lo *= 2;
    }
    while (fn(hi) < target)
    {
        hi *= 2;
    }
    for (int it = 0; it < 200; ++it)
    {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi)
        {
            break;
        }
        (fn(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::string describe(SamplePoint const& p, double beta)
{
    std::ostringstream os;
    os.precision(6);
    os << "density[alpha_deg=" << rad_to_deg(p.alpha) << ",lambda_um=" << p.lambda_vac
       << ",beta=" << beta << "]";
    return os.str();
}
}  // namespace

//---------------------------------------------------------------------------//
OracleReport make_report(std::string name, double reference, double artifact, double budget)
{
    OracleReport report;
    report.quantity_name = std::move(name);
    report.reference_value = reference;
    report.artifact_value = artifact;
    double scale = std::abs(reference);
    if (scale > 0)
    {
        report.rel_error = std::abs(artifact - reference) / scale;
    }
    else
    {
        report.rel_error = artifact == 0 ? 0 : std::numeric_limits<double>::infinity();
    }
    report.budget = budget;
    report.passed = report.rel_error <= budget;
    return report;
}

bool all_passed(std::vector<OracleReport> const& reports)
{
    return std::all_of(
        reports.begin(), reports.end(), [](OracleReport const& r) { return r.passed; });
}

//---------------------------------------------------------------------------//
double xi_fourier_analytic(double q_u,
                           double k_y,
                           double k_z,
                           MediumParams const& medium,
                           PerturbationParams const& pert)
{
    double n0 = medium.n0();
    double sigma = pert.sigma();
    double q_sq = q_u * q_u + k_y * k_y + k_z * k_z;
    return -(pert.eta() / (n0 * n0 * n0)) * std::pow(two_pi, 1.5) * sigma * sigma * sigma
           * std::exp(-0.5 * sigma * sigma * q_sq);
}

double xi_fourier_numeric(double q_u,
                          double k_y,
                          double k_z,
                          MediumParams const& medium,
                          PerturbationParams const& pert,
                          int panels_per_axis)
{
    double half_width = 12 * pert.sigma();
    std::vector<double> x;
    std::vector<double> w;
    composite_nodes(-half_width, half_width, panels_per_axis, x, w);

    double total = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double plane = 0;
        for (std::size_t j = 0; j < x.size(); ++j)
        {
            double line = 0;
            for (std::size_t l = 0; l < x.size(); ++l)
            {
                Vec3 p{x[i], x[j], x[l]};
                double phase = q_u * p.x + k_y * p.y + k_z * p.z;
                line += w[l] * xi_linearized(p, medium, pert) * std::cos(phase);
            }
            plane += w[j] * line;
        }
        total += w[i] * plane;
    }
    return total;
}

//---------------------------------------------------------------------------//
double constraint_surface_distance(PhotonMode const& mode, PerturbationParams const& pert)
{
    double beta = pert.beta();
    if (beta <= 1)
    {
        throw BelowThreshold(beta);
    }
    double sigma = pert.sigma();
    Vec3 kvec = mode.wavevector();
    double k = mode.k();
    auto mismatch = [&](double s, double qy, double qz) {
        return s - (k + norm(Vec3{s - kvec.x, qy - kvec.y, qz - kvec.z})) / beta;
    };

    double s_axis = increasing_root([&](double s) { return mismatch(s, 0, 0); }, 0, 1 / sigma);
    double rho_scan = std::abs(s_axis) + 1 / sigma;
    double d_sq = s_axis * s_axis;
    constexpr int scan_rho = 64;
    constexpr int scan_phi = 32;
    for (int i = 1; i <= scan_rho; ++i)
    {
        double rho = rho_scan * i / scan_rho;
        for (int j = 0; j < scan_phi; ++j)
        {
            double phi = two_pi * j / scan_phi;
            double qy = rho * std::cos(phi);
            double qz = rho * std::sin(phi);
            double s = increasing_root([&](double t) { return mismatch(t, qy, qz); }, 0, 1 / sigma);
            d_sq = std::min(d_sq, s * s + rho * rho);
        }
    }
    return std::sqrt(d_sq);
}

double default_delta_width(PhotonMode const& mode, PerturbationParams const& pert)
{
    double sigma = pert.sigma();
    double slope = 1 - 1 / pert.beta();
    double depth = std::max(1.0, sigma * constraint_surface_distance(mode, pert));
    return 0.05 * slope / (sigma * depth);
}

double brute_force_density_at_width(PhotonMode const& mode,
                                    MediumParams const& medium,
                                    PerturbationParams const& pert,
                                    double delta_width,
                                    BruteForceGrid const& grid)
{
    if (!(delta_width > 0))
    {
        throw InvalidParam("delta width must be > 0");
    }
    double beta = pert.beta();
    if (beta <= 1)
    {
        return 0;
    }
    double sigma = pert.sigma();
    double sigma_sq = sigma * sigma;
    Vec3 kvec = mode.wavevector();
    double k = mode.k();

    auto partner = [&](double s, double qy, double qz) {
        return Vec3{s - kvec.x, qy - kvec.y, qz - kvec.z};
    };
    // Energy-momentum mismatch (k + k')_x - (k + k') / beta
    auto mismatch = [&](double s, double qy, double qz) {
        return s - (k + norm(partner(s, qy, qz))) / beta;
    };

    double d = constraint_surface_distance(mode, pert);
    double rho_max = std::sqrt(d * d + 50 / sigma_sq);

    std::vector<double> rho_x;
    std::vector<double> rho_w;
    composite_nodes(0, rho_max, grid.rho_panels, rho_x, rho_w);

    double window = grid.window_widths * delta_width;
    double norm_const = 1 / (std::sqrt(two_pi) * delta_width);
    double inv_two_w_sq = 1 / (2 * delta_width * delta_width);

    std::vector<double> s_x;
    std::vector<double> s_w;
    double total = 0;
    for (std::size_t i = 0; i < rho_x.size(); ++i)
    {
        double rho = rho_x[i];
        double ring = 0;
        for (int j = 0; j < grid.phi_nodes; ++j)
        {
            double phi = two_pi * j / grid.phi_nodes;
            double qy = rho * std::cos(phi);
            double qz = rho * std::sin(phi);
            auto h = [&](double s) { return mismatch(s, qy, qz); };
            double s_lo = increasing_root(h, -window, 1 / sigma);
            double s_hi = increasing_root(h, window, 1 / sigma);
            composite_nodes(s_lo, s_hi, grid.s_panels, s_x, s_w);

            double line = 0;
            for (std::size_t l = 0; l < s_x.size(); ++l)
            {
                double s = s_x[l];
                Vec3 kp = partner(s, qy, qz);
                double kp_norm = norm(kp);
                double hv = s - (k + kp_norm) / beta;
                double c = dot(kvec, kp) / (k * kp_norm);
                double weight = grid.weight == AngularWeight::printed_cosine_sq ? c * c
                                                                                 : 1 + c * c;
                line += s_w[l] * k * kp_norm * std::exp(-sigma_sq * (s * s + rho * rho))
                        * weight * norm_const * std::exp(-hv * hv * inv_two_w_sq);
            }
            ring += line;
        }
        total += rho_w[i] * rho * ring * (two_pi / grid.phi_nodes);
    }

    double n0 = medium.n0();
    double n0_6 = std::pow(n0, 6);
    double eta = pert.eta();
    double mode_density = k * k / (two_pi * two_pi * two_pi);
    double coupling = 32 * std::pow(sigma, 6) * pi * pi * eta * eta / (n0_6 * beta * beta);
    double delta_at_zero = pert.length() / two_pi;
    return mode_density * coupling * delta_at_zero * total;
}

BruteForceResult brute_force_density(PhotonMode const& mode,
                                     MediumParams const& medium,
                                     PerturbationParams const& pert,
                                     std::optional<double> delta_width,
                                     BruteForceGrid const& grid)
{
    BruteForceResult result;
    if (pert.beta() <= 1)
    {
        return result;
    }
    result.delta_width = delta_width ? *delta_width : default_delta_width(mode, pert);
    result.value_coarse = brute_force_density_at_width(mode, medium, pert, result.delta_width, grid);
    result.value = brute_force_density_at_width(mode, medium, pert, 0.5 * result.delta_width, grid);
    result.rel_change = result.value != 0
                            ? std::abs(result.value_coarse - result.value) / std::abs(result.value)
                            : 0;
    if (result.rel_change > grid.stability_budget)
    {
        throw NonConvergence("brute-force density changed by "
                             + std::to_string(result.rel_change)
                             + " when the delta width was halved");
    }
    return result;
}

//---------------------------------------------------------------------------//
std::vector<SamplePoint> default_sample_points(PerturbationParams const& pert)
{
    double sigma = pert.sigma();
    double theta0 = pert.beta() > 1 ? std::acos(1 / pert.beta()) : 0.0;
    double far = std::min(theta0 + deg_to_rad(25), deg_to_rad(170));
    return {
        {0.0, 8 * sigma, std::nullopt},
        {deg_to_rad(15), 3 * sigma, std::nullopt},
        {theta0, 8 * sigma, std::nullopt},
        {theta0 + deg_to_rad(10), 8 * sigma, std::nullopt},
        {far, 8 * sigma, std::nullopt},
        {deg_to_rad(10), 8 * sigma, 1.05},
    };
}

std::vector<OracleReport> run_validation_suite(MediumParams const& medium,
                                               PerturbationParams const& pert,
                                               std::vector<SamplePoint> const& sample_points,
                                               ValidationBudgets const& budgets,
                                               DensityOptions const& opts,
                                               DensityFn const& density)
{
    if (sample_points.size() < 3)
    {
        throw InvalidParam("validation needs at least 3 sample points");
    }
    DensityOptions single = opts;
    single.both_polarizations = false;
    DensityFn artifact = density;
    if (!artifact)
    {
        artifact = [single](PhotonMode const& m, MediumParams const& med, PerturbationParams const& p) {
            return density_at(m, med, p, single);
        };
    }

    std::vector<OracleReport> reports;

    // Analytic Fourier transform against direct 3D quadrature
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> component(-2.0 / pert.sigma(), 2.0 / pert.sigma());
    for (int i = 0; i < budgets.fourier_points; ++i)
    {
        double qu = component(rng);
        double ky = component(rng);
        double kz = component(rng);
        std::ostringstream name;
        name.precision(6);
        name << "xi_fourier[q_u=" << qu << ",k_y=" << ky << ",k_z=" << kz << "]";
        reports.push_back(make_report(name.str(),
                                      xi_fourier_numeric(qu, ky, kz, medium, pert),
                                      xi_fourier_analytic(qu, ky, kz, medium, pert),
                                      budgets.fourier));
    }

    for (auto const& point : sample_points)
    {
        auto p = point.beta ? pert.with_beta(*point.beta) : pert;
        auto mode = mode_from_angle_wavelength(point.alpha, point.lambda_vac, medium);
        std::string label = describe(point, p.beta());
        double budget = p.beta() < budgets.near_threshold_beta ? budgets.near_threshold_oracle
                                                               : budgets.oracle;

        // Brute-force partner integral against the reduced density
        auto sample = artifact(mode, medium, p);
        BruteForceGrid grid;
        grid.stability_budget = std::numeric_limits<double>::infinity();
        auto brute = brute_force_density(mode, medium, p, std::nullopt, grid);
        reports.push_back(make_report("brute_force_" + label, brute.value, sample.value, budget));
        reports.push_back(make_report(
            "delta_width_halving_" + label, brute.value, brute.value_coarse, budgets.regularization));

        // Quadrature self-convergence
        if (p.beta() > 1)
        {
            auto kin = kinematics(p.beta());
            auto base = integrate_I(mode, kin, p.sigma(), opts.quad);
            auto finer_opts = opts.quad;
            finer_opts.initial_nodes_r *= 2;
            finer_opts.initial_nodes_theta *= 2;
            auto finer = integrate_I(mode, kin, p.sigma(), finer_opts);
            auto report = make_report("self_convergence_" + label,
                                      finer.value,
                                      base.value,
                                      budgets.self_convergence_factor * opts.quad.rel_tol);
            report.passed = report.passed && base.converged && finer.converged;
            reports.push_back(report);
        }
    }
    return reports;
}

}  // namespace qvr
