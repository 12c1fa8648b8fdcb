#include "qvr/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qvr/errors.hpp"

namespace qvr
{
namespace
{
constexpr int panel_order = 8;

struct PanelRule
{
    std::array<double, panel_order> x;  // on [-1, 1], ascending
    std::array<double, panel_order> w;
};

PanelRule const& panel_rule()
{
    static PanelRule const rule = [] {
        using Gauss = boost::math::quadrature::gauss<double, panel_order>;
        auto const& abscissa = Gauss::abscissa();
        auto const& weights = Gauss::weights();
        PanelRule r;
        int half = panel_order / 2;
        for (int i = 0; i < half; ++i)
        {
            r.x[half - 1 - i] = -abscissa[i];
            r.w[half - 1 - i] = weights[i];
            r.x[half + i] = abscissa[i];
            r.w[half + i] = weights[i];
        }
        return r;
    }();
    return rule;
}

double positive_part_sq(double x)
{
    return x > 0 ? x * x : 0;
}

//---------------------------------------------------------------------------//
// One tensor-rule evaluation with a fixed number of r panels and theta nodes
struct StripRule
{
    RadialTermsFn const& radial;
    double r_max;
    double shift;

    double operator()(int panels, int theta_nodes, std::size_t& count) const
    {
        // Periodic trapezoid folded onto [0, pi] using cos(theta) symmetry
        int half = theta_nodes / 2;
        std::vector<double> cos_theta(half + 1);
        std::vector<double> weight(half + 1, 2.0);
        for (int j = 0; j <= half; ++j)
        {
            cos_theta[j] = std::cos(two_pi * j / theta_nodes);
        }
        weight[0] = 1;
        if (theta_nodes % 2 == 0)
        {
            weight[half] = 1;
        }
        double dtheta = two_pi / theta_nodes;

        auto const& rule = panel_rule();
        double h = r_max / panels;
        double total = 0;
        for (int p = 0; p < panels; ++p)
        {
            double mid = (p + 0.5) * h;
            double panel_sum = 0;
            for (int i = 0; i < panel_order; ++i)
            {
                auto terms = radial(mid + 0.5 * h * rule.x[i]);
                terms.exponent -= shift;
                double ring = 0;
                for (int j = 0; j <= half; ++j)
                {
                    ring += weight[j] * terms.at_cos(cos_theta[j]);
                }
                panel_sum += rule.w[i] * ring;
                count += half + 1;
            }
            total += panel_sum;
        }
        return total * 0.5 * h * dtheta;
    }
};
}  // namespace

//---------------------------------------------------------------------------//
void QuadratureOptions::validate() const
{
    if (!(rel_tol > 0) || !std::isfinite(rel_tol))
    {
        throw InvalidParam("rel_tol must be > 0");
    }
    if (max_refinements < 0)
    {
        throw InvalidParam("max_refinements must be >= 0");
    }
    if (!(r_cutoff_sigmas >= 4))
    {
        throw InvalidParam("r_cutoff_sigmas must be >= 4");
    }
    if (initial_nodes_r < 8 || initial_nodes_theta < 8)
    {
        throw InvalidParam("initial node counts must be >= 8");
    }
}

QuadratureResult const& require_converged(QuadratureResult const& result)
{
    if (!result.converged)
    {
        throw NonConvergence("quadrature stopped at estimated relative error "
                             + std::to_string(result.est_rel_error));
    }
    return result;
}

//---------------------------------------------------------------------------//
StripCutoff strip_cutoff(EmissionIntegrand const& integrand, QuadratureOptions const& opts)
{
    auto const& kin = integrand.kin();
    auto const& mode = integrand.mode();
    double sigma = integrand.sigma();
    double gamma = std::sqrt(kin.gamma_sq);

    double a = sigma * mode.kperp();
    double c0 = sigma * mode.kx() + kin.beta * kin.gamma_sq * sigma * integrand.delta();
    auto lower_bound = [&](double r) {
        return positive_part_sq(r - a) + positive_part_sq(c0 + gamma * r);
    };
    // Exponent along theta = pi, where the transverse term is smallest
    auto exponent_at = [&](double r) {
        double d = integrand.f(r) + sigma * mode.kx();
        return (r - a) * (r - a) + d * d;
    };

    // Every sample bounds the true minimum from above
    double r_hi = std::max({a, -c0 / gamma, 0.0}) + 4;
    constexpr int samples = 256;
    double reference = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i)
    {
        reference = std::min(reference, exponent_at(r_hi * i / samples));
    }

    double margin = std::max(0.5 * opts.r_cutoff_sigmas * opts.r_cutoff_sigmas,
                             std::log(100 / opts.rel_tol));
    double target = reference + margin;

    double lo = 0;
    double hi = std::max(r_hi, 1.0);
    while (lower_bound(hi) < target)
    {
        hi *= 2;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it)
    {
        double mid = 0.5 * (lo + hi);
        (lower_bound(mid) < target ? lo : hi) = mid;
    }
    return {hi, reference};
}

//---------------------------------------------------------------------------//
QuadratureResult integrate_strip(RadialTermsFn const& radial,
                                 double r_max,
                                 double exponent_shift,
                                 QuadratureOptions const& opts)
{
    opts.validate();
    StripRule rule{radial, r_max, exponent_shift};
    double restore = std::exp(-exponent_shift);

    QuadratureResult result;
    int panels = (opts.initial_nodes_r + panel_order - 1) / panel_order;
    int theta_nodes = opts.initial_nodes_theta;
    double estimate = rule(panels, theta_nodes, result.nodes_evaluated);

    double tol = opts.rel_tol;
    while (true)
    {
        double finer_r = rule(2 * panels, theta_nodes, result.nodes_evaluated);
        double finer_theta = rule(panels, 2 * theta_nodes, result.nodes_evaluated);
        double err_r = std::abs(finer_r - estimate);
        double err_theta = std::abs(finer_theta - estimate);
        double scale = std::max({std::abs(estimate), std::abs(finer_r), std::abs(finer_theta)});

        if (scale == 0)
        {
            result.value = 0;
            result.est_rel_error = 0;
            result.converged = true;
            return result;
        }
        result.value = estimate * restore;
        result.est_rel_error = (err_r + err_theta) / scale;
        if (result.est_rel_error <= tol)
        {
            result.converged = true;
            return result;
        }
        if (result.refinements_used >= opts.max_refinements)
        {
            result.converged = false;
            return result;
        }
        ++result.refinements_used;

        bool refine_r = err_r > 0.5 * tol * scale;
        bool refine_theta = err_theta > 0.5 * tol * scale;
        if (!refine_r && !refine_theta)
        {
            (err_r >= err_theta ? refine_r : refine_theta) = true;
        }
        if (refine_r && refine_theta)
        {
            panels *= 2;
            theta_nodes *= 2;
            estimate = rule(panels, theta_nodes, result.nodes_evaluated);
        }
        else if (refine_r)
        {
            panels *= 2;
            estimate = finer_r;
        }
        else
        {
            theta_nodes *= 2;
            estimate = finer_theta;
        }
    }
}

QuadratureResult integrate_I(PhotonMode const& mode,
                             KinematicFactors const& kin,
                             double sigma,
                             QuadratureOptions const& opts)
{
    if (kin.beta <= 1)
    {
        throw BelowThreshold(kin.beta);
    }
    EmissionIntegrand integrand(mode, kin, sigma);
    auto cut = strip_cutoff(integrand, opts);
    return integrate_strip([&integrand](double r) { return integrand.radial(r); },
                           cut.r_max,
                           cut.reference_exponent,
                           opts);
}

//---------------------------------------------------------------------------//
QuadratureResult integrate_1d(std::function<double(double)> const& f,
                              double a,
                              double b,
                              QuadratureOptions const& opts)
{
    opts.validate();
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    {
        throw InvalidParam("integration interval must satisfy a < b");
    }

    std::size_t count = 0;
    auto counted = [&](double x) {
        ++count;
        return f(x);
    };
    double error = 0;
    double l1 = 0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double value = GK::integrate(counted,
                                 a,
                                 b,
                                 static_cast<unsigned>(opts.max_refinements),
                                 opts.rel_tol,
                                 &error,
                                 &l1);

    QuadratureResult result;
    result.value = value;
    result.nodes_evaluated = count;
    result.refinements_used = static_cast<int>(count / 15);
    double scale = std::max(std::abs(value), l1);
    result.est_rel_error = scale > 0 ? error / scale : 0;
    result.converged = result.est_rel_error <= opts.rel_tol;
    return result;
}

}  // namespace qvr
