#include "qvr/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qvr/errors.hpp"
#include "qvr/pairs.hpp"
#include "qvr/spectra.hpp"
#include "qvr/validate.hpp"

namespace qvr::cli
{
namespace
{
//! Key-value text with [section] headers
class Record
{
  public:
    explicit Record(std::ostream& os) : os_(os) {}

    void section(std::string const& name)
    {
        if (!first_)
        {
            os_ << '\n';
        }
        first_ = false;
        os_ << '[' << name << "]\n";
    }
    void field(char const* key, std::string const& value)
    {
        os_ << key << " = " << value << '\n';
    }
    void field(char const* key, char const* value) { this->field(key, std::string(value)); }
    void field(char const* key, double value) { this->field(key, format_double(value)); }
    void field(char const* key, bool value) { this->field(key, value ? "true" : "false"); }
    void field(char const* key, std::size_t value) { this->field(key, std::to_string(value)); }

  private:
    std::ostream& os_;
    bool first_{true};
};

char const* density_units(RunConfig const& config)
{
    return config.per_lambda_density
               ? "photons per steradian per um of vacuum wavelength"
               : "photons per steradian per rad/um of in-medium wavenumber";
}

constexpr char wavelength_convention[]
    = "vacuum wavelength; the in-medium wavelength is lambda_um / n0";

void warn_regime(RunConfig const& config, std::ostream& err)
{
    if (config.perturbation().outside_perturbative_regime(config.medium()))
    {
        err << "warning: eta / n0 >= 0.1, outside the perturbative regime\n";
    }
}

template <class F>
int guarded(F&& body, std::ostream& err)
{
    try
    {
        return body();
    }
    catch (NoPartnerSolution const& e)
    {
        err << "error: no partner solution: " << e.what() << '\n';
        return exit_code::no_solution;
    }
    catch (DegenerateConstraint const& e)
    {
        err << "error: degenerate constraint: " << e.what() << '\n';
        return exit_code::no_solution;
    }
    catch (BelowThreshold const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_code::no_solution;
    }
    catch (InvalidParam const& e)
    {
        err << "error: invalid input: " << e.what() << '\n';
        return exit_code::invalid_input;
    }
    catch (NonConvergence const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_code::convergence_degraded;
    }
    catch (std::exception const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_code::validation_failed;
    }
}

SpectrumGrid evaluate_grid(RunConfig const& config, unsigned threads)
{
    if (config.n_alpha < 2 || config.n_lambda < 2)
    {
        throw InvalidParam("grid needs at least two nodes per axis");
    }
    auto grid = spectrum_grid(config.medium(),
                              config.perturbation(),
                              config.alpha_range(),
                              config.lambda_range(),
                              static_cast<std::size_t>(config.n_alpha),
                              static_cast<std::size_t>(config.n_lambda),
                              config.density_options(),
                              threads);
    if (config.per_lambda_density)
    {
        for (std::size_t i = 0; i < grid.alphas.size(); ++i)
        {
            for (std::size_t j = 0; j < grid.lambdas.size(); ++j)
            {
                grid.density[grid.index(i, j)]
                    *= per_lambda_jacobian(grid.lambdas[j], grid.medium);
            }
        }
    }
    return grid;
}

bool degraded(SpectrumGrid const& grid)
{
    return static_cast<double>(grid.failed_cells())
           > max_failed_cell_fraction * static_cast<double>(grid.density.size());
}

std::ofstream open_output(std::string const& path)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
    {
        throw InvalidParam("cannot open output file: " + path);
    }
    return os;
}
}  // namespace

//---------------------------------------------------------------------------//
void write_spectrum_csv(std::ostream& os, RunConfig const& config, SpectrumGrid const& grid)
{
    auto alpha_deg = linspace({config.alpha_min_deg, config.alpha_max_deg}, grid.alphas.size());
    os << "alpha_deg,lambda_um,density\n";
    for (std::size_t i = 0; i < grid.alphas.size(); ++i)
    {
        for (std::size_t j = 0; j < grid.lambdas.size(); ++j)
        {
            os << format_double(alpha_deg[i]) << ',' << format_double(grid.lambdas[j]) << ','
               << format_double(grid.at(i, j)) << '\n';
        }
    }
}

int cmd_spectrum(RunConfig const& config,
                 std::string const& csv_path,
                 unsigned threads,
                 std::ostream& err)
{
    return guarded(
        [&] {
            warn_regime(config, err);
            auto grid = evaluate_grid(config, threads);

            {
                auto csv = open_output(csv_path);
                write_spectrum_csv(csv, config, grid);
                if (!csv.flush())
                {
                    throw InvalidParam("failed writing " + csv_path);
                }
            }

            auto meta = open_output(csv_path + ".meta");
            write_config(meta, config);
            meta << '\n';
            Record run(meta);
            run.section("run");
            run.field("version", version);
            run.field("command", "spectrum");
            run.field("angle_units", "degrees from the propagation axis");
            run.field("wavelength_convention", wavelength_convention);
            run.field("density_units", density_units(config));
            run.field("polarization",
                      config.polarization_sum ? "summed over both states" : "single state");
            run.field("cone_angle_deg",
                      grid.below_threshold()
                          ? std::string("none")
                          : format_double(rad_to_deg(kinematics(config.beta).theta0)));
            run.field("failed_cells", grid.failed_cells());
            run.field("total_cells", grid.density.size());
            run.field("note", grid.below_threshold() ? "below threshold" : "none");
            if (!meta.flush())
            {
                throw InvalidParam("failed writing " + csv_path + ".meta");
            }

            if (degraded(grid))
            {
                err << "error: " << grid.failed_cells() << " of " << grid.density.size()
                    << " cells failed to converge\n";
                return exit_code::convergence_degraded;
            }
            return exit_code::ok;
        },
        err);
}

int cmd_peak(RunConfig const& config, std::ostream& out, unsigned threads, std::ostream& err)
{
    return guarded(
        [&] {
            warn_regime(config, err);
            auto grid = evaluate_grid(config, threads);
            if (grid.below_threshold())
            {
                throw InvalidParam("all-zero grid: the perturbation is below threshold");
            }
            auto peak = find_peak(grid);

            Record rec(out);
            rec.section("peak");
            rec.field("lambda_max_um", peak.lambda_max);
            rec.field("lambda_max_in_medium_um", peak.lambda_max / config.n0);
            rec.field("alpha_max_deg", rad_to_deg(peak.alpha_max));
            rec.field("value", peak.value);
            rec.field("density_units", density_units(config));
            rec.field("wavelength_convention", wavelength_convention);
            rec.field("failed_cells", grid.failed_cells());
            rec.field("total_cells", grid.density.size());
            return degraded(grid) ? exit_code::convergence_degraded : exit_code::ok;
        },
        err);
}

int cmd_counts(RunConfig const& config, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            warn_regime(config, err);
            auto rate = integrated_counts(config.medium(),
                                          config.perturbation(),
                                          config.detector(),
                                          config.density_options());
            Record rec(out);
            rec.section("counts");
            rec.field("photons_per_pulse", rate.photons_per_pulse);
            rec.field("counts_per_second", rate.counts_per_second);
            rec.field("est_rel_error", rate.est_rel_error);
            rec.field("converged", rate.converged);
            return rate.converged ? exit_code::ok : exit_code::convergence_degraded;
        },
        err);
}

int cmd_partner(RunConfig const& config,
                PartnerRequest const& request,
                std::ostream& out,
                std::ostream& err)
{
    return guarded(
        [&] {
            auto medium = config.medium();
            auto pert = config.perturbation();
            auto photon = mode_from_angle_wavelength(
                deg_to_rad(request.alpha_deg), request.lambda_um, medium);
            auto partner = solve_partner(photon,
                                         deg_to_rad(request.partner_alpha_deg),
                                         deg_to_rad(request.partner_phi_deg),
                                         pert.beta());
            auto pair = make_pair(photon, partner, pert.beta());

            Record rec(out);
            auto write_mode = [&](char const* name, PhotonMode const& mode) {
                rec.section(name);
                rec.field("alpha_deg", rad_to_deg(mode.alpha()));
                rec.field("phi_deg", rad_to_deg(mode.phi()));
                rec.field("lambda_um", mode.vacuum_wavelength(medium));
                rec.field("k_rad_per_um", mode.k());
                rec.field("g_rad_per_um", g_value(mode, pert.beta()));
                rec.field("inside_cone", g_value(mode, pert.beta()) > 0);
            };
            write_mode("photon", photon);
            write_mode("partner", partner);
            rec.section("pair");
            rec.field("residual_rad_per_um", pair.residual);
            rec.field("satisfies_constraint", pair.satisfies_constraint());
            rec.field("joint_density", joint_pair_density(pair, medium, pert));
            return exit_code::ok;
        },
        err);
}

int cmd_validate(RunConfig const& config, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            auto medium = config.medium();
            auto pert = config.perturbation();
            auto reports = run_validation_suite(medium,
                                                pert,
                                                default_sample_points(pert),
                                                config.budgets(),
                                                config.density_options());
            std::size_t failed = 0;
            for (auto const& r : reports)
            {
                failed += r.passed ? 0 : 1;
            }

            Record rec(out);
            rec.section("summary");
            rec.field("version", version);
            rec.field("passed", failed == 0);
            rec.field("oracle_count", reports.size());
            rec.field("failed_count", failed);
            rec.field("density_units", density_units(RunConfig{}));
            rec.field("wavelength_convention", wavelength_convention);
            rec.field("angular_weight", "(k_hat . k_hat')^2 in both the oracle and the artifact");

            for (std::size_t i = 0; i < reports.size(); ++i)
            {
                char name[32];
                std::snprintf(name, sizeof(name), "oracle.%02zu", i + 1);
                auto const& r = reports[i];
                rec.section(name);
                rec.field("quantity_name", r.quantity_name);
                rec.field("reference_value", r.reference_value);
                rec.field("artifact_value", r.artifact_value);
                rec.field("rel_error", r.rel_error);
                rec.field("budget", r.budget);
                rec.field("passed", r.passed);
            }
            if (failed > 0)
            {
                err << "validation failed: " << failed << " of " << reports.size()
                    << " oracles exceeded their budget\n";
                return exit_code::validation_failed;
            }
            return exit_code::ok;
        },
        err);
}

}  // namespace qvr::cli
