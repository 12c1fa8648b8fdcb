// qvr: photon emission from a superluminal refractive-index perturbation.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qvr/cli/commands.hpp"
#include "qvr/cli/config.hpp"
#include "qvr/errors.hpp"

namespace
{
using namespace qvr::cli;

struct CommonFlags
{
    std::string config_path;
    std::string out;
    unsigned threads{1};
    std::optional<double> tol;
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonFlags& flags)
{
    cmd->add_option("--config", flags.config_path, "INI configuration file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", flags.out, "Output path (standard output if omitted)");
    cmd->add_option("--threads", flags.threads, "Worker threads for grid evaluation")
        ->check(CLI::Range(1u, 1024u));
    cmd->add_option("--tol", flags.tol, "Quadrature relative tolerance");
    cmd->add_option("--set", flags.sets, "Override a configuration key: section.key=value");
}

RunConfig resolve_config(CommonFlags const& flags)
{
    Overrides overrides;
    for (auto const& text : flags.sets)
    {
        auto [key, value] = parse_override(text);
        overrides.insert_or_assign(key, value);
    }
    if (flags.tol)
    {
        overrides["quadrature.rel_tol"] = format_double(*flags.tol);
    }
    if (flags.config_path.empty())
    {
        std::istringstream empty;
        return parse_config(empty, overrides);
    }
    return load_config(flags.config_path, overrides);
}

// Run a record-producing command against --out or standard output
template <class F>
int with_output(CommonFlags const& flags, F&& run)
{
    if (flags.out.empty())
    {
        return run(std::cout);
    }
    std::ofstream os(flags.out, std::ios::binary | std::ios::trunc);
    if (!os)
    {
        std::cerr << "error: cannot open output file: " << flags.out << '\n';
        return exit_code::invalid_input;
    }
    return run(os);
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Photon pair emission from a superluminal refractive-index perturbation"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    CommonFlags flags;
    auto* spectrum = app.add_subcommand("spectrum", "Density over the angle x wavelength grid");
    auto* peak = app.add_subcommand("peak", "Locate the spectral peak of the grid");
    auto* counts = app.add_subcommand("counts", "Photons per pulse and count rate in a detector");
    auto* partner = app.add_subcommand("partner", "Correlated partner of one emitted photon");
    auto* validate = app.add_subcommand("validate", "Run the numerical oracle suite");
    for (auto* cmd : {spectrum, peak, counts, partner, validate})
    {
        add_common(cmd, flags);
    }

    PartnerRequest request;
    partner->add_option("--alpha-deg", request.alpha_deg, "Photon emission angle")->required();
    partner->add_option("--lambda-um", request.lambda_um, "Photon vacuum wavelength")->required();
    partner->add_option("--partner-alpha-deg", request.partner_alpha_deg, "Partner polar angle")
        ->required();
    partner->add_option("--partner-phi-deg", request.partner_phi_deg, "Partner azimuth");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_code::invalid_input;
    }

    RunConfig config;
    try
    {
        config = resolve_config(flags);
    }
    catch (qvr::InvalidParam const& e)
    {
        std::cerr << "error: invalid input: " << e.what() << '\n';
        return exit_code::invalid_input;
    }

    if (*spectrum)
    {
        std::string path = flags.out.empty() ? std::string("spectrum.csv") : flags.out;
        return cmd_spectrum(config, path, flags.threads, std::cerr);
    }
    if (*peak)
    {
        return with_output(flags, [&](std::ostream& os) {
            return cmd_peak(config, os, flags.threads, std::cerr);
        });
    }
    if (*counts)
    {
        return with_output(flags, [&](std::ostream& os) {
            return cmd_counts(config, os, std::cerr);
        });
    }
    if (*partner)
    {
        return with_output(flags, [&](std::ostream& os) {
            return cmd_partner(config, request, os, std::cerr);
        });
    }
    return with_output(flags, [&](std::ostream& os) {
        return cmd_validate(config, os, std::cerr);
    });
}
