#include "qvr/cli/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qvr/errors.hpp"

namespace qvr::cli
{
namespace
{
namespace pt = boost::property_tree;

// Calls visit(section, key, field) for every serialized field, in file order
template <class Config, class Visitor>
void visit_fields(Config& c, Visitor&& visit)
{
    visit("medium", "n0", c.n0);
    visit("medium", "n2_cm2_per_w", c.n2_cm2_per_w);

    visit("perturbation", "eta", c.eta);
    visit("perturbation", "intensity_w_per_cm2", c.intensity_w_per_cm2);
    visit("perturbation", "sigma_um", c.sigma_um);
    visit("perturbation", "beta", c.beta);
    visit("perturbation", "length_cm", c.length_cm);

    visit("grid", "alpha_min_deg", c.alpha_min_deg);
    visit("grid", "alpha_max_deg", c.alpha_max_deg);
    visit("grid", "n_alpha", c.n_alpha);
    visit("grid", "lambda_min_um", c.lambda_min_um);
    visit("grid", "lambda_max_um", c.lambda_max_um);
    visit("grid", "n_lambda", c.n_lambda);

    visit("quadrature", "rel_tol", c.quadrature.rel_tol);
    visit("quadrature", "max_refinements", c.quadrature.max_refinements);
    visit("quadrature", "r_cutoff_sigmas", c.quadrature.r_cutoff_sigmas);
    visit("quadrature", "initial_nodes_r", c.quadrature.initial_nodes_r);
    visit("quadrature", "initial_nodes_theta", c.quadrature.initial_nodes_theta);

    visit("detector", "half_angle_deg", c.half_angle_deg);
    visit("detector", "lambda_min_um", c.band_min_um);
    visit("detector", "lambda_max_um", c.band_max_um);
    visit("detector", "rep_rate_hz", c.rep_rate_hz);

    visit("flags", "polarization_sum", c.polarization_sum);
    visit("flags", "per_lambda_density", c.per_lambda_density);

    visit("validation", "oracle_budget", c.oracle_budget);
    visit("validation", "near_threshold_budget", c.near_threshold_budget);
    visit("validation", "fourier_budget", c.fourier_budget);
    visit("validation", "regularization_budget", c.regularization_budget);
    visit("validation", "self_convergence_factor", c.self_convergence_factor);
}

[[noreturn]] void bad_value(std::string const& key, std::string const& text)
{
    throw InvalidParam("cannot parse '" + text + "' for key " + key);
}

template <class T>
T parse_number(std::string const& key, std::string const& text)
{
    T value{};
    auto const* first = text.data();
    auto const* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
    {
        bad_value(key, text);
    }
    return value;
}

bool parse_bool(std::string const& key, std::string const& text)
{
    if (text == "true" || text == "1")
    {
        return true;
    }
    if (text == "false" || text == "0")
    {
        return false;
    }
    bad_value(key, text);
}

std::string trim(std::string const& text)
{
    auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos)
    {
        return {};
    }
    auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}
}  // namespace

//---------------------------------------------------------------------------//
std::string format_double(double value)
{
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::pair<std::string, std::string> parse_override(std::string const& text)
{
    auto eq = text.find('=');
    auto dot = text.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    {
        throw InvalidParam("override must look like section.key=value: " + text);
    }
    return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

//---------------------------------------------------------------------------//
RunConfig parse_config(std::istream& is, Overrides const& overrides)
{
    pt::ptree tree;
    try
    {
        pt::read_ini(is, tree);
    }
    catch (pt::ini_parser_error const& e)
    {
        throw InvalidParam(std::string("malformed configuration: ") + e.what());
    }
    for (auto const& [path, value] : overrides)
    {
        tree.put(path, value);
    }

    RunConfig config;
    std::set<std::string> known;
    visit_fields(config, [&](char const* section, char const* key, auto& field) {
        std::string path = std::string(section) + "." + key;
        known.insert(path);
        auto text = tree.get_optional<std::string>(path);
        if (!text)
        {
            return;
        }
        std::string value = trim(*text);
        using Field = std::remove_reference_t<decltype(field)>;
        if constexpr (std::is_same_v<Field, bool>)
        {
            field = parse_bool(path, value);
        }
        else if constexpr (std::is_same_v<Field, int>)
        {
            field = parse_number<int>(path, value);
        }
        else
        {
            field = parse_number<double>(path, value);
        }
    });

    for (auto const& [section, entries] : tree)
    {
        if (section == "run")
        {
            continue;
        }
        if (entries.empty())
        {
            throw InvalidParam("unexpected top-level key: " + section);
        }
        for (auto const& [key, ignored] : entries)
        {
            if (!known.count(section + "." + key))
            {
                throw InvalidParam("unknown configuration key: " + section + "." + key);
            }
        }
    }

    // An intensity without an explicit eta means the Kerr route supplies eta
    if (config.intensity_w_per_cm2 && !tree.get_optional<std::string>("perturbation.eta"))
    {
        config.eta.reset();
    }
    return config;
}

RunConfig load_config(std::string const& path, Overrides const& overrides)
{
    std::ifstream is(path);
    if (!is)
    {
        throw InvalidParam("cannot open configuration file: " + path);
    }
    return parse_config(is, overrides);
}

void write_config(std::ostream& os, RunConfig const& config)
{
    std::string current;
    visit_fields(config, [&](char const* section, char const* key, auto const& field) {
        using Field = std::remove_cvref_t<decltype(field)>;
        std::string value;
        if constexpr (std::is_same_v<Field, bool>)
        {
            value = field ? "true" : "false";
        }
        else if constexpr (std::is_same_v<Field, int>)
        {
            value = std::to_string(field);
        }
        else if constexpr (std::is_same_v<Field, double>)
        {
            value = format_double(field);
        }
        else
        {
            if (!field)
            {
                return;
            }
            value = format_double(*field);
        }
        if (current != section)
        {
            if (!current.empty())
            {
                os << '\n';
            }
            os << '[' << section << "]\n";
            current = section;
        }
        os << key << " = " << value << '\n';
    });
}

std::string serialize_config(RunConfig const& config)
{
    std::ostringstream os;
    write_config(os, config);
    return os.str();
}

//---------------------------------------------------------------------------//
MediumParams RunConfig::medium() const
{
    return MediumParams(n0, n2_cm2_per_w);
}

PerturbationParams RunConfig::perturbation() const
{
    double resolved = resolve_eta(eta, n2_cm2_per_w, intensity_w_per_cm2);
    return PerturbationParams(resolved, sigma_um, beta, length_cm * um_per_cm);
}

DensityOptions RunConfig::density_options() const
{
    quadrature.validate();
    DensityOptions opts;
    opts.quad = quadrature;
    opts.both_polarizations = polarization_sum;
    return opts;
}

Range RunConfig::alpha_range() const
{
    return {deg_to_rad(alpha_min_deg), deg_to_rad(alpha_max_deg)};
}

Range RunConfig::lambda_range() const
{
    return {lambda_min_um, lambda_max_um};
}

DetectorSpec RunConfig::detector() const
{
    DetectorSpec spec{deg_to_rad(half_angle_deg), band_min_um, band_max_um, rep_rate_hz};
    spec.validate();
    return spec;
}

ValidationBudgets RunConfig::budgets() const
{
    ValidationBudgets b;
    b.oracle = oracle_budget;
    b.near_threshold_oracle = near_threshold_budget;
    b.fourier = fourier_budget;
    b.regularization = regularization_budget;
    b.self_convergence_factor = self_convergence_factor;
    return b;
}

}  // namespace qvr::cli
