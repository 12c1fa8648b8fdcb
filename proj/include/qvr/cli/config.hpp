#pragma once

// Run configuration for the command-line front end.
//
// The on-disk form is a flat INI file. Every physical key carries its unit
// in the name; angles are degrees and lengths are micrometres except the
// interaction length, which is centimetres.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qvr/core.hpp"
#include "qvr/spectra.hpp"
#include "qvr/validate.hpp"

namespace qvr::cli
{
inline constexpr char const version[] = "1.0.0";

struct RunConfig
{
    // [medium]
    double n0{1.5};
    std::optional<double> n2_cm2_per_w;

    // [perturbation]
    std::optional<double> eta{1e-2};
    std::optional<double> intensity_w_per_cm2;
    double sigma_um{1};
    double beta{1.1};
    double length_cm{5};

    // [grid]
    double alpha_min_deg{0};
    double alpha_max_deg{90};
    int n_alpha{100};
    double lambda_min_um{0.5};
    double lambda_max_um{10};
    int n_lambda{100};

    // [quadrature]
    QuadratureOptions quadrature;

    // [detector]
    double half_angle_deg{20};
    double band_min_um{1};
    double band_max_um{12};
    double rep_rate_hz{1000};

    // [flags]
    bool polarization_sum{false};
    bool per_lambda_density{false};

    // [validation]
    double oracle_budget{0.02};
    double near_threshold_budget{0.05};
    double fourier_budget{1e-6};
    double regularization_budget{0.01};
    double self_convergence_factor{10};

    friend bool operator==(RunConfig const&, RunConfig const&) = default;

    // Conversions to library types; these validate and throw InvalidParam
    MediumParams medium() const;
    PerturbationParams perturbation() const;
    DensityOptions density_options() const;
    Range alpha_range() const;
    Range lambda_range() const;
    DetectorSpec detector() const;
    ValidationBudgets budgets() const;
};

//! "section.key" -> value overrides applied on top of a file
using Overrides = std::map<std::string, std::string>;

// Parse an override of the form section.key=value
std::pair<std::string, std::string> parse_override(std::string const& text);

/*!
 * Parse a configuration from INI text. Missing keys keep their defaults;
 * unknown sections or keys and malformed numbers raise InvalidParam. A [run]
 * section (written into metadata files) is ignored.
 */
RunConfig parse_config(std::istream& is, Overrides const& overrides = {});
RunConfig load_config(std::string const& path, Overrides const& overrides = {});

// Write every field with stable key order and 17 significant digits
void write_config(std::ostream& os, RunConfig const& config);
std::string serialize_config(RunConfig const& config);

// Text with 17 significant digits, which reads back to the identical double
std::string format_double(double value);

}  // namespace qvr::cli
