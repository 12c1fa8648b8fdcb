#pragma once

// Command implementations behind the qvr executable. Each returns a process
// exit code; library errors are mapped to codes and reported on `err`.

#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace qvr::cli
{
namespace exit_code
{
inline constexpr int ok = 0;
inline constexpr int validation_failed = 1;
inline constexpr int invalid_input = 2;
inline constexpr int convergence_degraded = 3;
inline constexpr int no_solution = 4;
}  // namespace exit_code

// Fraction of failed cells above which a spectrum is reported as degraded
inline constexpr double max_failed_cell_fraction = 0.01;

struct PartnerRequest
{
    double alpha_deg{0};
    double lambda_um{0};
    double partner_alpha_deg{0};
    double partner_phi_deg{0};
};

/*!
 * Evaluate the configured grid. Writes the CSV to csv_path and the metadata
 * to csv_path + ".meta".
 */
int cmd_spectrum(RunConfig const& config,
                 std::string const& csv_path,
                 unsigned threads,
                 std::ostream& err);

// Peak record of the configured grid
int cmd_peak(RunConfig const& config, std::ostream& out, unsigned threads, std::ostream& err);

// Detector counts record
int cmd_counts(RunConfig const& config, std::ostream& out, std::ostream& err);

// Partner of one photon along a chosen direction
int cmd_partner(RunConfig const& config,
                PartnerRequest const& request,
                std::ostream& out,
                std::ostream& err);

// Oracle suite at the default sample points; 0 only when every oracle passes
int cmd_validate(RunConfig const& config, std::ostream& out, std::ostream& err);

// CSV body of a grid, as written by cmd_spectrum
void write_spectrum_csv(std::ostream& os, RunConfig const& config, SpectrumGrid const& grid);

}  // namespace qvr::cli
