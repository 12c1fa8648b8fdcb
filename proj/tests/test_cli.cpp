#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <doctest.h>

#include "qvr/cli/commands.hpp"
#include "qvr/cli/config.hpp"
#include "qvr/errors.hpp"

using namespace qvr;
using namespace qvr::cli;
namespace fs = std::filesystem;

namespace
{
fs::path scratch_dir()
{
    auto dir = fs::temp_directory_path() / "qvr_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(fs::path const& path)
{
    std::ifstream is(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

RunConfig small_grid(RunConfig config = {})
{
    config.n_alpha = 7;
    config.n_lambda = 6;
    return config;
}

RunConfig parse_text(std::string const& text, Overrides const& overrides = {})
{
    std::istringstream is(text);
    return parse_config(is, overrides);
}
}  // namespace

TEST_SUITE("cli")
{
TEST_CASE("overrides")
{
    auto [key, value] = parse_override("perturbation.beta = 2.1");
    CHECK(key == "perturbation.beta");
    CHECK(value == "2.1");
    CHECK_THROWS_AS(parse_override("beta=2"), InvalidParam);
    CHECK_THROWS_AS(parse_override("perturbation.beta"), InvalidParam);

    auto config = parse_text("", {{"perturbation.beta", "2.1"}, {"grid.n_alpha", "5"}});
    CHECK(config.beta == 2.1);
    CHECK(config.n_alpha == 5);
}

TEST_CASE("defaults describe the reference configuration")
{
    auto config = parse_text("");
    CHECK(config == RunConfig{});
    CHECK(config.medium().n0() == 1.5);
    auto pert = config.perturbation();
    CHECK(pert.eta() == 1e-2);
    CHECK(pert.sigma() == 1);
    CHECK(pert.beta() == 1.1);
    CHECK(pert.length() == 5e4);
    CHECK(config.alpha_range().max == doctest::Approx(pi / 2));
    CHECK(config.detector().half_angle == doctest::Approx(deg_to_rad(20)));
}

TEST_CASE("parsing")
{
    auto config = parse_text(R"(
[medium]
n0 = 1.45
n2_cm2_per_w = 3e-16

[perturbation]
intensity_w_per_cm2 = 1e13
sigma_um = 2
beta = 2.1
length_cm = 1

[flags]
polarization_sum = true

[run]
command = spectrum
anything = goes
)");
    CHECK(config.n0 == 1.45);
    CHECK_FALSE(config.eta.has_value());
    CHECK(config.perturbation().eta() == doctest::Approx(3e-3));
    CHECK(config.perturbation().length() == 1e4);
    CHECK(config.polarization_sum);
    CHECK(config.density_options().both_polarizations);

    CHECK_THROWS_AS(parse_text("[medium]\ncolour = blue\n"), InvalidParam);
    CHECK_THROWS_AS(parse_text("[optics]\nn0 = 1.5\n"), InvalidParam);
    CHECK_THROWS_AS(parse_text("[medium]\nn0 = 1.5x\n"), InvalidParam);
    CHECK_THROWS_AS(parse_text("[grid]\nn_alpha = 2.5\n"), InvalidParam);
    CHECK_THROWS_AS(parse_text("[flags]\npolarization_sum = maybe\n"), InvalidParam);
    CHECK_THROWS_AS(parse_text("[medium\nn0 = 1.5\n"), InvalidParam);
    CHECK_THROWS_AS(parse_text("", {{"medium.colour", "blue"}}), InvalidParam);
    CHECK_THROWS_AS(load_config("/nonexistent/qvr.ini"), InvalidParam);

    // Inconsistent amplitude routes
    auto clash = parse_text("[medium]\nn2_cm2_per_w = 3e-16\n[perturbation]\neta = 0.01\n"
                            "intensity_w_per_cm2 = 1e13\n");
    CHECK_THROWS_AS(clash.perturbation(), InvalidParam);
    CHECK_THROWS_AS(parse_text("[medium]\nn0 = 0.9\n").medium(), InvalidParam);
    CHECK_THROWS_AS(parse_text("[quadrature]\ninitial_nodes_r = 4\n").density_options(),
                    InvalidParam);
}

TEST_CASE("serialization round trip")
{
    RunConfig config;
    CHECK(parse_text(serialize_config(config)) == config);

    config.n0 = 1.4142135623730951;
    config.n2_cm2_per_w = 3e-16;
    config.eta.reset();
    config.intensity_w_per_cm2 = 1.0 / 3.0 * 1e14;
    config.sigma_um = 0.1 + 0.2;
    config.beta = 5.1;
    config.alpha_min_deg = 12.5;
    config.n_lambda = 37;
    config.quadrature.rel_tol = 1e-8;
    config.quadrature.max_refinements = 9;
    config.per_lambda_density = true;
    config.self_convergence_factor = 7;
    auto text = serialize_config(config);
    CHECK(parse_text(text) == config);
    CHECK(serialize_config(parse_text(text)) == text);

    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("spectrum output and metadata")
{
    auto dir = scratch_dir();
    auto csv = (dir / "small.csv").string();
    RunConfig config = small_grid();
    config.beta = 2.1;
    std::ostringstream err;
    REQUIRE(cmd_spectrum(config, csv, 1, err) == exit_code::ok);

    auto text = slurp(csv);
    CHECK(text.rfind("alpha_deg,lambda_um,density\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 7 * 6);
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    CHECK(line.rfind("0,0.5,", 0) == 0);
    std::getline(lines, line);
    CHECK(line.rfind("0,", 0) == 0);

    // The metadata reconstructs the configuration
    auto meta = csv + ".meta";
    CHECK(load_config(meta) == config);
    auto meta_text = slurp(meta);
    CHECK(meta_text.find("[run]") != std::string::npos);
    CHECK(meta_text.find("version = 1.0.0") != std::string::npos);
    CHECK(meta_text.find("failed_cells = 0") != std::string::npos);
    CHECK(meta_text.find("total_cells = 42") != std::string::npos);
    auto cone = meta_text.find("cone_angle_deg = ");
    REQUIRE(cone != std::string::npos);
    CHECK(std::strtod(meta_text.c_str() + cone + 17, nullptr)
          == doctest::Approx(rad_to_deg(std::acos(1 / 2.1))).epsilon(1e-15));
    CHECK(meta_text.find("vacuum wavelength") != std::string::npos);

    // Byte-identical across reruns and thread counts
    auto again = (dir / "small_threads.csv").string();
    REQUIRE(cmd_spectrum(config, again, 3, err) == exit_code::ok);
    CHECK(slurp(again) == text);

    config.per_lambda_density = true;
    REQUIRE(cmd_spectrum(config, again, 1, err) == exit_code::ok);
    CHECK(slurp(again) != text);
    CHECK(slurp(again + ".meta").find("per um of vacuum wavelength") != std::string::npos);
}

TEST_CASE("reference spectrum")
{
    auto csv = (scratch_dir() / "reference.csv").string();
    std::ostringstream err;
    REQUIRE(cmd_spectrum(RunConfig{}, csv, 1, err) == exit_code::ok);
    std::istringstream lines(slurp(csv));
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    double total = 0;
    while (std::getline(lines, line))
    {
        ++rows;
        // strtod, unlike stod, accepts subnormal tail values
        double value = std::strtod(line.c_str() + line.rfind(',') + 1, nullptr);
        CHECK(value >= 0);
        total += value;
    }
    CHECK(rows == 10000);
    CHECK(total > 0);
}

TEST_CASE("below threshold")
{
    auto csv = (scratch_dir() / "below.csv").string();
    RunConfig config = small_grid();
    config.beta = 0.9;
    std::ostringstream err;
    CHECK(cmd_spectrum(config, csv, 1, err) == exit_code::ok);
    std::istringstream lines(slurp(csv));
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line))
    {
        CHECK(line.substr(line.rfind(',') + 1) == "0");
    }
    CHECK(slurp(csv + ".meta").find("note = below threshold") != std::string::npos);

    std::ostringstream out;
    CHECK(cmd_peak(config, out, 1, err) == exit_code::invalid_input);
    CHECK(err.str().find("all-zero") != std::string::npos);

    std::ostringstream counts;
    CHECK(cmd_counts(config, counts, err) == exit_code::ok);
    CHECK(counts.str().find("counts_per_second = 0\n") != std::string::npos);
}

TEST_CASE("convergence degradation")
{
    RunConfig config = small_grid();
    config.quadrature.rel_tol = 1e-15;
    config.quadrature.max_refinements = 0;
    config.quadrature.initial_nodes_r = 8;
    config.quadrature.initial_nodes_theta = 8;
    auto csv = (scratch_dir() / "degraded.csv").string();
    std::ostringstream err;
    CHECK(cmd_spectrum(config, csv, 1, err) == exit_code::convergence_degraded);
    CHECK(fs::exists(csv));
    CHECK(slurp(csv + ".meta").find("failed_cells = 0") == std::string::npos);
}

TEST_CASE("invalid input")
{
    std::ostringstream err;
    RunConfig config = small_grid();
    config.n_alpha = 1;
    CHECK(cmd_spectrum(config, (scratch_dir() / "x.csv").string(), 1, err)
          == exit_code::invalid_input);
    config = small_grid();
    config.sigma_um = -1;
    std::ostringstream out;
    CHECK(cmd_counts(config, out, err) == exit_code::invalid_input);
    CHECK(cmd_spectrum(small_grid(), "/nonexistent/dir/x.csv", 1, err)
          == exit_code::invalid_input);
}

TEST_CASE("peak record")
{
    RunConfig config;
    config.n_alpha = 10;
    config.n_lambda = 20;
    std::ostringstream out;
    std::ostringstream err;
    REQUIRE(cmd_peak(config, out, 1, err) == exit_code::ok);
    auto text = out.str();
    CHECK(text.find("[peak]") != std::string::npos);
    CHECK(text.find("lambda_max_um = ") != std::string::npos);
    CHECK(text.find("alpha_max_deg = ") != std::string::npos);
    CHECK(text.find("value = ") != std::string::npos);
}

TEST_CASE("counts record")
{
    RunConfig config;
    std::ostringstream one;
    std::ostringstream err;
    REQUIRE(cmd_counts(config, one, err) == exit_code::ok);
    config.rep_rate_hz = 2000;
    std::ostringstream two;
    REQUIRE(cmd_counts(config, two, err) == exit_code::ok);

    auto value = [](std::string const& text, std::string const& key) {
        auto pos = text.find(key + " = ");
        return std::stod(text.substr(pos + key.size() + 3));
    };
    CHECK(value(two.str(), "counts_per_second") == 2 * value(one.str(), "counts_per_second"));
    CHECK(value(two.str(), "photons_per_pulse") == value(one.str(), "photons_per_pulse"));
}

TEST_CASE("partner record")
{
    RunConfig config;
    std::ostringstream out;
    std::ostringstream err;
    REQUIRE(cmd_partner(config, {10, 3, 120, 45}, out, err) == exit_code::ok);
    auto text = out.str();
    CHECK(text.find("[photon]") != std::string::npos);
    CHECK(text.find("[partner]") != std::string::npos);
    CHECK(text.find("satisfies_constraint = true") != std::string::npos);
    CHECK(text.find("inside_cone = false") != std::string::npos);

    CHECK(cmd_partner(config, {10, 3, 5, 0}, out, err) == exit_code::no_solution);
    double theta0 = rad_to_deg(kinematics(1.1).theta0);
    CHECK(cmd_partner(config, {theta0, 3, theta0, 0}, out, err) == exit_code::no_solution);
    CHECK(cmd_partner(config, {10, -3, 120, 0}, out, err) == exit_code::invalid_input);
    config.beta = 0.9;
    CHECK(cmd_partner(config, {10, 3, 120, 0}, out, err) == exit_code::no_solution);
}

TEST_CASE("validation report")
{
    RunConfig config;
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cmd_validate(config, out, err) == exit_code::ok);
    auto text = out.str();
    CHECK(text.find("passed = true") != std::string::npos);
    for (auto key : {"quantity_name = ", "reference_value = ", "artifact_value = ",
                     "rel_error = ", "budget = ", "passed = "})
    {
        CHECK(text.find(key, text.find("[oracle.01]")) != std::string::npos);
    }

    config.oracle_budget = 1e-9;
    config.near_threshold_budget = 1e-9;
    std::ostringstream strict;
    CHECK(cmd_validate(config, strict, err) == exit_code::validation_failed);
    CHECK(strict.str().find("[summary]\n") == 0);
    CHECK(strict.str().find("passed = false") != std::string::npos);
}
}
