#pragma once

/**
 * @file commands.hpp
 * @brief The four command-line workflows as library calls, plus CSV output.
 *
 * Each command writes a human-readable report to `report` and, when a CSV
 * path is configured, the data file. Errors propagate as mpbs::Error;
 * run_guarded turns them into exit codes.
 */

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "mpbs/analysis.hpp"
#include "mpbs/config.hpp"
#include "mpbs/errors.hpp"

namespace mpbs::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kStabilityError = 3, kNumericError = 4 };

int exit_code(ErrorKind kind);

/// Flags that override the config file.
struct Overrides {
    std::optional<analysis::Scheme> scheme;
    std::optional<int> iterations;
    bool no_fct = false;
    bool no_iga = false;
    bool no_tot = false;
    std::optional<std::filesystem::path> out;
};

/// Applies flags on top of the file settings and revalidates.
RunConfig apply_overrides(RunConfig config, const Overrides& overrides);

enum class Axis { space, time };
Axis parse_axis(std::string_view name);

/// 12 significant digits by default, locale independent.
std::string format_number(double value, int precision = 12);

void write_convergence_csv(std::ostream& out, std::span<const analysis::ConvergencePoint> points,
                           int precision = 12);

void price_european_command(const RunConfig& config, std::ostream& report);
void price_american_command(const RunConfig& config, std::ostream& report);
/// `only` restricts the output to one scheme; both are run otherwise.
void convergence_command(const RunConfig& config, Axis axis,
                         std::optional<analysis::Scheme> only, std::ostream& report);
void table_american_command(const RunConfig& config, std::ostream& report);

/// Runs `body`, printing any mpbs::Error to `err` and mapping it to an exit code.
int run_guarded(const std::function<void()>& body, std::ostream& err);

}  // namespace mpbs::cli
