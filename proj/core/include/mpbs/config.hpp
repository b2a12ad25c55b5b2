#pragma once

/**
 * @file config.hpp
 * @brief Run configuration: INI-style sections [instrument], [market],
 *        [numerics] and [output] with `key = value` lines.
 *
 * `#` and `;` start comments. Lists are comma separated. Every value is
 * validated at load time so a bad file fails before any run starts.
 */

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpbs/finmodel.hpp"
#include "mpbs/mpdata.hpp"

namespace mpbs {

/// Raw section -> key -> value table.
class IniDocument {
public:
    static IniDocument parse(std::istream& in, const std::string& source = "<config>");

    bool has(const std::string& section, const std::string& key) const;
    std::optional<std::string> get(const std::string& section, const std::string& key) const;
    /// Keys never read through get/has; used to reject typos.
    std::vector<std::string> unused_keys() const;

private:
    std::map<std::string, std::map<std::string, std::string>> values_;
    mutable std::map<std::string, std::map<std::string, bool>> touched_;
};

struct RunConfig {
    InstrumentSpec instrument;
    MarketParams market;
    double spot = 0.0;

    double lambda_squared = 2.0;
    std::optional<double> target_courant;
    std::optional<std::size_t> timesteps;  // alternative to target_courant
    MpdataOptions mpdata{2, true, true, true};
    double domain_sigmas = kDefaultDomainSigmas;
    std::optional<Domain> domain;  // explicit S range
    std::optional<Boundary> boundary;
    bool allow_unstable = false;
    int binomial_steps = 4000;
    std::vector<double> courants;  // sweep / table abscissae
    std::vector<double> lambdas;
    std::vector<double> table_tenures;  // table-american rows
    std::vector<double> table_spots;

    std::optional<std::filesystem::path> csv_path;
    int precision = 12;

    /// Grid for the instrument, honouring timesteps / target_courant / domain.
    Resolution resolution() const;
    Domain effective_domain() const;
    void validate() const;
};

/// Throws ConfigError with the offending section/key on any problem.
RunConfig parse_run_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace mpbs
