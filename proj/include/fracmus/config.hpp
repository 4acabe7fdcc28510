#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fracmus/family.hpp"
#include "fracmus/grid.hpp"
#include "fracmus/solver.hpp"
#include "fracmus/suites.hpp"

namespace fracmus {

// Line-oriented `key = value` text with `[section]` headers. `#` and `;`
// start comments; values may be quoted.
class ConfigFile {
public:
    static ConfigFile parse(std::istream& is, const std::string& source = "<config>");
    static ConfigFile load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string text(const std::string& section, const std::string& key, const std::string& fallback) const;
    double number(const std::string& section, const std::string& key, double fallback) const;
    long long integer(const std::string& section, const std::string& key, long long fallback) const;
    std::vector<double> numbers(const std::string& section, const std::string& key,
                                const std::vector<double>& fallback) const;
    bool has_section(const std::string& section) const { return data_.count(section) > 0; }

    // Sets a value, as used by command-line overrides.
    void set(const std::string& section, const std::string& key, const std::string& value);

    // Throws InputError naming the first key not in `allowed` (section -> keys).
    void check_keys(const std::map<std::string, std::vector<std::string>>& allowed) const;

private:
    std::string field(const std::string& section, const std::string& key) const;
    std::string source_;
    std::map<std::string, std::map<std::string, std::string>> data_;
};

struct RunConfig {
    MusielakFamily family = MusielakFamily::power_constant(2.0);
    BoxDomain domain = BoxDomain::interval(0.0, 1.0, 65);
    QuadSpec quad;
    double s = 0.5;
    SolveConfig solve;
    SuiteOptions suite;

    // Echo of every resolved setting, embedded in reports.
    nlohmann::ordered_json resolved;
};

// Builds and cross-validates every block; errors name the offending field.
// When `for_solve` is set the solver block is validated as well.
RunConfig build_run_config(const ConfigFile& cfg, bool for_solve = false);

MusielakFamily family_from_config(const ConfigFile& cfg, const Region& region);
BoxDomain domain_from_config(const ConfigFile& cfg);

nlohmann::ordered_json domain_json(const BoxDomain& d);

}  // namespace fracmus
