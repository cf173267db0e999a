#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace rotdev {

enum class Subcommand { rotset, deviation, stableset, foliation, verify, render };

std::string to_string(Subcommand s);
std::optional<Subcommand> parse_subcommand(const std::string& s);

struct RunOptions {
    Subcommand subcommand = Subcommand::rotset;
    std::string config_path;
    std::filesystem::path out_dir = "out";
    bool force = false;
};

/// Exit codes returned by run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitDependency = 3;

/// Runs a subcommand and every stage it depends on, writing artifacts and
/// manifest.json under out_dir. Diagnostics go to log. Never throws.
int run(const RunOptions& opts, std::ostream& log);

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace rotdev
