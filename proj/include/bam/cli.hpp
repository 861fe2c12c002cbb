#ifndef BAM_CLI_HPP
#define BAM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace bam::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kDataError = 2,
    kInvariantViolation = 3,
};

/// Environment variable naming a default config file (TOML/INI keys mirror
/// the long flag names, one [section] per subcommand).
inline constexpr const char* kConfigEnvVar = "BAM_CONFIG";

/// Runs the `bam` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

} // namespace bam::cli

#endif // BAM_CLI_HPP
