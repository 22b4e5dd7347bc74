#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mfbv/config.hpp"
#include "mfbv/multfn.hpp"

namespace mfbv::lab {

using arith::u64;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,   // unexpected internal error
  kExitConfig = 2,    // malformed config or parameters outside their domain
  kExitResource = 3,  // enumeration or table bound exceeded
  kExitNumeric = 4,   // identity or certificate violated, solver failure
};

const std::vector<std::string>& subcommands();

// unit | mobius | liouville | random | quad3 | gauss:Q | char:Q:I | smooth:Y:<spec>
MultFn parse_fn(const std::string& spec, u64 seed);

struct RunOptions {
  std::string subcommand;
  std::optional<u64> seed;  // replaces the config's seed when set
  unsigned threads = 1;
};

// Writes the CSV artifact. Throws ConfigError, DomainError, ResourceError or NumericError.
void run_experiment(const Config& config, const RunOptions& opt, std::ostream& out);

// Loads the config, runs, and writes to `out_path` (stdout when empty) only on success.
// Diagnostics go to `err`; the return value is an ExitCode.
int execute(const std::string& config_path, const RunOptions& opt, const std::optional<std::string>& out_path,
            std::ostream& out, std::ostream& err);

}  // namespace mfbv::lab
