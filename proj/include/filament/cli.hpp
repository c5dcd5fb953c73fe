// Command-line front end.
//
//   filament simulate        --config run.cfg --out DIR [--force]
//   filament sweep           --config sweep.cfg --out DIR [--jobs N] [--force]
//   filament multiplier-dump --epsilon E --kmax K [--out table.csv]
//   filament tension-check   --curve curve.csv --epsilon E --model leps|rft --out tau.csv
//   filament lemma-suite     [--epsilons 1e-2,1e-3,...] [--kmax K] [--out report.json]
//
// Exit codes: 0 success, 1 usage or validation error, 2 runtime or solver
// error. The log level comes from FILAMENT_LOG (error, info, debug).
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace filament {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

inline constexpr const char* kVersion = "0.1.0";

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Configure the default logger from FILAMENT_LOG (idempotent).
void configure_logging();

}  // namespace filament
