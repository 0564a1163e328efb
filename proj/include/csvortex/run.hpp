#pragma once

#include "csvortex/config.hpp"

#include <iosfwd>
#include <string>

namespace csvortex {

// Exit codes of a run: 0 converged, 2 mathematically meaningful
// non-existence (diverged iteration / no solution), 1 error.
inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_no_solution = 2;

// Dispatches the config to its solver and writes report.json plus the
// mode-specific CSV artifacts into config.output_dir. Log lines go to `log`.
int run(const RunConfig& config, std::ostream& log);

} // namespace csvortex
