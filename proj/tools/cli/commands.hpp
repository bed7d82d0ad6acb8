#pragma once

#include <string>

#include "config.hpp"

namespace arcspect::cli {

/// Runs one subcommand, writing its outputs under config.out_dir.
/// Library errors propagate to the caller.
void execute(const std::string& command, const RunConfig& config);

/// Error record written to <out>/error.json when a command fails.
void write_error_record(const std::string& out_dir, const std::string& command, const std::string& kind,
                        const std::string& message, int exit_code);

}  // namespace arcspect::cli
