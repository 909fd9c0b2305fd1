#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qgame/cli/config.hpp"

namespace qgame::cli {

enum ExitCode : int { kSuccess = 0, kInternalError = 1, kInvalidInput = 2 };

enum class Format { Json, Csv };

struct CommandOptions {
    Format format = Format::Json;
    std::string alice_file;  ///< play: overrides strategies.alice
    std::string bob_file;    ///< play: overrides strategies.bob
};

// Each command renders its full output as text; nothing is written until it returns.
std::string cmd_build_gate(const RunConfig &config, const CommandOptions &options);
std::string cmd_verify(const RunConfig &config, const CommandOptions &options);
std::string cmd_play(const RunConfig &config, const CommandOptions &options);
std::string cmd_table(const RunConfig &config, const CommandOptions &options);
std::string cmd_entangle(const RunConfig &config, const CommandOptions &options);
std::string cmd_find_max_ent(const RunConfig &config, const CommandOptions &options);
std::string cmd_sweep(const RunConfig &config, const CommandOptions &options);
std::string cmd_nash(const RunConfig &config, const CommandOptions &options);
std::string cmd_counter(const RunConfig &config, const CommandOptions &options);

/// Entry point behind the `qgame` executable. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace qgame::cli
