#pragma once

// Command implementations behind the fsnse tool: run, verify, converge, info.
// Exit codes: 0 success (including a modeled stopping event), 1 configuration
// error, 2 numerical overflow, 3 verification property failure.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace fsnse::cli {

struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed; // overrides the config seed
    std::string out_dir = ".";
    std::optional<int> snapshots_every;
};

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);

// suite: identities | inequalities | coupling | convergence | all
int cmd_verify(const std::string& suite, std::uint64_t seed, double alpha, std::ostream& out,
               std::ostream& err);

int cmd_converge(const RunOptions& opts, std::ostream& out, std::ostream& err);

int cmd_info(const std::string& config_path, std::ostream& out, std::ostream& err);

} // namespace fsnse::cli
