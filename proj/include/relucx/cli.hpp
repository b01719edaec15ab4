/**
 * Command implementations behind the `relucx` executable.
 *
 * Exit codes: 0 success, 1 file/parse/usage error, 2 degenerate network,
 * 3 unsupported architecture, 4 oracle violation.
 */

#ifndef RELUCX_CLI_HPP
#define RELUCX_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relucx/builder.hpp"
#include "relucx/experiment.hpp"

namespace relucx::cli {

enum ExitCode : int
{
    kOk = 0,
    kInputError = 1,
    kDegenerate = 2,
    kUnsupported = 3,
    kOracleViolation = 4
};

struct BuildCommand
{
    std::filesystem::path model;
    std::filesystem::path out_dir;
    bool svg = false;
    /// Empty: automatic.  One value h: [-h, h]^n0.  2*n0 values: lo0,hi0,lo1,hi1,...
    std::vector<double> box;
    BuildOptions options;
};

struct ExperimentCommand
{
    ExperimentConfig config;
    std::filesystem::path out_dir;
};

struct OracleCommand
{
    std::filesystem::path model;
    /// Compare this complex.jsonl instead of the fresh build's regions.
    std::optional<std::filesystem::path> complex;
    std::vector<double> box;
    /// 0 selects a default for the input dimension.
    int resolution = 0;
    std::optional<std::filesystem::path> out_dir;
    BuildOptions options;
};

int cmd_build(const BuildCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_experiment(const ExperimentCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_oracle_check(const OracleCommand& cmd, std::ostream& out, std::ostream& err);

/// Thread count from RELUCX_THREADS, or 1.
unsigned default_threads();

/// Parses arguments (args[0] is the program name) and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}   // namespace relucx::cli

#endif
