#pragma once

#include <string>
#include <vector>

#include "rydpol/config.hpp"
#include "rydpol/table.hpp"

namespace rydpol
{
    enum class Command
    {
        sweep,
        map,
        full_validate,
        converge
    };

    Command command_from_string(const std::string& name);
    const char* to_string(Command c);

    struct ExecuteOptions
    {
        unsigned threads = 1;
        // Multiplies the grid resolution (divides hr, hR; scales n - 1).
        double grid_scale = 1.0;
    };

    struct ExecutionResult
    {
        std::vector<OutputTable> tables;
        // Warnings and per-row failures for the diagnostic stream.
        std::vector<std::string> messages;
        // 0 success, 2 when any row failed.
        int exit_code = 0;
    };

    // Throws ConfigError when the command does not fit the solver and
    // rydpol::Error for fatal solver failures.
    ExecutionResult execute(Command command, const RunConfig& config, const ExecuteOptions& options = {});

    std::string library_version();
}
