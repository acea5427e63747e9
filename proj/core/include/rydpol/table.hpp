#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rydpol
{
    struct OutputTable
    {
        // File stem used when the table is written to a directory.
        std::string name;
        std::vector<std::string> columns;
        std::vector<std::vector<double>> rows;
        // Emitted as '#'-prefixed lines above the header.
        std::vector<std::string> provenance;

        // Throws PreconditionError if a row length differs from the header.
        void check_rectangular() const;
    };

    // CSV text: provenance, header, rows with 9 significant digits, LF endings.
    std::string format_table(const OutputTable& table);

    // Throws Error on I/O failure.
    void emit_table(const OutputTable& table, const std::filesystem::path& path);

    // 64-bit FNV-1a, rendered as 16 hex digits.
    std::string fnv1a_hex(const std::string& data);
}
