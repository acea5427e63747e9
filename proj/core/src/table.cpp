#include "rydpol/table.hpp"

#include <cstdint>
#include <fstream>

#include <fmt/format.h>

#include "rydpol/error.hpp"

namespace rydpol
{
    void OutputTable::check_rectangular() const
    {
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].size() != columns.size())
                throw PreconditionError(fmt::format("table '{}' row {} has {} values for {} columns", name, i,
                                                    rows[i].size(), columns.size()));
    }

    std::string format_table(const OutputTable& table)
    {
        table.check_rectangular();
        std::string out;
        for (const auto& line : table.provenance)
            out += fmt::format("# {}\n", line);
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            out += (c ? "," : "") + table.columns[c];
        out += '\n';
        for (const auto& row : table.rows)
        {
            for (std::size_t c = 0; c < row.size(); ++c)
            {
                if (c)
                    out += ',';
                fmt::format_to(std::back_inserter(out), "{:.9g}", row[c]);
            }
            out += '\n';
        }
        return out;
    }

    void emit_table(const OutputTable& table, const std::filesystem::path& path)
    {
        const std::string text = format_table(table);
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw Error("cannot open '" + path.string() + "' for writing");
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!f)
            throw Error("failed writing '" + path.string() + "'");
    }

    std::string fnv1a_hex(const std::string& data)
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char ch : data)
        {
            h ^= ch;
            h *= 0x100000001b3ull;
        }
        return fmt::format("{:016x}", h);
    }
}
