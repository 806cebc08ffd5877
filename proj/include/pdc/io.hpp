#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace pdc {

// Fixed-precision decimal formatting; identical inputs produce identical
// bytes, so re-running a subcommand rewrites files byte-for-byte.
std::string format_double(double value);

struct CsvColumn {
    std::string name;
    const std::vector<double>* values;
};

// "# schema=<schema>" comment line, then a header row, then the data.
void write_csv(const std::filesystem::path& path, const std::string& schema,
               const std::vector<CsvColumn>& columns);

void write_text(const std::filesystem::path& path, const std::string& content);

} // namespace pdc
