#include "pdc/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pdc {

std::string format_double(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::string& schema,
               const std::vector<CsvColumn>& columns)
{
    if (columns.empty()) {
        throw std::invalid_argument("write_csv: no columns");
    }
    const std::size_t rows = columns.front().values->size();
    std::string out = "# schema=" + schema + "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out += columns[c].name;
        out += (c + 1 < columns.size()) ? ',' : '\n';
    }
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (columns[c].values->size() != rows) {
                throw std::invalid_argument("write_csv: ragged columns");
            }
            out += format_double((*columns[c].values)[r]);
            out += (c + 1 < columns.size()) ? ',' : '\n';
        }
    }
    write_text(path, out);
}

void write_text(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    f << content;
    if (!f) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

} // namespace pdc
