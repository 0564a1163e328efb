#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace csvortex::csv {

// column-oriented CSV writer, floats at 17 significant digits
inline void write(const std::string& path, const std::string& header,
                  const std::vector<const std::vector<double>*>& cols) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << header << "\n";
    if (cols.empty()) return;
    const std::size_t rows = cols.front()->size();
    for (const auto* c : cols)
        if (c->size() != rows) throw std::runtime_error("ragged columns for " + path);
    char buf[64];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", (*cols[c])[r]);
            f << (c ? "," : "") << buf;
        }
        f << "\n";
    }
}

} // namespace csvortex::csv
