#include "rodsim/table.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace rodsim::cli {

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns_.size()) {
        throw std::logic_error(fmt::format("Table: row has {} values, expected {}", row.size(),
                                           columns_.size()));
    }
    rows_.push_back(std::move(row));
}

std::string Table::str() const {
    std::string out;
    for (const auto& [k, v] : meta_) out += fmt::format("# {}: {}\n", k, v);
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        out += fmt::format("{}{} [{}]", c ? "," : "", columns_[c].name, columns_[c].unit);
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) out += fmt::format("{}{}", c ? "," : "", row[c]);
        out += '\n';
    }
    return out;
}

void Table::write(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << str();
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace rodsim::cli
