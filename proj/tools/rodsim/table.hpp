#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace rodsim::cli {

// Numeric CSV table. Every column carries a unit, written as "name [unit]";
// metadata goes first as "# key: value" lines.
class Table {
public:
    struct Column {
        std::string name;
        std::string unit;
    };

    explicit Table(std::vector<Column> columns) : columns_(std::move(columns)) {}

    void meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }
    void add_row(std::vector<double> row);

    const std::vector<Column>& columns() const { return columns_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    // Shortest round-trip representation of every value.
    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<Column> columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace rodsim::cli
