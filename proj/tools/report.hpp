#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace slfm::cli {

enum class Format { Csv, Json };

Format parse_format(std::string_view name);

/// Fixed-column numeric table. CSV carries a header row; JSON is an array of
/// objects keyed by column name. Both print values at 17 significant digits.
struct Report {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
    void write(std::ostream& out, Format format) const;
    void write_csv(std::ostream& out) const;
    void write_json(std::ostream& out) const;
};

}  // namespace slfm::cli
