#include "report.hpp"

#include <cmath>
#include <cstdio>
#include "json.hpp"

#include "slfm/errors.hpp"

namespace slfm::cli {

namespace {

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

Format parse_format(std::string_view name) {
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw Error(ErrorKind::InvalidArgument, "unknown format '" + std::string(name) + "'");
}

void Report::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) throw Error(ErrorKind::InvalidArgument, "report row width");
    for (double x : row) {
        if (!std::isfinite(x)) throw Error(ErrorKind::DivergenceDetected, "non-finite report value");
    }
    rows.push_back(std::move(row));
}

void Report::write(std::ostream& out, Format format) const {
    if (format == Format::Csv) {
        write_csv(out);
    } else {
        write_json(out);
    }
}

void Report::write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

void Report::write_json(std::ostream& out) const {
    // Numbers are emitted by hand so JSON and CSV share one formatter.
    out << '[';
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out << (r ? ",\n " : "\n ") << '{';
        for (std::size_t i = 0; i < columns.size(); ++i) {
            out << (i ? ", " : "") << nlohmann::json(columns[i]).dump() << ": " << format_number(rows[r][i]);
        }
        out << '}';
    }
    out << (rows.empty() ? "]\n" : "\n]\n");
}

}  // namespace slfm::cli
