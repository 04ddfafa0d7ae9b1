#pragma once

// Minimal CSV support: one record per line, comma separated, double-quoted
// fields with "" escapes. Embedded newlines are not supported.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cumuldyn::csv {

struct Row {
    std::size_t line = 0;  ///< 1-based source line
    std::vector<std::string> fields;
};

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;

    std::optional<std::size_t> column(std::string_view name) const;
};

/// Split one line into fields. Throws InputError on an unterminated quote.
std::vector<std::string> split_line(std::string_view line, std::size_t line_no);

/// Read a headed table; blank lines are skipped and a trailing '\r' removed.
Table read(std::istream& in);
/// Throws IoError when the file cannot be opened.
Table read_file(const std::filesystem::path& path);

/// Quote a field when it contains a comma, quote or leading/trailing space.
std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

/// Shortest decimal text that round-trips to the same double; "nan", "inf".
std::string format_double(double value);

}  // namespace cumuldyn::csv
