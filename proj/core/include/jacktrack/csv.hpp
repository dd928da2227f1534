#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace jacktrack {

// Splits one CSV line; understands double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line, char delim = ',');

// Quotes a field only when it needs it.
std::string csv_escape(std::string_view field);

// Header-indexed row reader over an istream.
class CsvReader {
public:
    CsvReader(std::istream& in, char delim = ',');

    // -1 when the column is absent.
    int column_index(std::string_view name) const;
    const std::vector<std::string>& header() const { return header_; }

    // False at end of stream; `row` holds split fields otherwise.
    bool next_row(std::vector<std::string>& row);

private:
    std::istream& in_;
    char delim_;
    std::vector<std::string> header_;
};

}  // namespace jacktrack
