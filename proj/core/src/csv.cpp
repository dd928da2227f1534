#include "jacktrack/csv.hpp"

#include <istream>

namespace jacktrack {

std::vector<std::string> split_csv_line(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == delim) {
            out.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(std::move(field));
    return out;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

CsvReader::CsvReader(std::istream& in, char delim) : in_(in), delim_(delim) {
    std::string line;
    if (std::getline(in_, line)) {
        if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
            static_cast<unsigned char>(line[1]) == 0xBB &&
            static_cast<unsigned char>(line[2]) == 0xBF)
            line.erase(0, 3);  // UTF-8 BOM
        header_ = split_csv_line(line, delim_);
    }
}

int CsvReader::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name) return static_cast<int>(i);
    return -1;
}

bool CsvReader::next_row(std::vector<std::string>& row) {
    std::string line;
    while (std::getline(in_, line)) {
        if (line.empty() || line == "\r") continue;
        row = split_csv_line(line, delim_);
        return true;
    }
    return false;
}

}  // namespace jacktrack
