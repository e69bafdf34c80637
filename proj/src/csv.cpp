#include "leaders/csv.hpp"

#include <fmt/format.h>

#include "leaders/error.hpp"

namespace leaders::csv {

namespace {

void write_field(std::ofstream& out, std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        out << field;
        return;
    }
    out << '"';
    for (char c : field) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

}  // namespace

Writer::Writer(const std::filesystem::path& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw IoError("cannot write " + path.string());
}

Writer& Writer::row(std::initializer_list<std::string_view> fields) {
    bool first = true;
    for (auto f : fields) {
        if (!first) out_ << ',';
        write_field(out_, f);
        first = false;
    }
    out_ << '\n';
    if (!out_) throw IoError("write failed: " + path_.string());
    return *this;
}

Writer& Writer::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        write_field(out_, fields[i]);
    }
    out_ << '\n';
    if (!out_) throw IoError("write failed: " + path_.string());
    return *this;
}

std::vector<Row> read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<Row> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Row row;
        std::string field;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    field += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                row.push_back(std::move(field));
                field.clear();
            } else {
                field += c;
            }
        }
        if (quoted) throw ParseError("unterminated quote in " + path.string(), line_no);
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Row> read_with_header(const std::filesystem::path& path,
                                  std::initializer_list<std::string_view> expected_header) {
    auto rows = read(path);
    if (rows.empty()) throw ParseError("missing header in " + path.string(), 1);
    const Row& header = rows.front();
    if (header.size() != expected_header.size() ||
        !std::equal(header.begin(), header.end(), expected_header.begin()))
        throw ParseError("unexpected header in " + path.string(), 1);
    rows.erase(rows.begin());
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].size() != expected_header.size())
            throw ParseError("wrong field count in " + path.string(), i + 2);
    return rows;
}

std::string number(double value) {
    return fmt::format("{}", value);
}

}  // namespace leaders::csv
