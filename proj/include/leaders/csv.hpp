#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace leaders::csv {

/// Minimal RFC-4180 style writer: fields containing a comma, quote or newline
/// are quoted. Output uses '\n' line endings.
class Writer {
public:
    explicit Writer(const std::filesystem::path& path);

    Writer& row(std::initializer_list<std::string_view> fields);
    Writer& row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
    std::filesystem::path path_;
};

using Row = std::vector<std::string>;

/// Reads every row, header included. Throws IoError if the file is missing and
/// ParseError on an unterminated quote.
std::vector<Row> read(const std::filesystem::path& path);

/// Reads rows after checking that the header equals `expected_header`.
std::vector<Row> read_with_header(const std::filesystem::path& path,
                                  std::initializer_list<std::string_view> expected_header);

/// Shortest round-trip decimal representation.
std::string number(double value);

}  // namespace leaders::csv
