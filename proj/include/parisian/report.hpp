#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace parisian {

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// CSV: comma separated, LF line endings, trailing newline, UTF-8.
std::string to_csv(const Table& table);

// JSON: array of row objects keyed by the header names.
std::string to_json_rows(const Table& table);

Table parse_csv(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::string sha256_hex(const std::string& data);

inline constexpr const char* kArtifactVersion = "0.1.0";

} // namespace parisian
