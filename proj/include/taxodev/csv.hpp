#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace taxodev::csv {

struct Row {
    std::size_t line = 0;  // 1-based line number in the source file
    std::vector<std::string> fields;
};

/// Splits one comma-separated record. Double-quoted fields may contain commas
/// and doubled quotes.
std::vector<std::string> split_record(std::string_view record);

/// Reads a whole file. The first non-empty record is the header; blank lines
/// are skipped. Throws Error{Io} if the file cannot be opened.
std::vector<Row> read_file(const std::filesystem::path& path, std::vector<std::string>& header);

/// Quotes a field if it contains a comma, quote or newline.
std::string escape(std::string_view field);

/// Fixed 6-decimal rendering used by every CSV output.
std::string fixed6(double value);

/// Shortest representation that parses back to the identical double.
std::string roundtrip(double value);

/// Strict parse of a whole field as a finite double; false on any trailing junk.
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, int& out);

}  // namespace taxodev::csv
