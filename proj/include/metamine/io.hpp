#pragma once
// On-disk formats: CSV files (RFC 4180 quoting) and database directories
// holding one <relation>.csv per relation.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "metamine/relcore.hpp"

namespace metamine {

using CsvRows = std::vector<std::vector<std::string>>;

// Accepts LF or CRLF line ends and a missing final newline. Throws ParseError
// on an unterminated quote or stray characters after a closing quote.
CsvRows read_csv(std::string_view text);
std::string write_csv(const CsvRows& rows);

// The first row of each file is a header whose width fixes the arity. Files
// not ending in .csv are ignored. Throws IoError, ParseError (with the file
// name in the message) or ValidationError on a ragged row.
Database load_database(const std::filesystem::path& dir);
// Creates dir if needed. Header cells are c1..ck.
void save_database(const Database& db, const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace metamine
