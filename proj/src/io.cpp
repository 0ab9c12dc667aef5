#include "metamine/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "metamine/error.hpp"

namespace metamine {

namespace fs = std::filesystem;

CsvRows read_csv(std::string_view text) {
  CsvRows rows;
  std::vector<std::string> row;
  std::string field;
  std::size_t line = 1, column = 1;
  std::size_t i = 0;
  bool row_open = false;
  bool quoted = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  // Blank lines are skipped; a line holding only "" is a one-field row.
  auto end_row = [&] {
    const bool blank = row.empty() && field.empty() && !quoted;
    end_field();
    if (!blank) rows.push_back(std::move(row));
    quoted = false;
    row.clear();
    row_open = false;
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c != '\n' && c != '\r') row_open = true;
    if (c == '"' && field.empty()) {
      row_open = true;
      const std::size_t qline = line, qcol = column;
      ++i, ++column;
      for (;;) {
        if (i >= text.size()) throw ParseError("unterminated quoted field", qline, qcol);
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            i += 2, column += 2;
            continue;
          }
          ++i, ++column;
          break;
        }
        if (text[i] == '\n') ++line, column = 0;
        field += text[i++];
        ++column;
      }
      if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
        throw ParseError("unexpected character after closing quote", line, column);
      quoted = true;
      continue;
    }
    if (c == ',') {
      end_field();
      ++i, ++column;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      end_row();
      i += 2, ++line, column = 1;
    } else if (c == '\n') {
      end_row();
      ++i, ++line, column = 1;
    } else {
      field += c;
      ++i, ++column;
    }
  }
  if (row_open) end_row();
  return rows;
}

namespace {

bool needs_quotes(const std::string& s) {
  return s.empty() || s.find_first_of(",\"\r\n") != std::string::npos || s.front() == ' ' || s.back() == ' ';
}

}  // namespace

std::string write_csv(const CsvRows& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      const auto& v = row[c];
      if (!needs_quotes(v)) {
        out += v;
        continue;
      }
      out += '"';
      for (char ch : v) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    }
    out += '\n';
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

Database load_database(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a database directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  Database db;
  for (const auto& file : files) {
    CsvRows rows;
    try {
      rows = read_csv(read_file(file));
    } catch (const ParseError& e) {
      throw ParseError(file.filename().string() + ": " + e.what(), e.line(), e.column());
    }
    if (rows.empty()) throw ValidationError(file.filename().string() + ": missing header row");
    const std::size_t arity = rows.front().size();
    rows.erase(rows.begin());
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (rows[r].size() != arity)
        throw ValidationError(file.filename().string() + ": row " + std::to_string(r + 2) + " has " +
                              std::to_string(rows[r].size()) + " fields, expected " + std::to_string(arity));
    db.add(Relation::from_rows(file.stem().string(), arity, rows));
  }
  return db;
}

void save_database(const Database& db, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto* r : db.relations()) {
    CsvRows rows(1);
    for (std::size_t c = 0; c < r->arity(); ++c) rows[0].push_back("c" + std::to_string(c + 1));
    for (std::size_t t = 0; t < r->size(); ++t) {
      std::vector<std::string> row;
      for (const auto& v : r->row(t)) row.emplace_back(v.text());
      rows.push_back(std::move(row));
    }
    write_file(dir / (r->name() + ".csv"), write_csv(rows));
  }
}

}  // namespace metamine
