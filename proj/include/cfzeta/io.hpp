#pragma once

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfzeta/errors.hpp"
#include "cfzeta/sums.hpp"

namespace cfzeta {

/// Shortest exact decimal is not enough for diffable output; everything
/// numeric in the CSV layer is printed with 17 significant digits, which
/// round-trips any double.
inline std::string format_double(double v) {
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof(buf), v,
                         std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

inline std::string format_complex(Complex v) {
  std::string s = format_double(v.real());
  if (v.imag() >= 0 || std::isnan(v.imag())) {
    s += "+" + format_double(v.imag());
  } else {
    s += format_double(v.imag());
  }
  s += "i";
  return s;
}

/// Parse "a", "bi", or "a+bi" (also "a-bi"), exponents allowed in both
/// parts. Whitespace is not.
inline Complex parse_complex(const std::string& text) {
  if (text.empty()) throw UsageError("empty complex literal");
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  double first = std::strtod(begin, &end);
  if (end == begin) {
    // Forms like "i", "+i", "-i".
    std::string_view sv(text);
    double sign = 1.0;
    if (sv.front() == '+') sv.remove_prefix(1);
    else if (sv.front() == '-') { sign = -1.0; sv.remove_prefix(1); }
    if (sv == "i") return Complex(0.0, sign);
    throw UsageError("bad complex literal: " + text);
  }
  if (*end == '\0') return Complex(first, 0.0);
  if (*end == 'i' && *(end + 1) == '\0') return Complex(0.0, first);
  if (*end != '+' && *end != '-') {
    throw UsageError("bad complex literal: " + text);
  }
  const char* imag_begin = end;
  char* imag_end = nullptr;
  double second = std::strtod(imag_begin, &imag_end);
  if (imag_end == imag_begin) {
    // "a+i" / "a-i": strtod does not consume a bare sign.
    second = (*imag_begin == '-') ? -1.0 : 1.0;
    imag_end = const_cast<char*>(imag_begin + 1);
  }
  if (*imag_end == 'i' && *(imag_end + 1) == '\0') {
    return Complex(first, second);
  }
  throw UsageError("bad complex literal: " + text);
}

/// Key/value lines prefixed with '#', written ahead of the CSV header.
/// Deliberately carries no timestamps: outputs of identical configs must
/// be byte-identical.
struct Metadata {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value) {
    entries.emplace_back(std::move(key), std::move(value));
  }

  std::string to_text() const {
    std::string out;
    for (const auto& [k, v] : entries) {
      out += "# " + k + ": " + v + "\n";
    }
    return out;
  }
};

/// Line-oriented CSV writer with a metadata block, used by the CLI for
/// every tabular output. Rows are flushed as they are written so that an
/// interrupted run leaves a resumable prefix.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const Metadata& meta,
            const std::string& header, bool append) {
    std::ios_base::openmode mode = std::ios::out;
    mode |= append ? std::ios::app : std::ios::trunc;
    file_.open(path, mode);
    if (!file_) throw IoError("cannot open for writing: " + path.string());
    if (!append) {
      file_ << meta.to_text() << header << "\n";
      file_.flush();
    }
  }

  void row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) line += ",";
      line += format_double(values[i]);
    }
    file_ << line << "\n";
    file_.flush();
  }

  void raw_row(const std::string& line) {
    file_ << line << "\n";
    file_.flush();
  }

 private:
  std::ofstream file_;
};

/// Parsed CSV file: metadata lines, header, numeric rows.
struct CsvFile {
  Metadata meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw IoError("CSV has no column named '" + name + "'");
  }

  std::vector<double> column(const std::string& name) const {
    const std::size_t idx = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(idx));
    return out;
  }

  std::string meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta.entries) {
      if (k == key) return v;
    }
    return {};
  }
};

inline CsvFile read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  CsvFile out;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      const std::size_t colon = body.find(':');
      if (colon != std::string::npos) {
        std::string key = body.substr(0, colon);
        std::string value = body.substr(colon + 1);
        auto strip = [](std::string& s) {
          while (!s.empty() && s.front() == ' ') s.erase(s.begin());
          while (!s.empty() && s.back() == ' ') s.pop_back();
        };
        strip(key);
        strip(value);
        out.meta.add(key, value);
      }
      continue;
    }
    if (!have_header) {
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) out.columns.push_back(cell);
      have_header = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (!row.empty()) out.rows.push_back(std::move(row));
  }
  return out;
}

/// Everything from the header row down, for byte-comparing data sections
/// while ignoring the metadata block.
inline std::string read_data_section(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::string out, line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    out += line;
    out += "\n";
  }
  return out;
}

}  // namespace cfzeta
