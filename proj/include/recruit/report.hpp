#pragma once

#include <string>
#include <vector>

namespace recruit::report {

// 12 significant digits; enough for stable golden files, short enough to read.
std::string fmt_sig(double x);

struct Cell {
  enum class Kind { Text, Real, Int, Boolean };
  Kind kind = Kind::Text;
  std::string text;
  double real = 0.0;
  long long integer = 0;
  bool boolean = false;

  static Cell str(std::string s);
  static Cell num(double x);
  static Cell count(long long n);
  static Cell flag(bool b);
  std::string to_text() const;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Document {
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<Table> tables;
};

enum class Format { Table, Csv, Json };
Format parse_format(const std::string& name);  // throws on unknown name

// Deterministic rendering: fixed key order, fixed float formatting, no
// timestamps. Identical documents render byte-identically.
std::string render(const Document& doc, Format format);

}  // namespace recruit::report
