#include "recruit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace recruit::report {

std::string fmt_sig(double x) {
  if (x == 0.0) return "0";  // normalizes -0
  if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Cell Cell::str(std::string s) {
  Cell c;
  c.kind = Kind::Text;
  c.text = std::move(s);
  return c;
}
Cell Cell::num(double x) {
  Cell c;
  c.kind = Kind::Real;
  c.real = x;
  return c;
}
Cell Cell::count(long long n) {
  Cell c;
  c.kind = Kind::Int;
  c.integer = n;
  return c;
}
Cell Cell::flag(bool b) {
  Cell c;
  c.kind = Kind::Boolean;
  c.boolean = b;
  return c;
}

std::string Cell::to_text() const {
  switch (kind) {
    case Kind::Text: return text;
    case Kind::Real: return fmt_sig(real);
    case Kind::Int: return std::to_string(integer);
    case Kind::Boolean: return boolean ? "true" : "false";
  }
  return "";
}

Format parse_format(const std::string& name) {
  if (name == "table") return Format::Table;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw std::invalid_argument("unknown output format '" + name + "'");
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string json_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
  return out;
}

std::string json_cell(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::Text: return json_quote(c.text);
    case Cell::Kind::Real:
      if (!std::isfinite(c.real)) return "null";
      return fmt_sig(c.real);
    case Cell::Kind::Int: return std::to_string(c.integer);
    case Cell::Kind::Boolean: return c.boolean ? "true" : "false";
  }
  return "null";
}

std::string render_table(const Document& doc) {
  std::string out;
  for (const auto& [k, v] : doc.meta) out += k + ": " + v.to_text() + "\n";
  for (const auto& table : doc.tables) {
    if (!out.empty()) out += "\n";
    out += "== " + table.name + " ==\n";
    std::vector<std::size_t> width(table.columns.size());
    for (std::size_t j = 0; j < table.columns.size(); ++j)
      width[j] = table.columns[j].size();
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : table.rows) {
      std::vector<std::string> r;
      for (std::size_t j = 0; j < row.size(); ++j) {
        r.push_back(row[j].to_text());
        if (j < width.size()) width[j] = std::max(width[j], r.back().size());
      }
      cells.push_back(std::move(r));
    }
    auto emit_row = [&](const std::vector<std::string>& r) {
      for (std::size_t j = 0; j < r.size(); ++j) {
        out += r[j];
        if (j + 1 < r.size()) out += std::string(width[j] - r[j].size() + 2, ' ');
      }
      out += "\n";
    };
    emit_row(table.columns);
    for (const auto& r : cells) emit_row(r);
  }
  return out;
}

std::string render_csv(const Document& doc) {
  std::string out;
  bool first = true;
  for (const auto& table : doc.tables) {
    if (!first) out += "\n";
    first = false;
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      if (j) out += ",";
      out += csv_quote(table.columns[j]);
    }
    out += "\n";
    for (const auto& row : table.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) out += ",";
        out += csv_quote(row[j].to_text());
      }
      out += "\n";
    }
  }
  return out;
}

std::string render_json(const Document& doc) {
  std::string out = "{\n  \"meta\": {";
  for (std::size_t i = 0; i < doc.meta.size(); ++i) {
    out += i ? ",\n    " : "\n    ";
    out += json_quote(doc.meta[i].first) + ": " + json_cell(doc.meta[i].second);
  }
  out += doc.meta.empty() ? "},\n" : "\n  },\n";
  out += "  \"results\": {";
  for (std::size_t t = 0; t < doc.tables.size(); ++t) {
    const auto& table = doc.tables[t];
    out += t ? ",\n    " : "\n    ";
    out += json_quote(table.name) + ": [";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      out += i ? ",\n      " : "\n      ";
      out += "{";
      const auto& row = table.rows[i];
      for (std::size_t j = 0; j < row.size() && j < table.columns.size(); ++j) {
        if (j) out += ", ";
        out += json_quote(table.columns[j]) + ": " + json_cell(row[j]);
      }
      out += "}";
    }
    out += table.rows.empty() ? "]" : "\n    ]";
  }
  out += doc.tables.empty() ? "}\n" : "\n  }\n";
  out += "}\n";
  return out;
}

}  // namespace

std::string render(const Document& doc, Format format) {
  switch (format) {
    case Format::Table: return render_table(doc);
    case Format::Csv: return render_csv(doc);
    case Format::Json: return render_json(doc);
  }
  return "";
}

}  // namespace recruit::report
