#include "hetsleep/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hetsleep {

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw CsvError("csv: no column '" + name + "'");
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote(const std::string& f) {
  if (f.find_first_of(",\"\n") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split(const std::string& line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw CsvError("csv line " + std::to_string(lineno) + ": unterminated quote");
  out.push_back(cur);
  return out;
}

}  // namespace

void write_csv(std::ostream& os, const CsvTable& t) {
  os << "# schema: " << kCsvSchema << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << quote(t.columns[i]);
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << quote(r[i]);
    os << "\n";
  }
}

void write_csv_file(const std::string& path, const CsvTable& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CsvError("csv: cannot open '" + path + "' for writing");
  write_csv(f, t);
  if (!f) throw CsvError("csv: write to '" + path + "' failed");
}

CsvTable read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw CsvError("csv line 1: empty input");
  const std::string prefix = "# schema: ";
  if (line.rfind(prefix, 0) != 0) throw CsvError("csv line 1: missing schema header");
  const std::string version = line.substr(prefix.size());
  if (version != kCsvSchema)
    throw CsvError("csv line 1: unsupported schema '" + version + "' (expected " + kCsvSchema + ")");
  CsvTable t;
  if (!std::getline(is, line)) throw CsvError("csv line 2: missing column header");
  t.columns = split(line, 2);
  std::size_t lineno = 2;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto r = split(line, lineno);
    if (r.size() != t.columns.size())
      throw CsvError("csv line " + std::to_string(lineno) + ": expected " +
                     std::to_string(t.columns.size()) + " fields, got " + std::to_string(r.size()));
    t.rows.push_back(std::move(r));
  }
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CsvError("csv: cannot open '" + path + "'");
  return read_csv(f);
}

}  // namespace hetsleep
