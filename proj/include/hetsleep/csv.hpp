#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetsleep {

inline constexpr const char* kCsvSchema = "hetsleep-csv/1";

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

/// Shortest round-trip decimal text of v.
std::string format_number(double v);

/// Writes the schema line, the header and the rows.
void write_csv(std::ostream& os, const CsvTable& t);
void write_csv_file(const std::string& path, const CsvTable& t);

/// Rejects a missing or unknown schema line and ragged rows.
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

}  // namespace hetsleep
