#include <doctest.h>

#include <sstream>

#include "hetsleep/csv.hpp"

using namespace hetsleep;

TEST_CASE("csv round trip with quoting") {
  CsvTable t;
  t.columns = {"a", "b"};
  t.rows = {{"1", "x,y"}, {"2.5", "say \"hi\""}};
  std::ostringstream os;
  write_csv(os, t);
  CHECK(os.str().rfind("# schema: " + std::string(kCsvSchema) + "\n", 0) == 0);
  std::istringstream is(os.str());
  const CsvTable back = read_csv(is);
  CHECK(back.columns == t.columns);
  CHECK(back.rows == t.rows);
  CHECK(back.column("b") == 1);
}

TEST_CASE("csv reader rejects foreign or malformed input") {
  std::istringstream none("a,b\n1,2\n");
  CHECK_THROWS_AS(read_csv(none), CsvError);
  std::istringstream future("# schema: hetsleep-csv/99\na,b\n1,2\n");
  CHECK_THROWS_AS(read_csv(future), CsvError);
  std::istringstream ragged("# schema: hetsleep-csv/1\na,b\n1,2\n3\n");
  try {
    read_csv(ragged);
    FAIL("ragged row accepted");
  } catch (const CsvError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("numbers print in shortest round-trip form") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(24.0) == "24");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
