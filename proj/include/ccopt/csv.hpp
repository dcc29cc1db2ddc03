#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace ccopt {

// Minimal RFC 4180 writer: CRLF records, fields quoted only when they
// contain a comma, quote or newline. Numbers are rendered with
// std::to_chars (shortest round-trip, '.' decimal separator), which keeps
// repeated runs byte-identical.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void write_row(const std::vector<std::string>& fields);

  bool good() const { return out_.good(); }

 private:
  std::ofstream out_;
};

// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

}  // namespace ccopt
