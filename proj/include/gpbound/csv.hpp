#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gpbound {

// Minimal comma-separated table: no quoting, since no field we write can
// contain a comma. Empty fields are allowed.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws InvalidInput if absent.
  std::size_t column(const std::string& name) const;
  const std::string& at(std::size_t row, const std::string& name) const;
  // Parses a numeric field; "inf", "-inf" and "nan" are accepted.
  double number(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const CsvTable& table);

std::vector<std::string> split_csv_line(const std::string& line);

// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

}  // namespace gpbound
