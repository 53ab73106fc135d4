#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace sojourn {

// shortest decimal form that parses back bitwise
std::string format_double(double x);
double parse_double(const std::string& text);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& line);
  void header(std::span<const std::string> names);
  void row(std::span<const double> values);
  void row(std::span<const std::string> cells);

 private:
  std::ostream& out_;
};

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace sojourn
