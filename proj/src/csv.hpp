#ifndef PCIP_CSV_HPP
#define PCIP_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

namespace pcip {

/// Shortest representation that round-trips to the same double.
std::string format_double(double v);

/// Comma-separated writer with LF line endings and a header row.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void raw_row(const std::string& line);

 private:
  std::ofstream out_;
};

}  // namespace pcip

#endif
