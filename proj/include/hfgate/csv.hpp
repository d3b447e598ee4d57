#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hfgate {

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// Parses a full string as a double; throws InputError otherwise.
double parse_double(std::string_view text);

// Minimal CSV emitter: one header line, comma separated, no quoting.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(unsigned long long value);
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(std::size_t value) { return cell(static_cast<unsigned long long>(value)); }
  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(const char* text) { return cell(std::string_view(text)); }
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t current_ = 0;
};

// Splits one CSV line on commas (no quoting support).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace hfgate
