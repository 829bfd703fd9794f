#pragma once

#include <string>
#include <vector>

namespace lab {

// All numeric cells go through one formatter (17 significant digits) so that
// a value is written identically wherever it appears; reports are then
// byte-comparable across runs with the same config and seed.
std::string csv_number(double v);

struct CsvTable {
  std::vector<std::string> comments;  // emitted first, each prefixed "# "
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

// Creates parent directories as needed; any filesystem failure is a
// configuration error (bad --out), not a numeric one.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace lab
