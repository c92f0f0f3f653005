#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>

namespace cryostef::harness {

/// One CSV cell: counts print as integers, reals with 17 significant digits.
using CsvCell = std::variant<double, std::uint64_t>;

std::string format_real(double v);

class CsvWriter {
 public:
  /// Creates parent directories and writes the header. Throws ConfigError if
  /// the file cannot be opened.
  CsvWriter(const std::filesystem::path& file, std::initializer_list<std::string_view> header);

  void row(std::initializer_list<CsvCell> cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace cryostef::harness
