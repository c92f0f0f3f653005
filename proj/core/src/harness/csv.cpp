#include "cryostef/harness/csv.hpp"

#include <fmt/format.h>

#include "cryostef/errors.hpp"

namespace cryostef::harness {

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

CsvWriter::CsvWriter(const std::filesystem::path& file,
                     std::initializer_list<std::string_view> header)
    : columns_(header.size()) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  out_.open(file);
  if (!out_) throw ConfigError("cannot open '" + file.string() + "' for writing");
  bool first = true;
  for (auto h : header) {
    if (!first) out_ << ',';
    out_ << h;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<CsvCell> cells) {
  if (cells.size() != columns_) throw ConfigError("CSV row width does not match header");
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out_ << ',';
    if (const auto* d = std::get_if<double>(&c)) {
      out_ << format_real(*d);
    } else {
      out_ << std::get<std::uint64_t>(c);
    }
    first = false;
  }
  out_ << '\n';
}

}  // namespace cryostef::harness
