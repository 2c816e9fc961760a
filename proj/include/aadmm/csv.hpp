#ifndef AADMM_CSV_HPP
#define AADMM_CSV_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aadmm/core.hpp"

namespace aadmm {

/// A header row plus string cells; numbers are written in shortest
/// round-trip form so tables re-parse exactly.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

std::string format_number(double v);
std::string format_number(long v);

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Single-column CSV, one value per line, no header.
void write_vector_csv(std::ostream& out, const Vector& v);
void write_vector_csv(const std::filesystem::path& path, const Vector& v);
Vector read_vector_csv(std::istream& in);
Vector read_vector_csv(const std::filesystem::path& path);

}  // namespace aadmm

#endif  // AADMM_CSV_HPP
