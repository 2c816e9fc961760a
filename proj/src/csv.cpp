#include "aadmm/csv.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace aadmm {

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error("CSV has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  return std::stod(rows.at(row).at(column(name)));
}

std::string format_number(double v) { return fmt::format("{}", v); }
std::string format_number(long v) { return fmt::format("{}", v); }

namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& table) {
  out << join(table.header) << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw DimensionError("CSV row width", static_cast<long>(table.header.size()),
                           static_cast<long>(row.size()));
    }
    out << join(row) << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  auto out = open_out(path);
  write_csv(out, table);
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error("CSV is empty");
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw DimensionError("CSV row width", static_cast<long>(table.header.size()),
                           static_cast<long>(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_csv(in);
}

void write_vector_csv(std::ostream& out, const Vector& v) {
  for (long i = 0; i < v.size(); ++i) out << format_number(v[i]) << '\n';
}

void write_vector_csv(const std::filesystem::path& path, const Vector& v) {
  auto out = open_out(path);
  write_vector_csv(out, v);
}

Vector read_vector_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::size_t used = 0;
    double value;
    try {
      value = std::stod(line, &used);
    } catch (const std::exception&) {
      throw Error(fmt::format("vector CSV line {}: '{}' is not a number", line_no, line));
    }
    if (line.find_first_not_of(" \r", used) != std::string::npos) {
      throw Error(fmt::format("vector CSV line {}: expected a single value", line_no));
    }
    values.push_back(value);
  }
  Vector v = Eigen::Map<const Vector>(values.data(), static_cast<long>(values.size()));
  require_finite(v, "vector CSV");
  return v;
}

Vector read_vector_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_vector_csv(in);
}

}  // namespace aadmm
