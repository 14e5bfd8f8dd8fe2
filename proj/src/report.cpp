#include "opuc/report.hpp"

#include <fstream>

#include <fmt/format.h>

namespace opuc {

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size())
    throw Error(ErrorKind::contract,
                fmt::format("table {}: row has {} fields, expected {}", name, row.size(), columns.size()));
  rows.push_back(std::move(row));
}

std::string num(double x) { return fmt::format("{:.17g}", x); }
std::string num(long long x) { return fmt::format("{}", x); }
std::string num(int x) { return fmt::format("{}", x); }
std::string num(std::size_t x) { return fmt::format("{}", x); }

std::string render_table(const Table& table, const std::string& header) {
  std::string out = "# " + header + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "\t" : "") + table.columns[i];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "\t" : "") + row[i];
    out += "\n";
  }
  return out;
}

std::filesystem::path write_table(const std::filesystem::path& dir, const Table& table, const std::string& header) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (table.name + ".tsv");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::configuration, fmt::format("cannot write {}", path.string()));
  f << render_table(table, header);
  return path;
}

}  // namespace opuc
