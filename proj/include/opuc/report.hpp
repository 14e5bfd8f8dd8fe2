#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "opuc/error.hpp"

namespace opuc {

/// Tab-separated table with a fixed column order.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

/// Shortest round-trip decimal form of a double ("{:.17g}").
std::string num(double x);
std::string num(long long x);
std::string num(int x);
std::string num(std::size_t x);

/// Writes "# <header>", the column line and the rows; returns the path.
std::filesystem::path write_table(const std::filesystem::path& dir, const Table& table, const std::string& header);

std::string render_table(const Table& table, const std::string& header);

}  // namespace opuc
