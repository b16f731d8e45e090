#pragma once

// Column-oriented output shared by every command. CSV and JSON carry the same
// doubles: CSV at 17 significant digits, JSON in shortest round-trip form.

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kramers::cli {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::invalid_argument when the row width differs from columns.
  void add_row(std::vector<Cell> row);
};

std::string to_csv(const Table& table);
/// {"meta": meta, "columns": [...], "rows": [[...], ...]}
std::string to_json(const Table& table, const nlohmann::json& meta);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace kramers::cli
