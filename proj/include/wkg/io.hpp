#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace wkg {

inline constexpr int kSchemaVersion = 1;

// CSV with a fixed header; numbers are written with round-trip precision.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(const std::vector<double>& values);
  // Mixed row; each cell is preformatted.
  void row_cells(const std::vector<std::string>& cells);
  const std::vector<std::string>& header() const { return header_; }

 private:
  std::ofstream out_;
  std::vector<std::string> header_;
};

std::string format_number(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a column; throws when absent.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

// Documented column sets.
const std::vector<std::string>& region_columns();
const std::vector<std::string>& hyperboloid_columns();
const std::vector<std::string>& summary_columns();
const std::vector<std::string>& bootstrap_columns();

}  // namespace wkg
