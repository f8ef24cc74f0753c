#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cds/experiments.hpp"

namespace cds {

/// Fixed-notation decimal string, locale-independent.
std::string format_fixed(double value, int precision);

/// One column per axis plus "concurrence"; one row per grid point in
/// row-major axis order; LF line endings; UTF-8. Integral axes print as
/// integers, everything else at fixed `precision` digits.
void write_csv(const SweepResult& result, const std::filesystem::path& path,
               int precision = 12);

/// Generic numeric table with the same formatting rules. `integral` marks
/// columns serialized as integers.
void write_table_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows, int precision,
                     const std::vector<bool>& integral = {});

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Parse a CSV written by write_csv / write_table_csv.
CsvTable read_csv(const std::filesystem::path& path);

/// Static chart of a sweep: polylines (one per leading-axis value) for time
/// traces, a heatmap for dense two-axis grids. Convenience view only.
void write_svg(const SweepResult& result, const std::filesystem::path& path,
               const std::string& title = "");

}  // namespace cds
