#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace schurnorm {

/// Header plus numeric rows of a comma-separated file.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Index of a named column; throws MissingColumn.
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

struct BaselineLines {
  std::optional<double> lambda_inverse;
  std::optional<double> l2_kbar;
  std::optional<double> tkbar_norm;
};

BaselineLines read_baselines(const std::filesystem::path& path);

// SVG documents. Each throws when the table has no data rows.
std::string sweep_svg(const CsvTable& sweep, const BaselineLines& lines);
std::string convergence_svg(const CsvTable& history);
std::string profiles_svg(const CsvTable& profiles);

struct PlotInputs {
  std::optional<std::filesystem::path> sweep_csv;
  std::optional<std::filesystem::path> baselines_json;
  std::optional<std::filesystem::path> history_csv;
  std::optional<std::filesystem::path> profiles_csv;
};

/// Writes sweep.svg, convergence.svg and profiles.svg for the inputs given.
/// All documents are built before any file is written.
std::vector<std::filesystem::path> cmd_plot(const PlotInputs& inputs,
                                            const std::filesystem::path& output_dir);

}  // namespace schurnorm
