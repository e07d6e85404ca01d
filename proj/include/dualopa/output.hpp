#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dualopa/fock.hpp"

namespace dualopa::output {

enum class Format { Csv, Json, Svg };

struct OutputSpec {
  Format format = Format::Csv;
  /// "-" writes to standard output.
  std::string path = "-";
  /// Significant decimal digits, 1..17.
  int precision = 12;
};

/// Shortest "%g"-style rendering with `precision` significant digits.
std::string format_number(double value, int precision);
/// `value` rounded to `precision` significant digits.
double round_to_precision(double value, int precision);

/// Occupation rendered as counts joined by ';', e.g. "0;2;0;0".
std::string occupation_label(const Occupation& occ);

struct Section {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

/// A command's result: metadata plus one or more tables. The first
/// section is the primary table and is named "data".
struct Document {
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<Section> sections;
};

/// Term rows (occupation, re, im) in lexicographic order.
Section state_section(const State& state, std::string name = "data");

/// CSV: `# key=value` metadata lines (nested keys joined with '.'), then a
/// header row and data rows per section; later sections are preceded by a
/// blank line and `# section=<name>`. LF line endings.
std::string render_csv(const Document& doc, int precision);

/// {"metadata": {...}, "data": [{column: value}, ...], <section>: [...]}
/// with keys in sorted order.
std::string render_json(const Document& doc, int precision);

struct HeatmapCell {
  int n = 0;
  int m = 0;
  double value = 0.0;
};

/// Grayscale (n, m) heatmap with annotated cell values; darker is larger.
std::string render_heatmap_svg(const std::vector<HeatmapCell>& cells, const std::string& title, int precision);

}  // namespace dualopa::output
