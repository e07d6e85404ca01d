#include "dualopa/output.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace dualopa::output {

namespace {

using nlohmann::json;

// Doubles are rounded to the output precision; everything else is as-is.
json rounded(const json& value, int precision) {
  if (value.is_number_float()) return round_to_precision(value.get<double>(), precision);
  if (value.is_object() || value.is_array()) {
    json out = value;
    for (auto& item : out) item = rounded(item, precision);
    return out;
  }
  return value;
}

std::string cell_text(const json& value, int precision) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_float()) return format_number(value.get<double>(), precision);
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_null()) return "";
  return value.dump();
}

void flatten(const json& value, const std::string& prefix, int precision, std::string& out) {
  if (value.is_object()) {
    for (const auto& [key, item] : value.items()) {
      flatten(item, prefix.empty() ? key : prefix + "." + key, precision, out);
    }
    return;
  }
  out += fmt::format("# {}={}\n", prefix, cell_text(value, precision));
}

}  // namespace

std::string format_number(double value, int precision) {
  if (value == 0.0) return "0";  // also folds -0
  return fmt::format("{:.{}g}", value, precision);
}

double round_to_precision(double value, int precision) {
  if (!std::isfinite(value)) return value;
  return std::stod(format_number(value, precision));
}

std::string occupation_label(const Occupation& occ) { return fmt::format("{}", fmt::join(occ.counts, ";")); }

Section state_section(const State& state, std::string name) {
  Section s{std::move(name), {"occupation", "re", "im"}, {}};
  s.rows.reserve(state.size());
  for (const auto& [occ, amp] : state.terms()) {
    s.rows.push_back({occupation_label(occ), amp.real(), amp.imag()});
  }
  return s;
}

std::string render_csv(const Document& doc, int precision) {
  std::string out;
  flatten(doc.metadata, "", precision, out);
  for (std::size_t i = 0; i < doc.sections.size(); ++i) {
    const Section& s = doc.sections[i];
    if (i > 0) out += fmt::format("\n# section={}\n", s.name);
    out += fmt::format("{}\n", fmt::join(s.columns, ","));
    for (const auto& row : s.rows) {
      std::vector<std::string> cells;
      cells.reserve(row.size());
      for (const auto& cell : row) cells.push_back(cell_text(cell, precision));
      out += fmt::format("{}\n", fmt::join(cells, ","));
    }
  }
  return out;
}

std::string render_json(const Document& doc, int precision) {
  json root = json::object();
  root["metadata"] = rounded(doc.metadata, precision);
  for (const Section& s : doc.sections) {
    json rows = json::array();
    for (const auto& row : s.rows) {
      json obj = json::object();
      for (std::size_t c = 0; c < s.columns.size() && c < row.size(); ++c) obj[s.columns[c]] = rounded(row[c], precision);
      rows.push_back(std::move(obj));
    }
    root[s.name] = std::move(rows);
  }
  return root.dump(2) + "\n";
}

std::string render_heatmap_svg(const std::vector<HeatmapCell>& cells, const std::string& title, int precision) {
  int n_max = 0;
  int m_max = 0;
  double v_max = 0.0;
  for (const auto& c : cells) {
    n_max = std::max(n_max, c.n);
    m_max = std::max(m_max, c.m);
    v_max = std::max(v_max, c.value);
  }
  constexpr int kCell = 56;
  constexpr int kMargin = 48;
  const int width = kMargin + (m_max + 1) * kCell + 16;
  const int height = kMargin + (n_max + 1) * kCell + 16;

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"monospace\" font-size=\"9\">\n",
      width, height);
  svg += fmt::format("<title>{}</title>\n", title);
  svg += fmt::format("<text x=\"{}\" y=\"14\" font-size=\"12\">{}</text>\n", kMargin, title);
  svg += fmt::format("<text x=\"{}\" y=\"30\" font-size=\"11\">m</text>\n", kMargin + (m_max + 1) * kCell / 2);
  svg += fmt::format("<text x=\"8\" y=\"{}\" font-size=\"11\">n</text>\n", kMargin + (n_max + 1) * kCell / 2);
  for (int m = 0; m <= m_max; ++m) {
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kMargin + m * kCell + kCell / 2,
                       kMargin - 4, m);
  }
  for (int n = 0; n <= n_max; ++n) {
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", kMargin - 4,
                       kMargin + n * kCell + kCell / 2 + 3, n);
  }
  for (const auto& c : cells) {
    // Linear grayscale: white for 0, black for the table maximum.
    const double level = v_max > 0.0 ? c.value / v_max : 0.0;
    const int shade = static_cast<int>(std::lround(255.0 * (1.0 - level)));
    const char* ink = level > 0.5 ? "#ffffff" : "#000000";
    const int x = kMargin + c.m * kCell;
    const int y = kMargin + c.n * kCell;
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"rgb({},{},{})\" stroke=\"#888888\"/>\n",
                       x, y, kCell, kCell, shade, shade, shade);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"{}\">{}</text>\n", x + kCell / 2,
                       y + kCell / 2 + 3, ink, format_number(c.value, std::min(precision, 4)));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace dualopa::output
