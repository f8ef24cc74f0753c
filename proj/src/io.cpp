#include "cds/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace cds {

namespace {

std::string format_int(double value) {
  return std::to_string(static_cast<long long>(std::llround(value)));
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

/// Axis indices of the row-major flat index `k`.
std::vector<std::size_t> unflatten(std::size_t k, const std::vector<SweepAxis>& axes) {
  std::vector<std::size_t> idx(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    idx[a] = k % axes[a].values.size();
    k /= axes[a].values.size();
  }
  return idx;
}

}  // namespace

std::string format_fixed(double value, int precision) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::fixed, precision);
  if (ec != std::errc()) throw std::runtime_error("value formatting failed");
  return std::string(buf, ptr);
}

void write_table_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows, int precision,
                     const std::vector<bool>& integral) {
  std::ofstream out = open_out(path);
  for (std::size_t c = 0; c < header.size(); ++c)
    out << (c ? "," : "") << header[c];
  out << '\n';
  for (const std::vector<double>& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("csv row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      const bool as_int = c < integral.size() && integral[c];
      out << (c ? "," : "") << (as_int ? format_int(row[c]) : format_fixed(row[c], precision));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_csv(const SweepResult& result, const std::filesystem::path& path,
               int precision) {
  std::vector<std::string> header;
  std::vector<bool> integral;
  for (const SweepAxis& axis : result.axes()) {
    header.push_back(axis.name);
    integral.push_back(axis.integral);
  }
  header.push_back("concurrence");
  integral.push_back(false);

  std::vector<std::vector<double>> rows;
  rows.reserve(result.size());
  for (std::size_t k = 0; k < result.size(); ++k) {
    std::vector<std::size_t> idx = unflatten(k, result.axes());
    std::vector<double> row;
    for (std::size_t a = 0; a < idx.size(); ++a)
      row.push_back(result.axes()[a].values[idx[a]]);
    row.push_back(result.values()[k]);
    rows.push_back(std::move(row));
  }
  write_table_csv(path, header, rows, precision, integral);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::string field;
    if (first) {
      while (std::getline(fields, field, ',')) table.columns.push_back(field);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(fields, field, ',')) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size())
        throw std::runtime_error("bad numeric field '" + field + "' in " + path.string());
      row.push_back(v);
    }
    if (row.size() != table.columns.size())
      throw std::runtime_error("ragged csv row in " + path.string());
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw std::runtime_error("empty csv: " + path.string());
  return table;
}

namespace {

constexpr double kW = 800.0, kH = 520.0;
constexpr double kLeft = 70.0, kRight = 30.0, kTop = 46.0, kBottom = 52.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num_label(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

std::string coord(double v) { return format_fixed(v, 2); }

void axes_frame(std::ostream& out, double xmin, double xmax, double ymin,
                double ymax, const std::string& xlabel, const std::string& ylabel) {
  const double plot_w = kW - kLeft - kRight, plot_h = kH - kTop - kBottom;
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double f = static_cast<double>(i) / ticks;
    const double px = kLeft + f * plot_w;
    const double py = kTop + plot_h - f * plot_h;
    out << "<line x1=\"" << coord(px) << "\" y1=\"" << kTop + plot_h << "\" x2=\""
        << coord(px) << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << coord(px) << "\" y=\"" << kTop + plot_h + 20
        << "\" font-size=\"11\" text-anchor=\"middle\">"
        << num_label(xmin + f * (xmax - xmin)) << "</text>\n"
        << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << coord(py) << "\" x2=\"" << kLeft
        << "\" y2=\"" << coord(py) << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << coord(py + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">"
        << num_label(ymin + f * (ymax - ymin)) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kH - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n"
      << "<text x=\"16\" y=\"" << kTop + plot_h / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kTop + plot_h / 2 << ")\">" << ylabel << "</text>\n";
}

/// Two-stop blue->yellow ramp for heatmap cells.
std::string heat_color(double v) {
  const double f = std::clamp(v, 0.0, 1.0);
  const int r = static_cast<int>(20 + 235 * f);
  const int g = static_cast<int>(40 + 200 * f);
  const int b = static_cast<int>(120 - 90 * f);
  std::ostringstream ss;
  ss << "rgb(" << r << ',' << g << ',' << b << ")";
  return ss.str();
}

}  // namespace

void write_svg(const SweepResult& result, const std::filesystem::path& path,
               const std::string& title) {
  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    out << "<text x=\"" << kW / 2
        << "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">" << title
        << "</text>\n";

  const auto& axes = result.axes();
  const double plot_w = kW - kLeft - kRight, plot_h = kH - kTop - kBottom;
  const bool family = axes.size() == 2 && axes[0].values.size() <= 8;
  const bool grid2d = axes.size() == 2 && !family;

  if (grid2d) {
    const auto& rows = axes[0].values;
    const auto& cols = axes[1].values;
    const double cw = plot_w / static_cast<double>(cols.size());
    const double ch = plot_h / static_cast<double>(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const double px = kLeft + static_cast<double>(j) * cw;
        const double py = kTop + plot_h - static_cast<double>(i + 1) * ch;
        out << "<rect x=\"" << coord(px) << "\" y=\"" << coord(py) << "\" width=\""
            << coord(cw + 0.5) << "\" height=\"" << coord(ch + 0.5) << "\" fill=\""
            << heat_color(result.at(i, j)) << "\"/>\n";
      }
    axes_frame(out, cols.front(), cols.back(), rows.front(), rows.back(),
               axes[1].name, axes[0].name);
  } else {
    const SweepAxis& xaxis = axes.back();
    const double xmin = *std::min_element(xaxis.values.begin(), xaxis.values.end());
    const double xmax = *std::max_element(xaxis.values.begin(), xaxis.values.end());
    const double span = xmax > xmin ? xmax - xmin : 1.0;
    const std::size_t series = family ? axes[0].values.size() : 1;
    const std::size_t count = xaxis.values.size();
    for (std::size_t s = 0; s < series; ++s) {
      out << "<polyline fill=\"none\" stroke=\"" << kPalette[s % 8]
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < count; ++i) {
        const double v = family ? result.at(s, i) : result.at(i);
        const double px = kLeft + (xaxis.values[i] - xmin) / span * plot_w;
        const double py = kTop + plot_h - v * plot_h;
        out << coord(px) << ',' << coord(py) << ' ';
      }
      out << "\"/>\n";
      if (family) {
        const double ly = kTop + 16 + 16 * static_cast<double>(s);
        out << "<line x1=\"" << kLeft + plot_w - 120 << "\" y1=\"" << ly - 4
            << "\" x2=\"" << kLeft + plot_w - 96 << "\" y2=\"" << ly - 4
            << "\" stroke=\"" << kPalette[s % 8] << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kLeft + plot_w - 90 << "\" y=\"" << ly
            << "\" font-size=\"12\">" << axes[0].name << '='
            << num_label(axes[0].values[s]) << "</text>\n";
      }
    }
    axes_frame(out, xmin, xmax, 0.0, 1.0, xaxis.name, "concurrence");
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace cds
