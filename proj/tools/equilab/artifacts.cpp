#include "artifacts.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace equilab::cli {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

void Table::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("Table::add: row width mismatch");
  rows_.push_back(std::move(row));
}

std::string Table::csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::string PlotData::text() const {
  std::string out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (b) out += "\n\n";
    for (const auto& [x, y] : blocks[b]) out += num(x) + ' ' + num(y) + '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << text;
    f.flush();
    if (!f) {
      f.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

void write_artifacts(const std::filesystem::path& dir, const Artifacts& a) {
  std::filesystem::create_directories(dir);
  // Render everything first so a formatting failure leaves nothing behind.
  const std::string csv = a.results.csv();
  const std::string fit = a.fit.dump(2) + "\n";
  const std::string plot = a.plot.text();
  write_atomic(dir / "results.csv", csv);
  write_atomic(dir / "fit.json", fit);
  write_atomic(dir / "plotdata.dat", plot);
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

}  // namespace equilab::cli
