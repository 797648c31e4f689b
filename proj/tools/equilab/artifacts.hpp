#pragma once

#include <complex>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace equilab::cli {

using nlohmann::json;

/// Shortest round-trip text for a double ("nan" / "inf" spelled out).
std::string num(double v);

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  std::string csv() const;
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Two-column plot data; an empty block starts a new gnuplot index.
struct PlotData {
  std::vector<std::vector<std::pair<double, double>>> blocks;
  std::string text() const;
};

struct Artifacts {
  Table results{{}};
  json fit = json::object();
  PlotData plot;
};

/// Writes results.csv, fit.json and plotdata.dat through temp files renamed into place.
void write_artifacts(const std::filesystem::path& dir, const Artifacts& a);

/// Temp file in the same directory, then rename.
void write_atomic(const std::filesystem::path& path, const std::string& text);

json complex_json(std::complex<double> z);

}  // namespace equilab::cli
