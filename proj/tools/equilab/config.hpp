#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "equilab/fit.hpp"
#include "equilab/fuchsian.hpp"
#include "equilab/observables.hpp"
#include "equilab/sl2.hpp"
#include "equilab/torus.hpp"

namespace equilab::cli {

using nlohmann::json;

/// Flags and the parsed config file, shared by every subcommand.
struct RunContext {
  json config = json::object();
  std::filesystem::path config_dir = ".";
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

json load_config(const std::filesystem::path& path);

/// Keys every config may carry besides its payload.
inline constexpr const char* kCommonKeys[] = {"command", "seed", "jobs", "out"};

/// require_keys with the common keys appended.
void require_payload_keys(const json& j, std::vector<const char*> allowed, const std::string& where);

double number_or(const json& j, const char* key, double fallback, const std::string& where);
std::size_t count_or(const json& j, const char* key, std::size_t fallback, const std::string& where);
bool flag_or(const json& j, const char* key, bool fallback, const std::string& where);
std::string string_or(const json& j, const char* key, const std::string& fallback, const std::string& where);
int read_int(const json& j, const std::string& where);
torus::IVec read_ivec(const json& j, const std::string& where);
std::complex<double> read_complex(const json& j, const std::string& where);

/// Array of numbers, or {"spacing": "log"|"linear", "from", "to", "points"}.
std::vector<double> read_grid(const json& j, const std::string& where);
FitMode read_fit_mode(const json& j, const char* key, const std::string& where);

torus::TorusLattice read_lattice(const json* j, int dim, const std::string& where);
torus::DilationFamily read_dilation(const json* j, int dim, const std::string& where);
/// {"terms": [{"k", "coefficient"}], "cosines": [{"k", "amplitude", "phase"}]}.
torus::TorusObservable read_observable(const json& j, const std::string& where);

LieVector read_lie(const json& j, const std::string& where);
/// [[a, b], [c, d]] or {"iwasawa": [x, y, theta]}.
Sl2Element read_sl2(const json& j, const std::string& where);
std::shared_ptr<const fuchsian::FuchsianGroup> read_group(const json& j, const std::filesystem::path& base,
                                                          const std::string& where);
std::vector<BumpSpec> read_bumps(const json& j, const std::string& where);
/// Named observables for hyperbolic-average.
std::vector<BumpSpec> preset_bumps(const std::string& id);

}  // namespace equilab::cli
