#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "artifacts.hpp"
#include "config.hpp"

namespace equilab::cli {

Artifacts fourier_decay(const RunContext& ctx);
Artifacts torus_rate(const RunContext& ctx);
Artifacts ray_test(const RunContext& ctx);
Artifacts lifted_circle(const RunContext& ctx);
Artifacts hyperbolic_average(const RunContext& ctx);

/// Property suites; fit.json carries "passed" and "failed" counts.
Artifacts ode_check(const RunContext& ctx, const std::string& suite);
Artifacts lemma_check(const RunContext& ctx, const std::string& suite);

/// Collects fit.json from earlier run directories.
Artifacts report(const std::vector<std::filesystem::path>& runs);

}  // namespace equilab::cli
