#pragma once

#include <cstddef>
#include <vector>

namespace equilab {

std::vector<double> linspace(double a, double b, std::size_t n);
std::vector<double> logspace(double a, double b, std::size_t n);

}  // namespace equilab
