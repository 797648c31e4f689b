#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "equilab/measures.hpp"

namespace equilab::json_io {

using nlohmann::json;

/// Throws ValidationError if `j` is not an object or has keys outside `allowed`.
void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where);

/// Numbers may be given as JSON numbers or decimal strings.
double read_number(const json& j, const std::string& where);
Eigen::VectorXd read_vector(const json& j, const std::string& where);
Eigen::MatrixXd read_matrix(const json& j, const std::string& where);
std::vector<double> read_reals(const json& j, const std::string& where);

json write_vector(const Eigen::VectorXd& v);
json write_matrix(const Eigen::MatrixXd& m);

/// Measure schema: {"type": "...", payload...}; see README for field names.
measures::Measure measure_from_json(const json& j);
json measure_to_json(const measures::Measure& m);

}  // namespace equilab::json_io
