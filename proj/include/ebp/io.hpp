#pragma once

#include "ebp/bvp_models.hpp"
#include "ebp/elliptic_pairs.hpp"
#include "ebp/symbols.hpp"

#include <json.hpp>

#include <string>

namespace ebp {

using Json = nlohmann::json;

// {"rows", "cols", "data": [[re, im], ...]} in row-major order.
Json to_json(const CMatrix& M);
CMatrix cmatrix_from_json(const Json& j);

// A subspace is stored as a CMatrix whose columns span it.
Json to_json(const Subspace& S);
Subspace subspace_from_json(const Json& j, int ambient);

// {"sigma", "T", "length", "N0", "N1"}.
Json to_json(const IntervalModel& m);
IntervalModel interval_model_from_json(const Json& j);

// {"boundary_grid": [y, ...], "samples": [{"y", "u", "sigma", "tau", "N"?}, ...]}, index 2 * iy + (u < 0).
Json to_json(const SampledSymbolFamily& fam);
SampledSymbolFamily sampled_family_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Fixed-format number for CSV output.
std::string format_number(double x);

}  // namespace ebp
