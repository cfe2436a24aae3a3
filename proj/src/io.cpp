#include "ebp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ebp {

Json to_json(const CMatrix& M) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) data.push_back({M(i, j).real(), M(i, j).imag()});
  return Json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", data}};
}

CMatrix cmatrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw Error(ErrorKind::InvalidInput, "CMatrix needs rows, cols and data");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer() || !j["data"].is_array())
    throw Error(ErrorKind::InvalidInput, "CMatrix field types");
  const long rows = j["rows"].get<long>(), cols = j["cols"].get<long>();
  if (rows < 0 || cols < 0 || static_cast<long>(j["data"].size()) != rows * cols)
    throw Error(ErrorKind::InvalidInput, "CMatrix data length does not match rows * cols");
  CMatrix M(rows, cols);
  for (long k = 0; k < rows * cols; ++k) {
    const Json& e = j["data"][k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw Error(ErrorKind::InvalidInput, "CMatrix entries are [re, im] pairs");
    M(k / cols, k % cols) = cplx(e[0].get<double>(), e[1].get<double>());
  }
  if (!M.allFinite()) throw Error(ErrorKind::InvalidInput, "CMatrix has non-finite entries");
  return M;
}

Json to_json(const Subspace& S) { return to_json(S.frame()); }

Subspace subspace_from_json(const Json& j, int ambient) {
  const CMatrix cols = cmatrix_from_json(j);
  if (cols.rows() != ambient) throw Error(ErrorKind::AmbientMismatch, "subspace frame has the wrong row count");
  return subspace_from_columns(cols, {}, ambient);
}

Json to_json(const IntervalModel& m) {
  return Json{{"sigma", to_json(m.Sigma)}, {"T", to_json(m.T)}, {"length", m.length},
              {"N0", to_json(m.N0)},       {"N1", to_json(m.N1)}};
}

IntervalModel interval_model_from_json(const Json& j) {
  for (const char* key : {"sigma", "T", "length", "N0", "N1"})
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::InvalidInput, std::string("model needs ") + key);
  if (!j["length"].is_number()) throw Error(ErrorKind::InvalidInput, "length must be a number");
  IntervalModel m;
  m.Sigma = cmatrix_from_json(j["sigma"]);
  m.T = cmatrix_from_json(j["T"]);
  m.length = j["length"].get<double>();
  m.N0 = subspace_from_json(j["N0"], static_cast<int>(m.Sigma.rows()));
  m.N1 = subspace_from_json(j["N1"], static_cast<int>(m.Sigma.rows()));
  validate_model(m);
  return m;
}

Json to_json(const SampledSymbolFamily& fam) {
  Json samples = Json::array();
  for (const SymbolSample& s : fam.samples) {
    Json e{{"y", s.y}, {"u", s.u}, {"sigma", to_json(s.sigma)}, {"tau", to_json(s.tau)}};
    if (s.N) e["N"] = to_json(*s.N);
    samples.push_back(e);
  }
  return Json{{"boundary_grid", fam.boundary_grid}, {"samples", samples}};
}

SampledSymbolFamily sampled_family_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("boundary_grid") || !j.contains("samples") || !j["boundary_grid"].is_array() ||
      !j["samples"].is_array())
    throw Error(ErrorKind::InvalidInput, "symbol family needs boundary_grid and samples arrays");
  SampledSymbolFamily fam;
  for (const Json& y : j["boundary_grid"]) {
    if (!y.is_number()) throw Error(ErrorKind::InvalidInput, "boundary_grid entries must be numbers");
    fam.boundary_grid.push_back(y.get<double>());
  }
  if (j["samples"].size() != 2 * fam.boundary_grid.size())
    throw Error(ErrorKind::InvalidInput, "expected two samples (u = +1, -1) per grid point");
  for (size_t k = 0; k < j["samples"].size(); ++k) {
    const Json& e = j["samples"][k];
    for (const char* key : {"y", "u", "sigma", "tau"})
      if (!e.is_object() || !e.contains(key)) throw Error(ErrorKind::InvalidInput, std::string("sample needs ") + key);
    SymbolSample s;
    s.y = e["y"].get<double>();
    s.u = e["u"].get<int>();
    if (s.u != (k % 2 == 0 ? 1 : -1)) throw Error(ErrorKind::InvalidInput, "samples must alternate u = +1, -1");
    s.sigma = cmatrix_from_json(e["sigma"]);
    s.tau = cmatrix_from_json(e["tau"]);
    if (s.sigma.rows() != s.sigma.cols() || s.tau.rows() != s.sigma.rows() || s.tau.cols() != s.sigma.cols())
      throw Error(ErrorKind::AmbientMismatch, "sigma and tau must be square of equal size");
    if (e.contains("N")) s.N = subspace_from_json(e["N"], static_cast<int>(s.sigma.rows()));
    fam.samples.push_back(std::move(s));
  }
  for (size_t iy = 0; iy < fam.boundary_grid.size(); ++iy)
    if ((fam.samples[2 * iy].sigma - fam.samples[2 * iy + 1].sigma).norm() > 1e-12)
      throw Error(ErrorKind::InvalidInput, "sigma must not depend on u");
  return fam;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::InvalidInput, "write failed for " + path);
}

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // no negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace ebp
