#include "ebp/cli.hpp"

#include "ebp/acceptance.hpp"
#include "ebp/bott.hpp"
#include "ebp/deformations.hpp"
#include "ebp/generators.hpp"
#include "ebp/io.hpp"
#include "ebp/spectral_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace ebp {
namespace {

constexpr double kPi = 3.141592653589793;

struct Outcome {
  bool pass = false;
  Json report;
  std::string summary;
  std::string side_path;  // optional second artifact
  std::string side_text;
};

Error bad_input(const std::string& what) { return Error(ErrorKind::InvalidInput, what); }

Json load_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw bad_input(cfg.command + " requires --input");
  return read_json_file(cfg.input);
}

template <typename T>
T param(const Json& params, const char* key, T fallback) {
  if (!params.is_object() || !params.contains(key)) return fallback;
  try {
    return params[key].get<T>();
  } catch (const Json::exception&) {
    throw bad_input(std::string("parameter ") + key + " has the wrong type");
  }
}

cplx complex_param(const Json& params, const char* key, cplx fallback) {
  if (!params.is_object() || !params.contains(key)) return fallback;
  const Json& v = params[key];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw bad_input(std::string("parameter ") + key + " must be [re, im]");
  return {v[0].get<double>(), v[1].get<double>()};
}

std::pair<double, double> resolve_window(const RunConfig& cfg, const Json& doc, std::pair<double, double> fallback) {
  std::pair<double, double> w = fallback;
  if (cfg.window) {
    w = *cfg.window;
  } else if (doc.is_object() && doc.contains("window")) {
    const Json& v = doc["window"];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw bad_input("window must be [lo, hi]");
    w = {v[0].get<double>(), v[1].get<double>()};
  }
  if (!(w.first < w.second)) throw bad_input("window must satisfy lo < hi");
  return w;
}

int require_grid(int value, int minimum, const char* what) {
  if (value < minimum)
    throw Error(ErrorKind::GridTooCoarse, std::string(what) + " must be at least " + std::to_string(minimum));
  return value;
}

Tolerances tolerances(const RunConfig& cfg) {
  if (!(cfg.tol_ellipticity > 0.0)) throw bad_input("--tol-ellipticity must be positive");
  Tolerances tol;
  tol.ellipticity_margin = cfg.tol_ellipticity;
  return tol;
}

std::string num(double x) { return format_number(x); }

// check

Outcome run_check(const RunConfig& cfg) {
  const Json doc = load_input(cfg);
  const SampledSymbolFamily fam = sampled_family_from_json(doc);
  const Tolerances tol = tolerances(cfg);
  const ConditionReport rep = check_conditions(fam, tol);
  const std::map<std::string, bool> flags{{"self_adjoint", rep.self_adjoint},
                                          {"elliptic", rep.elliptic},
                                          {"bundle_like", rep.bundle_like},
                                          {"anti_commuting", rep.anti_commuting},
                                          {"special", rep.special}};
  std::vector<std::string> required{"self_adjoint", "elliptic"};
  if (doc.contains("require")) required = param<std::vector<std::string>>(doc, "require", required);
  Outcome o;
  o.pass = true;
  std::string failed;
  for (const std::string& name : required) {
    auto it = flags.find(name);
    if (it == flags.end()) throw bad_input("unknown flag " + name);
    if (!it->second) {
      o.pass = false;
      failed += " " + name;
    }
  }
  Json winding = nullptr;
  try {
    winding = obstruction_winding(fam, tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotGraph) throw;
  }
  const ConditionMargins& m = rep.margins;
  o.report = {{"self_adjoint", rep.self_adjoint},
              {"elliptic", rep.elliptic},
              {"bundle_like", rep.bundle_like},
              {"anti_commuting", rep.anti_commuting},
              {"special", rep.special},
              {"margins",
               {{"lagrangian_residual", m.lagrangian_residual},
                {"ellipticity", m.ellipticity},
                {"bundle_defect", m.bundle_defect},
                {"anticommutator", m.anticommutator},
                {"special", m.special}}},
              {"obstruction_winding", winding},
              {"require", required},
              {"pass", o.pass}};
  std::ostringstream s;
  for (const auto& [name, value] : flags) s << name << ": " << (value ? "true" : "false") << "\n";
  s << "obstruction_winding: " << (winding.is_null() ? std::string("undefined") : winding.dump()) << "\n";
  if (!o.pass) s << "failed invariant:" << failed << "\n";
  o.summary = s.str();
  return o;
}

// normalize

Outcome run_normalize(const RunConfig& cfg) {
  const Json doc = load_input(cfg);
  for (const char* key : {"sigma", "tau", "N"})
    if (!doc.contains(key)) throw bad_input(std::string("pair document needs ") + key);
  const Tolerances tol = tolerances(cfg);
  const CMatrix sigma = cmatrix_from_json(doc["sigma"]);
  const CMatrix tau = cmatrix_from_json(doc["tau"]);
  if (sigma.rows() != sigma.cols() || tau.rows() != sigma.rows() || tau.cols() != sigma.cols())
    throw Error(ErrorKind::AmbientMismatch, "sigma and tau must be square of equal size");
  const EllipticPair pair = make_elliptic_pair(sigma, tau, tol);
  const Subspace N = subspace_from_json(doc["N"], pair.dim());
  const int samples = require_grid(cfg.grid.value_or(33), 2, "--grid");
  auto [nf, trace] = normalize(pair, N, samples, tol);

  const bool normalized = is_normalized(nf.pair, nf.N);
  const double min_ell = trace.min_ellipticity(), min_trans = trace.min_transversality();
  const double max_res = trace.max_lagrangian_residual();
  Outcome o;
  o.pass = normalized && trace.all_lagrangian() && min_ell > tol.ellipticity_margin &&
           min_trans > tol.ellipticity_margin;

  Json stages = Json::array();
  for (const DeformationStage& st : trace.stages) {
    Json rows = Json::array();
    for (const StageSample& s : st.samples)
      rows.push_back({{"param", s.param},
                      {"ellipticity", s.ellipticity},
                      {"lagrangian_residual", s.lagrangian_residual},
                      {"transversality", s.transversality},
                      {"lagrangian", s.lagrangian}});
    stages.push_back({{"label", st.label}, {"samples", rows}});
  }
  o.report = {{"normal_form",
               {{"sigma", to_json(nf.pair.sigma)},
                {"tau", to_json(nf.pair.tau)},
                {"phi", to_json(nf.phi)},
                {"N", to_json(nf.N)},
                {"split_plus", to_json(nf.split.plus)},
                {"split_minus", to_json(nf.split.minus)}}},
              {"trace", {{"stages", stages}}},
              {"min_ellipticity", min_ell},
              {"min_transversality", min_trans},
              {"max_lagrangian_residual", max_res},
              {"is_normalized", normalized},
              {"pass", o.pass}};
  std::ostringstream s;
  s << "stages: " << trace.stages.size() << "\n"
    << "min_ellipticity: " << num(min_ell) << "\n"
    << "min_transversality: " << num(min_trans) << "\n"
    << "max_lagrangian_residual: " << num(max_res) << "\n"
    << "is_normalized: " << (normalized ? "true" : "false") << "\n";
  if (!o.pass) s << "failed invariant: normal form margins\n";
  o.summary = s.str();
  return o;
}

// flow

std::string tracks_path(const std::string& report_path) {
  const std::string ext = ".json";
  if (report_path.size() > ext.size() && report_path.compare(report_path.size() - ext.size(), ext.size(), ext) == 0)
    return report_path.substr(0, report_path.size() - ext.size()) + ".tracks.csv";
  return report_path + ".tracks.csv";
}

std::string tracks_csv(const EigenTracks& t) {
  std::ostringstream s;
  s << "z,track_id,lambda\n";
  for (size_t i = 0; i < t.z.size(); ++i)
    for (size_t k = 0; k < t.values[i].size(); ++k)
      s << num(t.z[i]) << "," << t.track_id[i][k] << "," << num(t.values[i][k]) << "\n";
  return s.str();
}

Json crossings_json(const SpectralFlowReport& r) {
  Json c = Json::array();
  for (const Crossing& x : r.crossings) c.push_back({{"z", x.z}, {"direction", x.direction}});
  return c;
}

IntervalFamily interval_family(const std::string& kind, const Json& doc, const Json& params) {
  if (kind == "beta-twist") {
    const int winds = param(params, "winds", 1);
    const double length = param(params, "length", 1.0);
    const bool rotated = param(params, "rotated", false);
    if (!(length > 0.0)) throw Error(ErrorKind::BadParameters, "length must be positive");
    if (rotated) return [winds, length](double b) { return beta_twist_rotated(winds * b, length); };
    return [winds, length](double b) { return beta_twist(winds * b, length); };
  }
  if (kind == "constant") {
    if (!doc.contains("model")) throw bad_input("constant loop needs a model");
    const IntervalModel model = interval_model_from_json(doc["model"]);
    return [model](double) { return model; };
  }
  throw bad_input("unknown loop kind " + kind);
}

Outcome run_flow(const RunConfig& cfg) {
  const Json doc = load_input(cfg);
  if (!doc.contains("loop") || !doc["loop"].contains("kind")) throw bad_input("flow config needs loop.kind");
  const std::string kind = param<std::string>(doc["loop"], "kind", "");
  const Json params = doc["loop"].value("params", Json::object());
  const Json expected = doc.value("expected_flow", Json());
  Outcome o;
  SpectralFlowReport rep;
  int grid = 0;
  std::pair<double, double> window{0.0, 0.0};
  std::string tracks;

  if (kind == "dirac-cylinder") {
    CylinderOptions opt;
    opt.K = require_grid(cfg.modes, 2, "--modes");
    opt.n = require_grid(param(params, "n", 64), 8, "n");
    grid = opt.nz = require_grid(cfg.grid.value_or(param(doc, "grid", 256)), 16, "grid");
    const CylinderLoop loop = rotating_dirac_loop(param(params, "m", 1), param(params, "M", 1.0),
                                                  param(params, "e", 0.3), complex_param(params, "g", I1));
    rep = cylinder_flow(loop, opt, param(params, "complement", false));
    std::ostringstream s;
    s << "z,track_id,lambda\n";
    for (size_t i = 0; i < rep.crossings.size(); ++i) s << num(rep.crossings[i].z) << "," << i << ",0\n";
    tracks = s.str();
  } else {
    const IntervalFamily fam = interval_family(kind, doc, params);
    grid = require_grid(cfg.grid.value_or(param(doc, "grid", 64)), 4, "grid");
    window = resolve_window(cfg, doc, {-4.0, 4.0});
    const int n = require_grid(param(params, "n", 64), 8, "n");
    const std::vector<double> z = uniform_loop_grid(grid);
    if (cfg.engine == "shooting")
      rep = shooting_flow(fam, z, window.first, window.second);
    else if (cfg.engine == "compression")
      rep = compression_flow(fam, z, n);
    else if (cfg.engine == "both")
      rep = interval_flow(fam, z, window.first, window.second, n);
    else
      throw bad_input("unknown engine " + cfg.engine);
    SpectrumFn spectrum;
    const double lo = window.first, hi = window.second;
    if (cfg.engine == "compression") {
      spectrum = [&fam, n, lo, hi](double b) {
        const RVector e = compression_spectrum(fam(b), n);
        std::vector<double> v;
        for (Eigen::Index i = 0; i < e.size(); ++i)
          if (e(i) > lo && e(i) < hi) v.push_back(e(i));
        return v;
      };
    } else {
      spectrum = [&fam, lo, hi](double b) { return shooting_eigenvalues(fam(b), lo, hi); };
    }
    tracks = tracks_csv(track_eigenvalues(spectrum, z, lo, hi));
  }

  o.pass = rep.agreement && (expected.is_null() || (expected.is_number_integer() && expected.get<int>() == rep.flow));
  o.report = {{"kind", kind},          {"flow", rep.flow},   {"engines", rep.engines},
              {"agreement", rep.agreement}, {"crossings", crossings_json(rep)}, {"grid", grid}};
  if (kind != "dirac-cylinder") o.report["window"] = {window.first, window.second};
  if (!expected.is_null()) o.report["expected_flow"] = expected;
  o.report["pass"] = o.pass;
  std::ostringstream s;
  s << "flow: " << rep.flow << "\n"
    << "engines:";
  for (const std::string& e : rep.engines) s << " " << e;
  s << "\nagreement: " << (rep.agreement ? "true" : "false") << "\n"
    << "crossings: " << rep.crossings.size() << "\n";
  if (!rep.agreement) s << "failed invariant: engines disagree\n";
  if (!expected.is_null() && rep.flow != expected.get<int>()) s << "failed invariant: expected flow " << expected.dump() << "\n";
  o.summary = s.str();
  if (!cfg.output.empty()) {
    o.side_path = tracks_path(cfg.output);
    o.side_text = tracks;
  }
  return o;
}

// glue

Outcome run_glue(const RunConfig& cfg) {
  const Json doc = load_input(cfg);
  const IntervalModel model = interval_model_from_json(doc.contains("model") ? doc["model"] : doc);
  const auto [lo, hi] = resolve_window(cfg, doc, {-10.0, 10.0});
  std::vector<std::pair<std::string, std::vector<double>>> spectra;
  spectra.emplace_back("circle", circle_eigenvalues(glue_double(model), lo, hi));
  spectra.emplace_back("interval", shooting_eigenvalues(fold_double(model), lo, hi));
  bool partner = true;
  try {
    const IntervalModel p = standard_partner(model);
    spectra.emplace_back("partner", shooting_eigenvalues(p, lo, hi));
    spectra.emplace_back("glued_tau0", shooting_eigenvalues(glue_pair(model, p, 0.0), lo, hi));
    spectra.emplace_back("glued_tau1", shooting_eigenvalues(glue_pair(model, p, 1.0), lo, hi));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::IncompatibleModels) throw;
    partner = false;
  }
  const auto& a = spectra[0].second;
  const auto& b = spectra[1].second;
  double mismatch = std::numeric_limits<double>::infinity();
  if (a.size() == b.size()) {
    mismatch = 0.0;
    for (size_t k = 0; k < a.size(); ++k) mismatch = std::max(mismatch, std::abs(a[k] - b[k]));
  }
  Outcome o;
  o.pass = mismatch <= 1e-6;
  std::ostringstream csv;
  csv << "source,index,lambda\n";
  for (const auto& [source, values] : spectra)
    for (size_t k = 0; k < values.size(); ++k) csv << source << "," << k << "," << num(values[k]) << "\n";
  o.report = csv.str();
  std::ostringstream s;
  s << "circle eigenvalues: " << a.size() << "\n"
    << "interval eigenvalues: " << b.size() << "\n"
    << "max mismatch: " << (a.size() == b.size() ? num(mismatch) : std::string("count differs")) << "\n"
    << "partner: " << (partner ? "yes" : "no") << "\n";
  if (!o.pass) s << "failed invariant: circle and interval spectra differ\n";
  o.summary = s.str();
  return o;
}

// bott

Outcome run_bott(const RunConfig& cfg) {
  CMatrix phi;
  if (!cfg.input.empty()) {
    const Json doc = load_input(cfg);
    if (!doc.contains("phi")) throw bad_input("bott input needs phi");
    phi = cmatrix_from_json(doc["phi"]);
  } else {
    Rng rng(cfg.seed);
    phi = random_phi_pm_i(rng, 2);
  }
  const int g = require_grid(cfg.grid.value_or(17), 2, "--grid");
  const Subspace A = phi_plus_space(phi);
  double worst = 0.0;
  Json frames = Json::array();
  for (int a = 0; a < g; ++a) {
    const double eta = 2 * kPi * a / (g - 1);
    const CMatrix w = -I1 * omega_path(phi, eta);
    for (int b = 0; b < g; ++b) {
      const double theta = kPi * b / (g - 1);
      const Subspace gp = bott_gamma_prime(A, eta, theta);
      worst = std::max(worst, gap_distance(bott_lambda(w, theta), gp));
      frames.push_back({{"eta", eta}, {"theta", theta}, {"frame", to_json(gp)}});
    }
  }
  Outcome o;
  o.pass = worst <= 1e-10;
  o.report = {{"phi", to_json(phi)}, {"grid", g}, {"frames", frames}, {"max_gap", worst}, {"pass", o.pass}};
  std::ostringstream s;
  s << "grid: " << g << "x" << g << "\n"
    << "max gap: " << num(worst) << "\n";
  if (!o.pass) s << "failed invariant: Bott path identity\n";
  o.summary = s.str();
  return o;
}

// dirac-flip

Outcome run_dirac_flip(const RunConfig& cfg) {
  const Json doc = cfg.input.empty() ? Json::object() : load_input(cfg);
  CylinderOptions opt;
  opt.K = require_grid(cfg.modes, 2, "--modes");
  opt.n = require_grid(cfg.grid.value_or(64), 8, "--grid");
  opt.nz = require_grid(param(doc, "nz", 256), 16, "nz");
  const cplx g = complex_param(doc, "g", I1);
  Outcome o;
  std::ostringstream s;
  if (doc.contains("definite")) {
    const int sign = param(doc, "definite", 1);
    if (sign != 1 && sign != -1) throw Error(ErrorKind::BadParameters, "definite must be +1 or -1");
    const SpectralFlowReport r = verify_index_zero_definite(definite_dirac_loop(sign, g), opt);
    o.pass = r.flow == 0;
    o.report = {{"definite", sign}, {"sf", r.flow}, {"margin", r.margin}, {"K", opt.K}, {"pass", o.pass}};
    s << "sf: " << r.flow << "\n";
    if (!o.pass) s << "failed invariant: definite family has nonzero flow\n";
  } else {
    const int m = param(doc, "m", 1);
    const DiracFlipReport r =
        verify_dirac_flip(rotating_dirac_loop(m, param(doc, "M", 1.0), param(doc, "e", 0.3), g), opt);
    o.pass = r.equal;
    o.report = {{"m", m},         {"sf", r.sf}, {"w_minus", r.w_minus}, {"w_plus", r.w_plus},
                {"equal", r.equal}, {"K", opt.K}, {"n", opt.n},         {"pass", o.pass}};
    s << "sf: " << r.sf << "\n"
      << "w_minus: " << r.w_minus << "\n"
      << "w_plus: " << r.w_plus << "\n";
    if (!o.pass) s << "failed invariant: sf = w_minus = w_plus\n";
  }
  o.summary = s.str();
  return o;
}

// demo

Outcome run_demo(const RunConfig& cfg) {
  Outcome o;
  o.pass = true;
  Json results = Json::array();
  std::ostringstream s;
  for (const Criterion& c : acceptance_suite()) {
    const CriterionResult r = run_criterion(c, cfg.seed);
    o.pass = o.pass && r.pass;
    results.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    s << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail << "\n";
  }
  o.report = {{"seed", cfg.seed}, {"criteria", results}, {"pass", o.pass}};
  o.summary = s.str();
  return o;
}

std::string render(const Json& report) {
  if (report.is_string()) return report.get<std::string>();
  return report.dump(2) + "\n";
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Outcome o;
    if (cfg.command == "check")
      o = run_check(cfg);
    else if (cfg.command == "normalize")
      o = run_normalize(cfg);
    else if (cfg.command == "flow")
      o = run_flow(cfg);
    else if (cfg.command == "glue")
      o = run_glue(cfg);
    else if (cfg.command == "bott")
      o = run_bott(cfg);
    else if (cfg.command == "dirac-flip")
      o = run_dirac_flip(cfg);
    else if (cfg.command == "demo")
      o = run_demo(cfg);
    else
      throw bad_input("unknown command " + cfg.command);

    if (cfg.output.empty()) {
      out << render(o.report);
    } else {
      write_text_file(cfg.output, render(o.report));
      if (!o.side_path.empty()) write_text_file(o.side_path, o.side_text);
      out << o.summary;
    }
    return o.pass ? kExitOk : kExitIdentityFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::TruncationInsufficient:
      case ErrorKind::TrackingAmbiguity:
        return kExitIdentityFailure;
      default:
        return kExitInputError;
    }
  } catch (const Json::exception& e) {
    err << "error: InvalidInput: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace ebp
