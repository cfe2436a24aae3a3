#include "ebp/acceptance.hpp"

#include "ebp/bott.hpp"
#include "ebp/deformations.hpp"
#include "ebp/generators.hpp"
#include "ebp/spectral_flow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>

namespace ebp {
namespace {

constexpr double kPi = 3.141592653589793;

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

void normal_form_pipeline(std::uint64_t seed, CriterionResult& r) {
  Rng rng(seed + 1);
  double min_ell = 1e300, min_trans = 1e300;
  int lagrangian_fail = 0, normalized = 0;
  const int count = 200;
  for (int i = 0; i < count; ++i) {
    const int p = 1 + i % 4;
    auto [pair, N] = random_pair_with_condition(rng, p);
    auto [nf, trace] = normalize(pair, N);
    min_ell = std::min(min_ell, trace.min_ellipticity());
    min_trans = std::min(min_trans, trace.min_transversality());
    if (!trace.all_lagrangian()) ++lagrangian_fail;
    if (is_normalized(nf.pair, nf.N)) ++normalized;
  }
  r.pass = min_ell > 1e-8 && min_trans > 1e-8 && lagrangian_fail == 0 && normalized == count;
  r.detail = format("pairs=%d min_ellipticity=%.3e min_transversality=%.3e non_lagrangian=%d normalized=%d",
                    count, min_ell, min_trans, lagrangian_fail, normalized);
}

void path_identity(std::uint64_t seed, CriterionResult& r) {
  Rng rng(seed + 2);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const CMatrix phi = random_unitary(rng, 1 + i % 4);
    const EllipticPair pair = normalized_pair(phi);
    for (int j = 0; j < 64; ++j) {
      const double theta = kPi * j / 63.0;
      worst = std::max(worst, gap_distance(positive_path(pair, theta), plus_path_formula(phi, theta)));
    }
  }
  r.pass = worst <= 1e-8;
  r.detail = format("pairs=50 grid=64 max_gap=%.3e", worst);
}

void bott_identity(std::uint64_t seed, CriterionResult& r) {
  Rng rng(seed + 3);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const CMatrix phi = random_phi_pm_i(rng, 2 + i % 4);
    const Subspace A = phi_plus_space(phi);
    for (int a = 0; a <= 16; ++a) {
      const double eta = 2 * kPi * a / 16.0;
      const CMatrix w = -I1 * omega_path(phi, eta);
      for (int b = 0; b <= 16; ++b) {
        const double theta = kPi * b / 16.0;
        worst = std::max(worst, gap_distance(bott_lambda(w, theta), bott_gamma_prime(A, eta, theta)));
      }
    }
  }
  r.pass = worst <= 1e-10;
  r.detail = format("phis=50 grid=17x17 max_gap=%.3e", worst);
}

double nearest_error(const RVector& values, double target) {
  double best = 1e300;
  for (Eigen::Index i = 0; i < values.size(); ++i) best = std::min(best, std::abs(values(i) - target));
  return best;
}

void interval_closed_form(std::uint64_t, CriterionResult& r) {
  double shoot_err = 0.0, min_order = 1e300, herm = 0.0;
  bool counts_ok = true;
  for (double beta : {0.0, kPi / 2, 1.0, kPi}) {
    const IntervalModel model = beta_twist(beta);
    const double lo = -10.0, hi = 10.0;
    const std::vector<double> ev = shooting_eigenvalues(model, lo, hi);
    std::vector<double> exact;
    for (int k = -5; k <= 5; ++k) {
      const double l = kPi * k - beta / 2;
      if (l > lo && l < hi) exact.push_back(l);
    }
    if (ev.size() != exact.size()) {
      counts_ok = false;
      continue;
    }
    for (size_t k = 0; k < ev.size(); ++k) shoot_err = std::max(shoot_err, std::abs(ev[k] - exact[k]));

    const double target = kPi - beta / 2;
    double errs[3];
    int idx = 0;
    for (int n : {100, 200, 400}) {
      const Compression c = compress_AGamma(interval_assemble_sbp(model, n), false);
      herm = std::max(herm, hermitian_defect_of(c));
      errs[idx++] = nearest_error(compression_eigenvalues(c), target);
    }
    min_order = std::min({min_order, std::log2(errs[0] / errs[1]), std::log2(errs[1] / errs[2])});
  }
  r.pass = counts_ok && shoot_err <= 1e-10 && min_order >= 1.95 && herm <= 1e-12;
  r.detail = format("shooting_error=%.3e min_order=%.4f hermitian_defect=%.3e counts=%s", shoot_err, min_order,
                    herm, counts_ok ? "ok" : "mismatch");
}

void flow_integer(std::uint64_t, CriterionResult& r) {
  const std::vector<double> grid = uniform_loop_grid(64);
  const auto twist = interval_flow([](double b) { return beta_twist(b); }, grid, -4.0, 4.0, 64);
  const auto constant = interval_flow([](double) { return beta_twist(0.7); }, grid, -4.0, 4.0, 64);
  const auto doubled = interval_flow([](double b) { return beta_twist(2 * b); }, grid, -4.0, 4.0, 64);
  r.pass = twist.flow == -1 && twist.agreement && constant.flow == 0 && constant.agreement &&
           doubled.flow == -2 && doubled.agreement;
  r.detail = format("twist=%d constant=%d doubled=%d agreement=%s", twist.flow, constant.flow, doubled.flow,
                    twist.agreement && constant.agreement && doubled.agreement ? "yes" : "no");
}

void duality_reduction(std::uint64_t, CriterionResult& r) {
  bool ok = true;
  double max_gap = 0.0, max_red = 0.0, max_lag = 0.0;
  for (double beta : {0.0, kPi / 2, kPi}) {
    const AbstractBVP bvp = interval_assemble_sbp(beta_twist(beta), 100);
    const DualityReport d = check_duality(bvp);
    ok = ok && d.ok;
    max_gap = std::max(max_gap, d.gap);
    max_red = std::max(max_red, reduction_gap(compress_AGamma(bvp)));
    max_lag = std::max(max_lag, check_lagrange_identity(bvp));
  }
  r.pass = ok && max_gap <= 1e-8 && max_red <= 1e-8 && max_lag <= 1e-12;
  r.detail = format("duality=%s max_gap=%.3e reduction_gap=%.3e lagrange_residual=%.3e", ok ? "ok" : "fail",
                    max_gap, max_red, max_lag);
}

void standard_operator_check(std::uint64_t, CriterionResult& r) {
  StandardParams sp;
  sp.K = 8;
  sp.n = 64;
  sp.cutoff = standard_cutoff;
  const StandardOperatorAssembly a = standard_operator(sp);
  const double m0 = garding_margin(a, 0.0);
  const double t = std::max(0.0, 1.0 - m0);
  const double margin = garding_margin(a, t);
  const double slope = garding_margin(a, t + 1.0) - margin;
  const double smin = psa_bsa_sigma_min(a, t);
  r.pass = margin >= 1.0 - 1e-12 && std::abs(slope - 1.0) <= 1e-9 && smin > 0.0;
  r.detail = format("m0=%.6f t=%.6f margin=%.12f slope_error=%.3e sigma_min=%.6f", m0, t, margin,
                    std::abs(slope - 1.0), smin);
}

void gluing(std::uint64_t, CriterionResult& r) {
  const GluingReport g =
      verify_gluing_invariance([](double b) { return beta_twist_rotated(b); }, {0.0, 0.25, 0.5, 0.75, 1.0});
  r.pass = g.ok && g.spectrum_mismatch <= 1e-6 && g.kernels_lagrangian && g.flow_tau == 0;
  r.detail = format("flow_tau=%d flow_beta=%d/%d/%d spectrum_mismatch=%.3e lagrangian=%s", g.flow_tau,
                    g.flow_beta_tau0, g.flow_beta_tau1, g.flow_beta_alone, g.spectrum_mismatch,
                    g.kernels_lagrangian ? "yes" : "no");
}

void difference_theorem(std::uint64_t seed, CriterionResult& r) {
  Rng rng(seed + 9);
  CylinderOptions opt;
  opt.K = 16;
  opt.nz = 128;
  int agree = 0;
  const int count = 50;
  std::string first_failure;
  for (int i = 0; i < count; ++i) {
    const int m = i % 5 - 2;
    const DifferenceReport d = verify_difference_theorem(random_special_loop(rng, m), opt);
    if (d.equal)
      ++agree;
    else if (first_failure.empty())
      first_failure = format(" first_failure=(m=%d lhs=%d rhs=%d)", m, d.lhs, d.rhs);
  }
  r.pass = agree == count;
  r.detail = format("families=%d agree=%d", count, agree) + first_failure;
}

void dirac_flip(std::uint64_t, CriterionResult& r) {
  CylinderOptions opt;
  opt.K = 16;
  opt.n = 64;
  opt.nz = 256;
  bool ok = true;
  std::string detail;
  for (int m : {-2, -1, 1, 2}) {
    const DiracFlipReport d = verify_dirac_flip(rotating_dirac_loop(m), opt);
    ok = ok && d.equal;
    detail += format("m=%d:(%d,%d,%d) ", m, d.sf, d.w_minus, d.w_plus);
  }
  for (int s : {1, -1}) {
    const SpectralFlowReport z = verify_index_zero_definite(definite_dirac_loop(s), opt);
    ok = ok && z.flow == 0;
    detail += format("definite%+d:%d ", s, z.flow);
  }
  r.pass = ok;
  detail.pop_back();
  r.detail = detail;
}

}  // namespace

std::vector<Criterion> acceptance_suite() {
  return {{1, "normal-form pipeline", 60.0, normal_form_pipeline},
          {2, "positive path formula", 0.0, path_identity},
          {3, "Bott path identity", 0.0, bott_identity},
          {4, "interval spectrum closed form", 0.0, interval_closed_form},
          {5, "spectral flow integer", 30.0, flow_integer},
          {6, "duality and reduction", 0.0, duality_reduction},
          {7, "standard operator", 0.0, standard_operator_check},
          {8, "gluing invariance", 0.0, gluing},
          {9, "difference theorem", 300.0, difference_theorem},
          {10, "Dirac flip", 600.0, dirac_flip}};
}

CriterionResult run_criterion(const Criterion& c, std::uint64_t seed) {
  CriterionResult r;
  r.id = c.id;
  r.name = c.name;
  r.time_limit = c.time_limit;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.check(seed, r);
  } catch (const Error& e) {
    r.pass = false;
    r.detail = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.time_limit > 0.0 && r.seconds > r.time_limit) {
    r.pass = false;
    r.detail += format(" time_limit_exceeded=%.0fs", r.time_limit);
  }
  return r;
}

}  // namespace ebp
