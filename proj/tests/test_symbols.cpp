#include "support.hpp"

#include "ebp/generators.hpp"
#include "ebp/symbols.hpp"

#include <vector>

using namespace ebp;
using namespace testing;

namespace {

std::vector<double> theta_grid(int n) {
  std::vector<double> t;
  for (int j = 0; j <= n; ++j) t.push_back(kPi * j / n);
  return t;
}

// Constant sigma = diag(1, -1) family with N_u(y) = span(1, n_u(y)).
SampledSymbolFamily line_family(int grid, const std::function<cplx(double, int)>& n) {
  SampledSymbolFamily fam;
  const CMatrix sigma = diag({1, -1});
  const CMatrix tau = mat(2, 2, {0, I1, -I1, 0});
  for (int iy = 0; iy < grid; ++iy) {
    const double y = 2 * kPi * iy / grid;
    fam.boundary_grid.push_back(y);
    for (int u : {1, -1}) fam.samples.push_back(SymbolSample{y, u, sigma, tau, span({vec({1, n(y, u)})})});
  }
  return fam;
}

DiracData constant_dirac(const CMatrix& f, const CMatrix& tau_bar, int grid) {
  std::vector<double> ys;
  std::vector<CMatrix> fs, ts;
  for (int iy = 0; iy < grid; ++iy) {
    ys.push_back(2 * kPi * iy / grid);
    fs.push_back(f);
    ts.push_back(tau_bar);
    ts.push_back(tau_bar);
  }
  return dirac_like(ys, fs, ts);
}

}  // namespace

TEST_CASE("elementary symbol boundary values and flags") {
  const SampledSymbolFamily fam = elementary_symbol(1, 0, 1.0, 1.0, 1.0, standard_cutoff);
  for (const auto& s : fam.samples) {
    CHECK((s.sigma - mat(2, 2, {0, 1, 1, 0})).norm() < 1e-15);
    CHECK((s.tau - mat(2, 2, {0, I1, -I1, 0})).norm() < 1e-15);
    CHECK(same_subspace(*s.N, vec({0, 1})));
  }
  CHECK(check_order_one(fam, theta_grid(32)));
  const ConditionReport r = check_conditions(fam);
  CHECK(r.self_adjoint);
  CHECK(r.elliptic);
  CHECK(r.bundle_like);
  CHECK(r.anti_commuting);
  CHECK_FALSE(r.special);
  CHECK(epsilon_winding(fam, 1) == 0);
  CHECK(epsilon_winding(fam, -1) == 0);
}

TEST_CASE("elementary symbol with both field types") {
  const SampledSymbolFamily fam = elementary_symbol(2, 1, 1.5, 0.5, 1.0, standard_cutoff, 8);
  CHECK(check_order_one(fam, theta_grid(16)));
  const ConditionReport r = check_conditions(fam);
  CHECK(r.self_adjoint);
  CHECK(r.elliptic);
  CHECK(r.bundle_like);
  CHECK_THROWS_AS(elementary_symbol(1, 0, -1.0, 1.0, 1.0, standard_cutoff), Error);
}

TEST_CASE("order one detects perturbations") {
  SampledSymbolFamily fam = elementary_symbol(1, 0, 1.0, 1.0, 1.0, standard_cutoff, 8);
  const auto base = fam.half_circle;
  for (double eps : {0.1, 1e-12}) {
    fam.half_circle = [base, eps](const SymbolSample& s, double theta) {
      const double c = std::sin(theta);
      return CMatrix(base(s, theta) + eps * c * c * c * CMatrix::Identity(s.sigma.rows(), s.sigma.cols()));
    };
    CHECK(check_order_one(fam, theta_grid(16)) == (eps < 1e-9));
  }
}

TEST_CASE("ellipticity fails on the decaying space") {
  SampledSymbolFamily fam = line_family(8, [](double, int) { return cplx(1.0); });
  CHECK(check_conditions(fam).elliptic);
  fam = line_family(8, [](double, int) { return cplx(-1.0); });
  const ConditionReport r = check_conditions(fam);
  CHECK(r.self_adjoint);
  CHECK_FALSE(r.elliptic);
  fam.samples[0].N.reset();
  CHECK_THROWS_AS(check_conditions(fam), Error);
}

TEST_CASE("obstruction winding") {
  CHECK(obstruction_winding(line_family(16, [](double, int) { return cplx(1.0); })) == 0);
  for (int m : {-2, 1, 3}) {
    const auto fam = line_family(32, [m](double y, int u) { return u > 0 ? std::polar(1.0, m * y) : cplx(1.0); });
    CHECK(obstruction_winding(fam) == m);
  }
  // Bundle-like families do not depend on u.
  const auto fam = line_family(32, [](double y, int) { return std::polar(1.0, 2 * y); });
  CHECK(obstruction_winding(fam) == 0);
}

TEST_CASE("boundary symbol upsilon") {
  // sigma = diag(1, -1): N = graph 1, L_plus = graph i, so psi^{-1} phi = i.
  SampledSymbolFamily fam = line_family(4, [](double, int) { return cplx(1.0); });
  for (auto& s : fam.samples) s.tau = pair_from_split(s.sigma, span({vec({1, I1})}), span({vec({1, -I1})})).tau;
  for (const CMatrix& u : boundary_symbol_upsilon(fam)) CHECK((u - CMatrix::Identity(1, 1)).norm() < 1e-12);

  CMatrix S = CMatrix::Identity(4, 4);
  S.bottomRightCorner(2, 2) *= -1;
  const Split E = sigma_split(S);
  const CMatrix w = diag({I1, -I1});
  SampledSymbolFamily two;
  for (int iy = 0; iy < 4; ++iy) {
    two.boundary_grid.push_back(iy * kPi / 2);
    const CMatrix tau = pair_from_split(S, graph_of(E, w), graph_of(E, -w)).tau;
    for (int u : {1, -1}) two.samples.push_back({iy * kPi / 2, u, S, tau, graph_of(E, CMatrix::Identity(2, 2))});
  }
  for (const CMatrix& u : boundary_symbol_upsilon(two)) {
    CHECK((u * u - CMatrix::Identity(2, 2)).norm() < 1e-12);
    CHECK(std::abs(u.trace()) < 1e-12);
    CHECK((u * w - w * u).norm() < 1e-12);
  }

  SampledSymbolFamily bad = line_family(4, [](double, int) { return cplx(1.0); });
  for (auto& s : bad.samples) s.tau = pair_from_split(s.sigma, span({vec({1, 1})}), span({vec({1, -1})})).tau;
  CHECK_THROWS_AS(boundary_symbol_upsilon(bad), Error);
}

TEST_CASE("Dirac-like data") {
  const DiracData d = constant_dirac(mat(1, 1, {I1}), mat(1, 1, {I1}), 4);
  CHECK(same_subspace(d.N[0], vec({1, I1})));
  CHECK(std::abs(d.psi[0](0, 0) + I1) < 1e-14);
  CHECK(std::abs(cayley(mat(1, 1, {I1}))(0, 0) + I1) < 1e-14);
  CHECK_THROWS_AS(constant_dirac(mat(1, 1, {0}), mat(1, 1, {I1}), 4), Error);
  CHECK_THROWS_AS(constant_dirac(mat(1, 1, {1}), mat(1, 1, {I1}), 4), Error);
  // Non-commuting tau_bar.
  CHECK_THROWS_AS(constant_dirac(diag({I1, -I1}), mat(2, 2, {0, 1, -1, 0}), 4), Error);
}

TEST_CASE("Dirac-like graded family is special") {
  const double a = 0.7, b = -1.3;
  const DiracData d = constant_dirac(diag({I1, -I1}), diag({a * I1, b * I1}), 8);
  const ConditionReport r = check_conditions(dirac_family(d));
  CHECK(r.self_adjoint);
  CHECK(r.elliptic);
  CHECK(r.special);
  auto [plus, minus] = tau_pm_split(d);
  CHECK(plus.leakage < 1e-14);
  CHECK(minus.leakage < 1e-14);
  CHECK(std::abs(plus.values[0](0, 0) - a * I1) < 1e-14);
  CHECK(std::abs(minus.values[0](0, 0) - b * I1) < 1e-14);

  const DiracData pos = constant_dirac(CMatrix(I1 * CMatrix::Identity(2, 2)), CMatrix(I1 * CMatrix::Identity(2, 2)), 4);
  CHECK(pos.L_minus[0].dim() == 0);
  CHECK(tau_pm_split(pos).second.values[0].size() == 0);
}

TEST_CASE("property: restricted symbols are equivariant") {
  Rng rng(61);
  for (int t = 0; t < 20; ++t) {
    const CMatrix U = random_unitary(rng, 2);
    const CMatrix f = diag({I1, -I1}), tb = diag({0.4 * I1, 1.1 * I1});
    const DiracData d0 = constant_dirac(f, tb, 4);
    const DiracData d1 = constant_dirac(U * f * U.adjoint(), U * tb * U.adjoint(), 4);
    auto [p0, m0] = tau_pm_split(d0);
    auto [p1, m1] = tau_pm_split(d1);
    CHECK(std::abs(p0.values[0](0, 0) - p1.values[0](0, 0)) < 1e-12);
    CHECK(std::abs(m0.values[0](0, 0) - m1.values[0](0, 0)) < 1e-12);
    CHECK(gap_distance(d1.L_plus[0], subspace_from_columns(U * d0.L_plus[0].frame())) < 1e-12);
  }
}
