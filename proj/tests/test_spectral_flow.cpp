#include "support.hpp"

#include "ebp/generators.hpp"
#include "ebp/spectral_flow.hpp"

#include <algorithm>
#include <map>

using namespace ebp;
using namespace testing;

TEST_CASE("twist tracks are straight lines of slope -1/2") {
  const std::vector<double> z = uniform_loop_grid(32);
  const EigenTracks t =
      track_eigenvalues([](double b) { return shooting_eigenvalues(beta_twist(b), -4, 4); }, z, -4, 4);
  std::map<int, std::vector<std::pair<double, double>>> tracks;
  for (size_t i = 0; i < t.z.size(); ++i)
    for (size_t k = 0; k < t.values[i].size(); ++k) tracks[t.track_id[i][k]].push_back({t.z[i], t.values[i][k]});
  for (const auto& [id, pts] : tracks)
    for (size_t j = 1; j < pts.size(); ++j) {
      const double slope = (pts[j].second - pts[j - 1].second) / (pts[j].first - pts[j - 1].first);
      CHECK(slope == doctest::Approx(-0.5).epsilon(1e-8));
    }
}

TEST_CASE("synthetic flows") {
  const std::vector<double> z = uniform_loop_grid(64);
  auto flow = [&](const SpectrumFn& f) { return spectral_flow(track_eigenvalues(f, z, -4, 4)).flow; };
  CHECK(flow([](double) { return std::vector<double>{-1.0, 0.5}; }) == 0);
  CHECK(flow([](double x) { return std::vector<double>{std::sin(x)}; }) == 0);
  CHECK(flow([](double x) { return std::vector<double>{x - kPi}; }) == 1);
  CHECK(flow([](double x) { return std::vector<double>{kPi / 2 - x / 2, 3 * kPi / 2 - x / 2}; }) == -1);
  CHECK_THROWS_AS(flow([](double) { return std::vector<double>{1e-7}; }), Error);
}

TEST_CASE("near-degenerate crossing is resolved by refinement") {
  // Two tracks pass within 1e-3 of each other; coarse steps would swap them.
  auto f = [](double x) {
    const double a = x - kPi, d = 1e-3;
    std::vector<double> v{-std::sqrt(a * a + d * d) + 0.5, std::sqrt(a * a + d * d) + 0.5, 2.0 * a / kPi - 0.2};
    std::sort(v.begin(), v.end());
    return v;
  };
  const EigenTracks coarse = track_eigenvalues(f, uniform_loop_grid(16), -4, 4);
  const EigenTracks fine = track_eigenvalues(f, uniform_loop_grid(64), -4, 4);
  CHECK(spectral_flow(coarse).flow == spectral_flow(fine).flow);
}

TEST_CASE("twist loop flows under both engines") {
  const std::vector<double> z = uniform_loop_grid(64);
  const auto twist = interval_flow([](double b) { return beta_twist(b); }, z, -4, 4, 64);
  CHECK(twist.flow == -1);
  CHECK(twist.agreement);
  CHECK(shooting_flow([](double) { return beta_twist(1.0); }, z, -4, 4).flow == 0);
  CHECK(shooting_flow([](double b) { return beta_twist(2 * b); }, z, -4, 4).flow == -2);
  CHECK(shooting_flow([](double b) { return beta_twist_rotated(b); }, z, -4, 4).flow == -1);
}

TEST_CASE("definite cylinder family has no flow") {
  CylinderOptions opt;
  opt.nz = 128;
  for (int s : {1, -1}) {
    const SpectralFlowReport r = verify_index_zero_definite(definite_dirac_loop(s), opt);
    CHECK(r.flow == 0);
    CHECK(r.margin > 0.0);
  }
  CylinderLoop flat;
  flat.f_modes = [](double) { return std::vector<std::pair<int, CMatrix>>{{0, CMatrix(I1 * CMatrix::Identity(2, 2))}}; };
  CHECK(verify_index_zero_definite(flat, opt).flow == 0);
  CHECK_THROWS_AS(verify_index_zero_definite(rotating_dirac_loop(1), opt), Error);
}

TEST_CASE("Dirac flip on winding families") {
  CylinderOptions opt;
  opt.nz = 128;
  for (int m : {1, -1}) {
    const DiracFlipReport r = verify_dirac_flip(rotating_dirac_loop(m), opt);
    CHECK(r.equal);
    CHECK(r.sf == -m);
    CHECK(r.w_minus == r.sf);
    CHECK(r.w_plus == r.sf);
  }
}

TEST_CASE("difference theorem") {
  CylinderOptions opt;
  opt.nz = 128;
  const DifferenceReport zero = verify_difference_theorem(rotating_dirac_loop(0), opt);
  CHECK(zero.lhs == 0);
  CHECK(zero.rhs == 0);
  Rng rng(79);
  for (int m : {-1, 2}) {
    const DifferenceReport d = verify_difference_theorem(random_special_loop(rng, m), opt);
    CHECK(d.equal);
    CHECK(d.lhs == -2 * m);
  }
}

TEST_CASE("N and its complement on the twist differ by a constant shift") {
  // N1 and N1^perp give spectra pi k - beta / 2 and pi k + pi / 2 - beta / 2; both flows are -1.
  const std::vector<double> z = uniform_loop_grid(64);
  const int a = shooting_flow([](double b) { return beta_twist(b); }, z, -4, 4).flow;
  const int b = shooting_flow(
                    [](double beta) {
                      IntervalModel m = beta_twist(beta);
                      m.N1 = orthogonal_complement(m.N1);
                      return m;
                    },
                    z, -4, 4)
                    .flow;
  CHECK(a == -1);
  CHECK(b == -1);
  CHECK(a - b == 0);
}

TEST_CASE("gluing invariance") {
  const GluingReport g =
      verify_gluing_invariance([](double b) { return beta_twist_rotated(b); }, {0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(g.ok);
  CHECK(g.flow_tau == 0);
  CHECK(g.flow_beta_tau0 == g.flow_beta_alone);
  CHECK(g.flow_beta_tau1 == g.flow_beta_alone);
  CHECK(g.kernels_lagrangian);
  CHECK(g.spectrum_mismatch <= 1e-6);
}

TEST_CASE("truncation check") {
  CylinderOptions opt;
  opt.K = 8;
  opt.nz = 128;
  CHECK(cylinder_flow(rotating_dirac_loop(1), opt).flow == -1);
  opt.K = 1;
  CHECK_THROWS_AS(cylinder_flow(rotating_dirac_loop(1), opt), Error);
}

TEST_CASE("far-end phase must be imaginary") {
  CylinderOptions opt;
  opt.nz = 64;
  CHECK_THROWS_AS(cylinder_flow_at(rotating_dirac_loop(1, 1.0, 0.3, cplx(1.0, 0.0)), opt), Error);
  CHECK_THROWS_AS(cylinder_phase_operator(rotating_dirac_loop(1, 1.0, 0.3, cplx(0.6, 0.8)), 0.0, 0.0, 4), Error);
}
