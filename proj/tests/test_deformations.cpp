#include "support.hpp"

#include "ebp/deformations.hpp"
#include "ebp/generators.hpp"

using namespace ebp;
using namespace testing;

namespace {
const CMatrix kSigma = diag({1, -1});
const CMatrix kTau = mat(2, 2, {0, I1, -I1, 0});

EllipticPair pair_with_lines(const CVector& plus, const CVector& minus) {
  return pair_from_split(kSigma, span({plus}), span({minus}));
}
}  // namespace

TEST_CASE("unitarize") {
  const EllipticPair p = make_elliptic_pair(diag({2, -2}), 2.0 * kTau);
  const Subspace N = span({vec({1, 1})});
  auto [half, Nh] = deform_unitarize(p, N, 0.5);
  CHECK((half.sigma - kSigma).norm() < 1e-12);
  CHECK((half.tau - kTau).norm() < 1e-12);
  CHECK(gap_distance(Nh, N) < 1e-12);
  auto [zero, N0] = deform_unitarize(p, N, 0.0);
  CHECK((zero.sigma - p.sigma).norm() < 1e-12);
  CHECK((zero.tau - p.tau).norm() < 1e-12);
  CHECK(gap_distance(N0, N) < 1e-12);
}

TEST_CASE("rho to plus or minus i") {
  // rho = 2 sigma tau has eigenvalues +-2i on the same eigenlines as sigma tau.
  const CMatrix rho0 = kSigma * kTau;
  const EllipticPair p = pair_from_rho(kSigma, 2.0 * rho0);
  CHECK((deform_rho_to_pm_i(p, 1.0).rho - rho0).norm() < 1e-12);
  CHECK((deform_rho_to_pm_i(p, 0.0).rho - p.rho).norm() < 1e-12);
  CHECK((deform_rho_to_pm_i(p, 0.5).rho - 1.5 * rho0).norm() < 1e-12);
}

TEST_CASE("align L minus") {
  // N = diagonal, L_minus = graph of i, L_plus = graph of -i.
  const EllipticPair p = pair_with_lines(vec({1, -I1}), vec({1, I1}));
  const Subspace N = span({vec({1, 1})});
  const EllipticPair end = deform_align_Lminus(p, N, 1.0);
  CHECK(same_subspace(end.L_minus, vec({1, -1}), 1e-10));
  const EllipticPair start = deform_align_Lminus(p, N, 0.0);
  CHECK(gap_distance(start.L_minus, p.L_minus) < 1e-12);
  CHECK(gap_distance(start.L_plus, p.L_plus) < 1e-12);
  double worst = 1.0;
  for (int j = 0; j <= 32; ++j)
    worst = std::min(worst, transversality_margin(N, deform_align_Lminus(p, N, j / 32.0).L_minus));
  CHECK(worst > 0.1);
  // L_minus = N has relative isometry 1.
  CHECK_THROWS_AS(deform_align_Lminus(pair_with_lines(vec({1, -1}), vec({1, 1})), N, 0.5), Error);
}

TEST_CASE("L plus to N") {
  const EllipticPair p = pair_with_lines(vec({1, I1}), vec({1, -1}));
  const Subspace N = span({vec({1, 1})});
  CHECK(gap_distance(deform_Lplus_to_N(p, N, 1.0).L_plus, N) < 1e-12);
  CHECK(gap_distance(deform_Lplus_to_N(p, N, 0.0).L_plus, p.L_plus) < 1e-12);
  // The midpoint is the graph of delta / 2 over N along the orthogonal complement.
  const Subspace Nperp = span({vec({1, -1})});
  const CMatrix delta = transverse_delta(p.form(), Nperp, N, p.L_plus);
  CHECK(gap_distance(deform_Lplus_to_N(p, N, 0.5).L_plus, delta_graph(N, 0.5 * delta)) < 1e-12);
}

TEST_CASE("normalize fixed point and failure") {
  const EllipticPair p = make_elliptic_pair(kSigma, kTau);
  const Subspace N = span({vec({1, 1})});
  CHECK(is_normalized(p, N));
  auto [nf, trace] = normalize(p, N);
  CHECK(is_normalized(nf.pair, nf.N));
  CHECK((nf.pair.tau - kTau).norm() < 1e-10);
  for (const auto& stage : trace.stages)
    for (const auto& s : stage.samples) CHECK((s.pair.tau - kTau).norm() < 1e-10);
  CHECK_FALSE(is_normalized(p, span({vec({1, I1})})));
  CHECK_THROWS_AS(make_elliptic_pair(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)), Error);
}

TEST_CASE("graded normalized") {
  const EllipticPair p = make_elliptic_pair(mat(2, 2, {0, 1, 1, 0}), mat(2, 2, {0, -I1, I1, 0}));
  const Split split{span({vec({1, 0})}), span({vec({0, 1})})};
  CHECK(is_graded_normalized(p, span({vec({1, 0})}), split));
  CHECK_FALSE(is_graded_normalized(p, span({vec({0, 1})}), split));
}

TEST_CASE("special normalization") {
  const cplx w = std::polar(1.0, kPi / 3);
  const EllipticPair p = pair_with_lines(vec({1, w}), vec({1, -w}));
  const Subspace N = span({vec({1, 1})});
  CHECK(std::abs(special_relative_isometry(p, N)(0, 0) - w) < 1e-12);
  auto [q, Nq] = normalize_special(p, N);
  CHECK(gap_distance(Nq, N) < 1e-12);
  CHECK(std::abs(special_relative_isometry(q, Nq)(0, 0) - I1) < 1e-10);
  CHECK(((q.sigma * q.tau + q.tau * q.sigma)).norm() < 1e-10);

  CMatrix S = CMatrix::Identity(4, 4);
  S.bottomRightCorner(2, 2) *= -1;
  const Split E = sigma_split(S);
  const CMatrix fixed = diag({I1, -I1});
  const EllipticPair f = pair_from_split(S, graph_of(E, fixed), graph_of(E, -fixed));
  auto [f2, Nf] = normalize_special(f, graph_of(E, CMatrix::Identity(2, 2)));
  CHECK((f2.tau - f.tau).norm() < 1e-10);

  CHECK_THROWS_AS(normalize_special(pair_with_lines(vec({1, 1}), vec({1, -1})), N), Error);
}

TEST_CASE("property: normal form pipeline on random pairs") {
  Rng rng(53);
  for (int t = 0; t < 40; ++t) {
    auto [pair, N] = random_pair_with_condition(rng, 1 + t % 4);
    auto [nf, trace] = normalize(pair, N, 17);
    CHECK(is_normalized(nf.pair, nf.N));
    CHECK(trace.min_ellipticity() > 1e-8);
    CHECK(trace.min_transversality() > 1e-8);
    CHECK(trace.all_lagrangian());
    CHECK(trace.max_lagrangian_residual() < 1e-8);
  }
}

TEST_CASE("property: the rho deformation keeps the stable split") {
  Rng rng(59);
  for (int t = 0; t < 30; ++t) {
    const EllipticPair p = random_elliptic_pair(rng, 1 + t % 3);
    for (double beta : {0.25, 0.5, 1.0}) {
      const EllipticPair q = deform_rho_to_pm_i(p, beta);
      CHECK(gap_distance(q.L_plus, p.L_plus) < 1e-9);
      CHECK(gap_distance(q.L_minus, p.L_minus) < 1e-9);
      CHECK(hermitian_defect(q.tau) < 1e-10);
    }
  }
}
