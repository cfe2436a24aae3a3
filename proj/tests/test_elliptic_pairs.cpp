#include "support.hpp"

#include "ebp/elliptic_pairs.hpp"
#include "ebp/generators.hpp"

using namespace ebp;
using namespace testing;

namespace {
const CMatrix kSigma = diag({1, -1});
const CMatrix kTau = mat(2, 2, {0, I1, -I1, 0});
}  // namespace

TEST_CASE("standard pair") {
  const EllipticPair p = make_elliptic_pair(kSigma, kTau);
  CHECK((p.rho - mat(2, 2, {0, I1, I1, 0})).norm() < 1e-14);
  CHECK(same_subspace(p.L_plus, vec({1, 1})));
  CHECK(same_subspace(p.L_minus, vec({1, -1})));
  CHECK(p.margin == doctest::Approx(1.0));
  auto [Lp, Lm] = stable_split(p);
  CHECK(gap_distance(Lp, p.L_plus) < 1e-12);
  CHECK(gap_distance(Lm, p.L_minus) < 1e-12);
}

TEST_CASE("non-elliptic and scaled pairs") {
  CHECK_THROWS_AS(make_elliptic_pair(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)), Error);
  try {
    make_elliptic_pair(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotElliptic);
  }
  const EllipticPair p = make_elliptic_pair(kSigma, 2.0 * kTau);
  CHECK(p.margin == doctest::Approx(2.0));
  Eigen::ComplexEigenSolver<CMatrix> es(p.rho);
  for (int i = 0; i < 2; ++i) CHECK(std::abs(std::abs(es.eigenvalues()(i).imag()) - 2.0) < 1e-12);
}

TEST_CASE("alternative pair") {
  const EllipticPair p = make_elliptic_pair(mat(2, 2, {0, 1, 1, 0}), mat(2, 2, {0, -I1, I1, 0}));
  CHECK((p.rho - diag({I1, -I1})).norm() < 1e-14);
  CHECK(same_subspace(p.L_plus, vec({1, 0})));
  CHECK(same_subspace(p.L_minus, vec({0, 1})));
}

TEST_CASE("half-line decay") {
  const EllipticPair p = make_elliptic_pair(kSigma, kTau);
  const DecayReport d = ode_decay_check(p, vec({1, -1}) / std::sqrt(2.0), 5.0);
  CHECK(d.decaying);
  CHECK(d.end_norm == doctest::Approx(std::exp(-5.0)).epsilon(1e-10));
  const DecayReport g = ode_decay_check(p, vec({1, 1}) / std::sqrt(2.0), 5.0);
  CHECK_FALSE(g.decaying);
  CHECK(g.end_norm == doctest::Approx(std::exp(5.0)).epsilon(1e-10));
  CHECK_THROWS_AS(ode_decay_check(p, vec({0, 0}), 5.0), Error);
}

TEST_CASE("positive path endpoints") {
  const EllipticPair p = make_elliptic_pair(kSigma, kTau);
  CHECK(same_subspace(positive_path(p, 0.0), vec({1, 0})));
  CHECK(same_subspace(positive_path(p, kPi), vec({0, 1})));
  CHECK(same_subspace(positive_path(p, kPi / 2), vec({1, -I1})));
}

TEST_CASE("plus path formula") {
  const CMatrix one = CMatrix::Identity(1, 1);
  CHECK(same_subspace(plus_path_formula(one, kPi / 2), vec({1, -I1})));
  CHECK(same_subspace(plus_path_formula(one, 0.0), vec({1, 0})));
  CHECK(same_subspace(plus_path_formula(one, kPi), vec({0, 1})));
  // (1 - z) / (1 + z) at z = e^{i pi / 2} is -i.
  const cplx z = std::polar(1.0, kPi / 2);
  CHECK(std::abs((1.0 - z) / (1.0 + z) + I1) < 1e-15);
}

TEST_CASE("property: stable split dimensions and decay oracle") {
  Rng rng(41);
  for (int t = 0; t < 200; ++t) {
    const EllipticPair p = random_elliptic_pair(rng, 1 + t % 4);
    CHECK(p.L_plus.dim() == p.L_minus.dim());
    CHECK(p.L_plus.dim() + p.L_minus.dim() == p.dim());
    CHECK(p.margin > 0.0);
    if (t % 10 != 0) continue;
    for (int j = 0; j < p.L_minus.dim(); ++j) CHECK(ode_decay_check(p, p.L_minus.frame().col(j)).decaying);
    for (int j = 0; j < p.L_plus.dim(); ++j) CHECK_FALSE(ode_decay_check(p, p.L_plus.frame().col(j)).decaying);
  }
}

TEST_CASE("property: positive path matches the formula on normalized pairs") {
  Rng rng(43);
  for (int t = 0; t < 20; ++t) {
    const CMatrix phi = random_unitary(rng, 1 + t % 3);
    const EllipticPair p = normalized_pair(phi);
    for (int j = 0; j < 64; ++j) {
      const double theta = kPi * j / 63.0;
      CHECK(gap_distance(positive_path(p, theta), plus_path_formula(phi, theta)) <= 1e-8);
    }
  }
}

TEST_CASE("property: positive path is continuous in theta") {
  Rng rng(47);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const EllipticPair p = random_elliptic_pair(rng, 2);
    const int n = 256;
    for (int j = 0; j < n; ++j) {
      const double a = kPi * j / n, b = kPi * (j + 1) / n;
      worst = std::max(worst, gap_distance(positive_path(p, a), positive_path(p, b)) / (b - a));
    }
  }
  MESSAGE("empirical Lipschitz constant " << worst);
  CHECK(worst < 1e3);
}
