#include "support.hpp"

#include "ebp/generators.hpp"
#include "ebp/pontryagin.hpp"

using namespace ebp;
using namespace testing;

TEST_CASE("indefinite form values") {
  const IndefiniteForm f = form_from_sigma(diag({1, -1}));
  CHECK(std::abs(f(vec({1, 0}), vec({1, 0})) - 1.0) < 1e-15);
  CHECK(std::abs(f(vec({0, 1}), vec({0, 1})) + 1.0) < 1e-15);
  CHECK(std::abs(f(vec({1, 0}), vec({0, 1}))) < 1e-15);
  const IndefiniteForm g = form_from_sigma(mat(2, 2, {0, 1, 1, 0}));
  CHECK(std::abs(g(vec({1, 0}), vec({0, 1})) - 1.0) < 1e-15);
  CHECK_THROWS_AS(form_from_sigma(diag({1, 0})), Error);
}

TEST_CASE("Lagrangian subspaces of diag(1, -1)") {
  const IndefiniteForm f = form_from_sigma(diag({1, -1}));
  CHECK(is_lagrangian(f, span({vec({1, 1})})));
  CHECK_FALSE(is_lagrangian(f, span({vec({1, 0})})));
  CHECK(is_lagrangian(f, span({vec({1, I1})})));
  CHECK_FALSE(is_lagrangian(f, Subspace::full(2)));
}

TEST_CASE("transversality") {
  const Subspace d = span({vec({1, 1})}), dp = span({vec({1, -1})});
  CHECK(is_transverse(d, dp));
  CHECK_FALSE(is_transverse(d, d));
  CHECK(is_transverse(d, span({vec({1, I1})})));
  CHECK(transversality_margin(d, d) < 1e-14);
}

TEST_CASE("graph maps of Lagrangians") {
  const CMatrix sigma = diag({1, -1});
  const IndefiniteForm f = form_from_sigma(sigma);
  const Split s = sigma_split(sigma);
  auto phi_of = [&](const CVector& v) {
    const LagrangianGraph g = isometry_of_lagrangian(f, s, span({v}));
    // Coordinates relative to the split frames.
    return g.phi(0, 0) * s.minus.frame()(1, 0) / s.plus.frame()(0, 0);
  };
  CHECK(std::abs(phi_of(vec({1, 1})) - 1.0) < 1e-12);
  CHECK(std::abs(phi_of(vec({1, I1})) - I1) < 1e-12);
  CHECK_THROWS_AS(isometry_of_lagrangian(f, s, span({vec({1, 0})})), Error);
}

TEST_CASE("transverse delta") {
  const IndefiniteForm f = form_from_sigma(diag({1, -1}));
  const Subspace L = span({vec({1, -1})}), M = span({vec({1, 1})}), Mn = span({vec({1, I1})});
  CHECK(transverse_delta(f, L, M, M).norm() < 1e-14);
  const CMatrix delta = transverse_delta(f, L, M, Mn);
  // (1, i) = a (1, 1) + b (1, -1) with b / a = (1 - i) / (1 + i) = -i.
  CHECK((delta * vec({1, 1}) - (-I1) * vec({1, -1})).norm() < 1e-12);
  CHECK(gap_distance(delta_graph(M, delta), Mn) < 1e-12);
  CHECK_THROWS_AS(transverse_delta(f, L, M, L), Error);
}

TEST_CASE("projector and isometry") {
  const CMatrix P1 = projector_from_isometry(mat(1, 1, {1}));
  CHECK((P1 * vec({2, 4}) - vec({3, 3})).norm() < 1e-14);
  const CMatrix P2 = projector_from_isometry(mat(1, 1, {-1}));
  CHECK((P2 * vec({2, 4}) - vec({-1, 1})).norm() < 1e-14);
  CHECK_THROWS_AS(projector_from_isometry(mat(1, 1, {2})), Error);
  Rng rng(7);
  const CMatrix Phi = random_unitary(rng, 4);
  const CMatrix P = projector_from_isometry(Phi);
  CHECK((P * P - P).norm() < 1e-12);
  CHECK((isometry_from_projector(P, 4) - Phi).norm() < 1e-10);
}

TEST_CASE("property: random Lagrangians") {
  Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    const int p = 1 + t % 4;
    const EllipticPair pair = random_elliptic_pair(rng, p);
    const IndefiniteForm f = pair.form();
    const Subspace L = random_lagrangian(rng, pair.sigma);
    CHECK(L.dim() == p);
    CHECK(lagrangian_residual(f, L) < 1e-10);
    // The form vanishes on L, so L is its own form-orthogonal complement.
    const Subspace perp = subspace_from_columns(null_space(L.frame().adjoint() * pair.sigma));
    CHECK(gap_distance(perp, L) < 1e-8);
  }
}

TEST_CASE("property: graph round trip") {
  Rng rng(37);
  for (int t = 0; t < 50; ++t) {
    const int p = 1 + t % 4;
    CMatrix S = CMatrix::Identity(2 * p, 2 * p);
    S.bottomRightCorner(p, p) *= -1;
    const Split s = sigma_split(S);
    const CMatrix phi = random_unitary(rng, p);
    const Subspace G = graph_of(s, phi);
    const LagrangianGraph back = isometry_of_lagrangian(form_from_sigma(S), s, G);
    CHECK((back.phi - phi).norm() < 1e-10);
    CHECK(gap_distance(back.graph(), G) < 1e-10);
  }
}
