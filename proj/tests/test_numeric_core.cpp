#include "support.hpp"

#include "ebp/generators.hpp"

using namespace ebp;
using namespace testing;

TEST_CASE("frames from columns") {
  const Subspace a = subspace_from_columns(mat(2, 2, {1, 0, 0, 1}));
  CHECK(a.dim() == 2);
  CHECK((a.projector() - CMatrix::Identity(2, 2)).norm() < 1e-14);

  const Subspace b = subspace_from_columns(mat(2, 2, {1, 2, 1, 2}));
  CHECK(b.dim() == 1);
  CHECK(same_subspace(b, vec({1, 1})));

  const Subspace c = span({vec({1, I1})});
  CHECK(c.dim() == 1);
  CHECK(std::abs(std::abs(c.frame()(0, 0)) - 1 / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(c.frame()(1, 0) / c.frame()(0, 0) - I1) < 1e-14);
}

TEST_CASE("gap distance on lines") {
  const Subspace e1 = span({vec({1, 0})}), e2 = span({vec({0, 1})}), d = span({vec({1, 1})});
  CHECK(gap_distance(e1, e1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(gap_distance(e1, e2) == doctest::Approx(1.0));
  CHECK(gap_distance(e1, d) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(gap_distance(e1, span({vec({1, 0, 0})})), Error);
}

TEST_CASE("invariant subspaces") {
  auto up = EigenSelector::im_positive();
  CHECK(same_subspace(invariant_subspace(mat(2, 2, {0, I1, I1, 0}), up), vec({1, 1})));
  CHECK(same_subspace(invariant_subspace(diag({I1, -I1}), up), vec({1, 0})));
  CHECK(invariant_subspace(mat(2, 2, {I1, 1, 0, I1}), up).dim() == 2);
  CHECK_THROWS_AS(invariant_subspace(diag({1.0, I1}), up), Error);
}

TEST_CASE("ordered Schur reconstructs and leads with the selection") {
  Rng rng(11);
  const CMatrix M = random_complex(rng, 6, 6);
  const OrderedSchur s = ordered_schur(M, [](cplx z) { return z.imag() > 0; });
  CHECK((s.Q * s.T * s.Q.adjoint() - M).norm() < 1e-12 * M.norm());
  CHECK((s.Q.adjoint() * s.Q - CMatrix::Identity(6, 6)).norm() < 1e-12);
  for (int i = 0; i < 6; ++i) {
    CHECK((i < s.selected) == (s.T(i, i).imag() > 0));
    for (int j = 0; j < i; ++j) CHECK(std::abs(s.T(i, j)) < 1e-12);
  }
}

TEST_CASE("matrix exponential against closed forms") {
  const CMatrix D = diag({0.3, -1.2 * I1, 2.0});
  const CMatrix E = expm(D);
  CHECK(std::abs(E(0, 0) - std::exp(0.3)) < 1e-13);
  CHECK(std::abs(E(1, 1) - std::exp(-1.2 * I1)) < 1e-13);
  const CMatrix N = mat(2, 2, {0, 5, 0, 0});
  CHECK((expm(N) - mat(2, 2, {1, 5, 0, 1})).norm() < 1e-13);
  const CMatrix R = expm(mat(2, 2, {0, -1, 1, 0}) * 0.7);
  CHECK((R - mat(2, 2, {std::cos(0.7), -std::sin(0.7), std::sin(0.7), std::cos(0.7)})).norm() < 1e-13);
}

TEST_CASE("orthogonal complement and sum") {
  Rng rng(5);
  const Subspace S = subspace_from_columns(random_complex(rng, 5, 2));
  const Subspace C = orthogonal_complement(S);
  CHECK(C.dim() == 3);
  CHECK((S.frame().adjoint() * C.frame()).norm() < 1e-12);
  CHECK(subspace_sum(S, C).dim() == 5);
  CHECK(subspace_sum(S, S).dim() == 2);
}

TEST_CASE("null space and oblique projector") {
  const CMatrix A = mat(2, 3, {1, 1, 0, 0, 0, 1});
  const CMatrix K = null_space(A);
  CHECK(K.cols() == 1);
  CHECK((A * K).norm() < 1e-13);
  const Subspace U = span({vec({1, 0})}), V = span({vec({1, 1})});
  const CMatrix P = oblique_projector(U, V);
  CHECK((P * P - P).norm() < 1e-13);
  CHECK((P * vec({1, 1})).norm() < 1e-13);
  CHECK((P * vec({1, 0}) - vec({1, 0})).norm() < 1e-13);
}

TEST_CASE("normal eigendecomposition of a unitary") {
  Rng rng(3);
  const CMatrix U = random_unitary(rng, 5);
  CVector w;
  CMatrix V;
  normal_eigen(U, w, V);
  CHECK((V * w.asDiagonal() * V.adjoint() - U).norm() < 1e-12);
  for (Eigen::Index i = 0; i < w.size(); ++i) CHECK(std::abs(std::abs(w(i)) - 1.0) < 1e-12);
}

TEST_CASE("property: gap distance is a symmetric metric bounded by one") {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 5, k = 1 + t % (n - 1 > 0 ? n - 1 : 1);
    const Subspace A = subspace_from_columns(random_complex(rng, n, k));
    const Subspace B = subspace_from_columns(random_complex(rng, n, k));
    const Subspace C = subspace_from_columns(random_complex(rng, n, k));
    const double ab = gap_distance(A, B);
    CHECK(ab == doctest::Approx(gap_distance(B, A)).epsilon(1e-12));
    CHECK(ab <= 1.0 + 1e-12);
    CHECK(ab == doctest::Approx(projector_distance(A.frame(), B.frame())).epsilon(1e-10));
    CHECK(gap_distance(A, C) <= ab + gap_distance(B, C) + 1e-12);
  }
}

TEST_CASE("property: hermitian function and singular values") {
  Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    const CMatrix X = random_complex(rng, 4, 4);
    const CMatrix H = X + X.adjoint();
    CHECK(hermitian_defect(H) < 1e-14);
    const CMatrix S = hermitian_function(H, [](double x) { return x * x; });
    CHECK((S - H * H).norm() < 1e-11 * (1 + H.squaredNorm()));
    Eigen::JacobiSVD<CMatrix> svd(X);
    CHECK(smallest_singular_value(X) == doctest::Approx(svd.singularValues()(3)).epsilon(1e-12));
    CHECK(largest_singular_value(X) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
  }
}
