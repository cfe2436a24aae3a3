#include "support.hpp"

#include "ebp/bott.hpp"
#include "ebp/generators.hpp"

using namespace ebp;
using namespace testing;

TEST_CASE("lambda path") {
  const CMatrix one = CMatrix::Identity(1, 1);
  CHECK(same_subspace(bott_lambda(one, 0.0), vec({1, 0})));
  CHECK(same_subspace(bott_lambda(one, kPi), vec({0, 1})));
  CHECK(same_subspace(bott_lambda(one, kPi / 2), vec({1, 1})));
}

TEST_CASE("f and f prime") {
  const Subspace all = Subspace::full(1), none = Subspace::zero(1);
  CHECK(std::abs(bott_f(all, kPi / 2)(0, 0) - I1) < 1e-15);
  CHECK(std::abs(bott_f_prime(all, kPi / 2)(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(bott_f(none, kPi / 2)(0, 0) + I1) < 1e-15);
  const Subspace e1 = span({vec({1, 0})});
  CHECK((bott_f(e1, kPi) + CMatrix::Identity(2, 2)).norm() < 1e-15);
  CHECK((bott_f(e1, 0.0) - CMatrix::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("gamma prime") {
  const Subspace all = Subspace::full(1), none = Subspace::zero(1);
  CHECK(same_subspace(bott_gamma_prime(all, kPi / 2, kPi / 2), vec({1, 1})));
  CHECK(same_subspace(bott_gamma_prime(none, 0.0, kPi / 2), vec({1, -I1})));
  Rng rng(67);
  const Subspace A = subspace_from_columns(random_complex(rng, 3, 1));
  for (double eta : {0.0, 1.0, 4.0}) {
    CMatrix top(6, 3);
    top << CMatrix::Identity(3, 3), CMatrix::Zero(3, 3);
    CHECK(same_subspace(bott_gamma_prime(A, eta, 0.0), top));
  }
}

TEST_CASE("omega path") {
  const CMatrix phi = mat(1, 1, {I1});
  CHECK((omega_path(phi, 0.0) - CMatrix::Identity(1, 1)).norm() < 1e-15);
  CHECK((omega_path(phi, kPi) + CMatrix::Identity(1, 1)).norm() < 1e-14);
  CHECK((omega_path(phi, kPi / 2) - phi).norm() < 1e-14);
  CHECK_THROWS_AS(omega_path(mat(1, 1, {1}), 0.3), Error);
}

TEST_CASE("winding numbers") {
  auto loop = [](const std::function<CMatrix(double)>& f, int n) {
    UnitaryLoop l;
    for (int j = 0; j <= n; ++j) l.samples.push_back(f(2 * kPi * j / n));
    l.samples.back() = l.samples.front();
    return l;
  };
  CHECK(winding_number(loop([](double z) { return CMatrix(mat(1, 1, {std::polar(1.0, z)})); }, 64)) == 1);
  CHECK(winding_number(loop([](double) { return CMatrix(CMatrix::Identity(2, 2)); }, 8)) == 0);
  CHECK(winding_number(loop([](double z) { return diag({std::polar(1.0, 2 * z), std::polar(1.0, -z)}); }, 64)) == 1);
  UnitaryLoop bad;
  bad.samples = {CMatrix::Identity(1, 1), mat(1, 1, {2})};
  CHECK_THROWS_AS(winding_number(bad), Error);
}

TEST_CASE("property: winding is additive and odd") {
  Rng rng(71);
  for (int t = 0; t < 20; ++t) {
    const int a = t % 5 - 2, b = (3 * t) % 7 - 3;
    const CMatrix V = random_unitary(rng, 2);
    auto sample = [&](int k, double z) { return CMatrix(V * diag({std::polar(1.0, k * z), 1.0}) * V.adjoint()); };
    UnitaryLoop la, lb, joined, reversed;
    const int n = 96;
    for (int j = 0; j <= n; ++j) {
      const double z = 2 * kPi * j / n;
      la.samples.push_back(sample(a, z));
      lb.samples.push_back(sample(b, z));
      reversed.samples.push_back(sample(a, -z));
    }
    joined.samples = la.samples;
    joined.samples.insert(joined.samples.end(), lb.samples.begin() + 1, lb.samples.end());
    CHECK(winding_number(la) == a);
    CHECK(winding_number(joined) == a + b);
    CHECK(winding_number(reversed) == -a);
  }
}

TEST_CASE("property: Bott identity on random phi") {
  Rng rng(73);
  for (int t = 0; t < 10; ++t) {
    const CMatrix phi = random_phi_pm_i(rng, 2 + t % 3);
    const Subspace A = phi_plus_space(phi);
    CHECK(gap_distance(A, subspace_from_columns(null_space(phi - I1 * CMatrix::Identity(phi.rows(), phi.cols())))) < 1e-10);
    for (int a = 0; a <= 16; ++a)
      for (int b = 0; b <= 16; ++b) {
        const double eta = 2 * kPi * a / 16, theta = kPi * b / 16;
        CHECK(gap_distance(bott_lambda(-I1 * omega_path(phi, eta), theta), bott_gamma_prime(A, eta, theta)) <= 1e-10);
      }
  }
}

TEST_CASE("property: det winding matches phase winding") {
  std::vector<CMatrix> s;
  std::vector<cplx> d;
  for (int j = 0; j <= 128; ++j) {
    const double z = 2 * kPi * j / 128;
    s.push_back(diag({std::polar(2.0, 3 * z), std::polar(0.5, -z)}));
    d.push_back(s.back().determinant());
  }
  CHECK(det_winding(s) == 2);
  CHECK(phase_winding(d) == 2);
}
