#include "ebp/generators.hpp"

#include "ebp/pontryagin.hpp"

#include <cmath>

namespace ebp {

CMatrix random_complex(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix M(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      M(i, j) = cplx(re, im);
    }
  return M;
}

CMatrix random_unitary(Rng& rng, int n) {
  Eigen::HouseholderQR<CMatrix> qr(random_complex(rng, n, n));
  CMatrix Q = qr.householderQ();
  const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = R(j, j);
    if (std::abs(d) > 0) Q.col(j) *= d / std::abs(d);
  }
  return Q;
}

CMatrix random_phi_pm_i(Rng& rng, int n) {
  const CMatrix V = random_unitary(rng, n);
  std::uniform_int_distribution<int> count(n >= 2 ? 1 : 0, n >= 2 ? n - 1 : n);
  const int plus = count(rng);
  CVector d(n);
  for (int j = 0; j < n; ++j) d(j) = j < plus ? I1 : -I1;
  return V * d.asDiagonal() * V.adjoint();
}

EllipticPair random_elliptic_pair(Rng& rng, int p) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> extra(0.3, 1.5);
  const int n = 2 * p;
  CMatrix sigma = CMatrix::Zero(n, n), tau = CMatrix::Zero(n, n);
  for (int b = 0; b < p; ++b) {
    const double a = u(rng), c = u(rng);
    const double mag = std::abs(a + c) / 2 + extra(rng);
    const cplx beta = std::polar(mag, 3.141592653589793 * u(rng));
    sigma(2 * b, 2 * b) = 1;
    sigma(2 * b + 1, 2 * b + 1) = -1;
    tau(2 * b, 2 * b) = a;
    tau(2 * b + 1, 2 * b + 1) = c;
    tau(2 * b, 2 * b + 1) = beta;
    tau(2 * b + 1, 2 * b) = std::conj(beta);
  }
  // G = U (1 + 0.5 K) with K contractive keeps cond(G) <= 3.
  CMatrix Kc = random_complex(rng, n, n);
  Kc /= Kc.operatorNorm();
  const CMatrix G = random_unitary(rng, n) * (CMatrix::Identity(n, n) + 0.5 * Kc);
  return make_elliptic_pair(G.adjoint() * sigma * G, G.adjoint() * tau * G);
}

Subspace random_lagrangian(Rng& rng, const CMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (sigma + sigma.adjoint()));
  const RVector& w = es.eigenvalues();
  const int n = static_cast<int>(w.size());
  int neg = 0;
  while (neg < n && w(neg) < 0) ++neg;
  if (2 * neg != n) throw Error(ErrorKind::BadParameters, "sigma has unequal inertia");
  const int p = n / 2;
  CMatrix Ep = es.eigenvectors().rightCols(p) * w.tail(p).cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal();
  CMatrix Em = es.eigenvectors().leftCols(p) * (-w.head(p)).cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal();
  return subspace_from_columns(Ep + Em * random_unitary(rng, p));
}

PairWithCondition random_pair_with_condition(Rng& rng, int p, double min_margin) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    EllipticPair pair = random_elliptic_pair(rng, p);
    Subspace N = random_lagrangian(rng, pair.sigma);
    if (transversality_margin(N, pair.L_minus) >= min_margin) return {pair, N};
  }
  throw Error(ErrorKind::BadParameters, "no transverse boundary condition found");
}

EllipticPair random_normalized_pair(Rng& rng, int p) { return normalized_pair(random_unitary(rng, p)); }

CylinderLoop random_special_loop(Rng& rng, int m) {
  std::uniform_real_distribution<double> M(0.6, 1.4), e(0.1, 0.5), coin(0.0, 1.0);
  const double Mv = M(rng), ev = e(rng);
  const cplx g = coin(rng) < 0.5 ? I1 : -I1;
  return rotating_dirac_loop(m, Mv, ev, g, random_unitary(rng, 2));
}

}  // namespace ebp
