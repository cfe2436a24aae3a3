#include "ebp/elliptic_pairs.hpp"

#include <cmath>
#include <limits>

namespace ebp {

EllipticPair make_elliptic_pair(const CMatrix& sigma, const CMatrix& tau, const Tolerances& tol) {
  if (sigma.rows() != sigma.cols() || tau.rows() != tau.cols() || sigma.rows() != tau.rows() ||
      sigma.rows() == 0)
    throw Error(ErrorKind::AmbientMismatch, "sigma and tau must be square of equal size");
  const double scale = std::max(1.0, std::max(sigma.cwiseAbs().maxCoeff(), tau.cwiseAbs().maxCoeff()));
  if (hermitian_defect(sigma) > 1e-10 * scale || hermitian_defect(tau) > 1e-10 * scale)
    throw Error(ErrorKind::NotSelfAdjoint, "sigma or tau not self-adjoint");
  if (smallest_singular_value(sigma) <= tol.rank)
    throw Error(ErrorKind::SigmaSingular, "sigma is singular");

  EllipticPair p;
  p.sigma = 0.5 * (sigma + sigma.adjoint());
  p.tau = 0.5 * (tau + tau.adjoint());
  p.rho = p.sigma.partialPivLu().solve(p.tau);
  Eigen::ComplexEigenSolver<CMatrix> es(p.rho, false);
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    m = std::min(m, std::abs(es.eigenvalues()(i).imag()));
  p.margin = m;
  if (!(m > tol.ellipticity_margin))
    throw Error(ErrorKind::NotElliptic, "rho has an eigenvalue within margin of the real axis");
  OrderedSchur os = ordered_schur(p.rho, [](cplx z) { return z.imag() > 0; });
  const int n = p.dim();
  p.L_plus = Subspace(os.Q.leftCols(os.selected));
  OrderedSchur om = ordered_schur(p.rho, [](cplx z) { return z.imag() < 0; });
  p.L_minus = Subspace(om.Q.leftCols(om.selected));
  if (p.L_plus.dim() + p.L_minus.dim() != n)
    throw Error(ErrorKind::NotElliptic, "stable split does not span");
  return p;
}

EllipticPair pair_from_rho(const CMatrix& sigma, const CMatrix& rho, const Tolerances& tol) {
  CMatrix tau = sigma * rho;
  const double scale = std::max(1.0, tau.cwiseAbs().maxCoeff());
  if (hermitian_defect(tau) > 1e-8 * scale)
    throw Error(ErrorKind::NotSelfAdjoint, "sigma rho is not self-adjoint");
  return make_elliptic_pair(sigma, 0.5 * (tau + tau.adjoint()), tol);
}

EllipticPair pair_from_split(const CMatrix& sigma, const Subspace& L_plus,
                             const Subspace& L_minus, const Tolerances& tol) {
  CMatrix P = oblique_projector(L_plus, L_minus);
  const int n = static_cast<int>(sigma.rows());
  CMatrix rho = I1 * P - I1 * (CMatrix::Identity(n, n) - P);
  return pair_from_rho(sigma, rho, tol);
}

std::pair<Subspace, Subspace> stable_split(const EllipticPair& pair) {
  return {pair.L_plus, pair.L_minus};
}

DecayReport ode_decay_check(const EllipticPair& pair, const CVector& v, double horizon) {
  if (std::abs(v.norm() - 1.0) > 1e-12)
    throw Error(ErrorKind::BadParameters, "ode_decay_check requires a unit vector");
  if (!(horizon > 0)) throw Error(ErrorKind::BadParameters, "horizon must be positive");
  CVector end = expm(-I1 * horizon * pair.rho) * v;
  DecayReport r;
  r.end_norm = end.norm();
  r.decaying = r.end_norm < std::exp(-pair.margin * horizon / 2);
  return r;
}

DecayReport ode_decay_check(const EllipticPair& pair, const CVector& v) {
  return ode_decay_check(pair, v, 5.0 / pair.margin);
}

Subspace positive_path(const EllipticPair& pair, double theta, const Tolerances& tol) {
  CMatrix A = pair.sigma * std::cos(theta) + pair.tau * std::sin(theta);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (A + A.adjoint()));
  const RVector& w = es.eigenvalues();
  if (w.cwiseAbs().minCoeff() <= tol.ellipticity_margin)
    throw Error(ErrorKind::SingularSlice, "sigma cos + tau sin is singular");
  int neg = 0;
  while (neg < w.size() && w(neg) < 0) ++neg;
  return Subspace(es.eigenvectors().rightCols(w.size() - neg));
}

Subspace plus_path_formula(const CMatrix& phi, double theta) {
  const int p = static_cast<int>(phi.cols());
  const int q = static_cast<int>(phi.rows());
  CMatrix cols(p + q, p);
  cols.topRows(p) = std::cos(theta / 2) * CMatrix::Identity(p, p);
  cols.bottomRows(q) = -I1 * std::sin(theta / 2) * phi;
  return subspace_from_columns(cols);
}

EllipticPair normalized_pair(const CMatrix& phi, const Tolerances& tol) {
  const int p = static_cast<int>(phi.rows());
  CMatrix sigma = CMatrix::Zero(2 * p, 2 * p);
  sigma.topLeftCorner(p, p).setIdentity();
  sigma.bottomRightCorner(p, p) = -CMatrix::Identity(p, p);
  CMatrix tau = CMatrix::Zero(2 * p, 2 * p);
  tau.topRightCorner(p, p) = I1 * phi.adjoint();
  tau.bottomLeftCorner(p, p) = -I1 * phi;
  return make_elliptic_pair(sigma, tau, tol);
}

}  // namespace ebp
