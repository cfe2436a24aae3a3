#include "ebp/pontryagin.hpp"

#include <algorithm>
#include <cmath>

namespace ebp {

IndefiniteForm form_from_sigma(const CMatrix& sigma, const Tolerances& tol) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0)
    throw Error(ErrorKind::AmbientMismatch, "sigma must be square");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if (hermitian_defect(sigma) > 1e-10 * scale)
    throw Error(ErrorKind::NotSelfAdjoint, "sigma is not self-adjoint");
  if (smallest_singular_value(sigma) <= tol.rank)
    throw Error(ErrorKind::Singular, "sigma is singular");
  return IndefiniteForm{0.5 * (sigma + sigma.adjoint()), static_cast<int>(sigma.rows())};
}

Split sigma_split(const CMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (sigma + sigma.adjoint()));
  const RVector& w = es.eigenvalues();
  int neg = 0;
  while (neg < w.size() && w(neg) < 0) ++neg;
  const int n = static_cast<int>(w.size());
  return Split{Subspace(es.eigenvectors().rightCols(n - neg)),
               Subspace(es.eigenvectors().leftCols(neg))};
}

double lagrangian_residual(const IndefiniteForm& form, const Subspace& L) {
  if (L.dim() == 0) return 0.0;
  return form.gram(L.frame()).cwiseAbs().maxCoeff();
}

bool is_lagrangian(const IndefiniteForm& form, const Subspace& L, const Tolerances& tol) {
  if (L.ambient_dim() != form.dim)
    throw Error(ErrorKind::AmbientMismatch, "is_lagrangian");
  if (2 * L.dim() != form.dim) return false;
  const double scale = std::max(1.0, form.sigma.cwiseAbs().maxCoeff());
  return lagrangian_residual(form, L) <= tol.rank * scale;
}

double transversality_margin(const Subspace& U, const Subspace& V) {
  require_same_ambient(U, V, "transversality_margin");
  if (U.dim() + V.dim() != U.ambient_dim()) return 0.0;
  if (U.ambient_dim() == 0) return 1.0;
  CMatrix A(U.ambient_dim(), U.ambient_dim());
  A << U.frame(), V.frame();
  return smallest_singular_value(A);
}

bool is_transverse(const Subspace& U, const Subspace& V, const Tolerances& tol) {
  return transversality_margin(U, V) > tol.ellipticity_margin;
}

Subspace graph_of(const Split& split, const CMatrix& phi) {
  CMatrix cols = split.plus.frame() + split.minus.frame() * phi;
  return subspace_from_columns(cols);
}

Subspace LagrangianGraph::graph() const { return graph_of(split, phi); }

LagrangianGraph isometry_of_lagrangian(const IndefiniteForm& form, const Split& split,
                                       const Subspace& L, const Tolerances& tol) {
  if (L.ambient_dim() != form.dim) throw Error(ErrorKind::AmbientMismatch, "isometry_of_lagrangian");
  const CMatrix Id = CMatrix::Identity(form.dim, form.dim);
  if ((form.sigma * form.sigma - Id).cwiseAbs().maxCoeff() > 1e-9)
    throw Error(ErrorKind::NotUnitarySigma, "sigma is not a unitary involution");
  if (!is_lagrangian(form, L, tol)) throw Error(ErrorKind::NotLagrangian, "isometry_of_lagrangian");
  CMatrix a = split.plus.frame().adjoint() * L.frame();
  CMatrix b = split.minus.frame().adjoint() * L.frame();
  if (a.rows() != a.cols() || smallest_singular_value(a) <= tol.ellipticity_margin ||
      smallest_singular_value(b) <= tol.ellipticity_margin)
    throw Error(ErrorKind::NotGraph, "L meets E+ or E- nontrivially");
  CMatrix phi = b * a.inverse();
  return LagrangianGraph{split, phi};
}

CMatrix transverse_delta(const IndefiniteForm& form, const Subspace& L, const Subspace& M,
                         const Subspace& M_new, const Tolerances& tol) {
  require_same_ambient(L, M, "transverse_delta");
  require_same_ambient(L, M_new, "transverse_delta");
  if (L.ambient_dim() != form.dim) throw Error(ErrorKind::AmbientMismatch, "transverse_delta");
  if (!is_transverse(L, M, tol)) throw Error(ErrorKind::NotTransverse, "M not transverse to L");
  if (!is_transverse(L, M_new, tol)) throw Error(ErrorKind::NotTransverse, "M_new not transverse to L");
  const int n = form.dim, d = M.dim();
  CMatrix B(n, n);
  B << M.frame(), L.frame();
  Eigen::PartialPivLU<CMatrix> lu(B);
  CMatrix coords = lu.solve(M_new.frame());
  CMatrix X = coords.topRows(d), Y = coords.bottomRows(n - d);
  CMatrix CM = lu.inverse().topRows(d);
  return L.frame() * Y * X.inverse() * CM;
}

Subspace delta_graph(const Subspace& M, const CMatrix& delta, const Tolerances& tol) {
  return subspace_from_columns(M.frame() + delta * M.frame(), tol);
}

CMatrix projector_from_isometry(const CMatrix& Phi, double tol) {
  if (!is_unitary(Phi, tol)) throw Error(ErrorKind::NotUnitary, "projector_from_isometry");
  const int p = static_cast<int>(Phi.rows());
  CMatrix Pi(2 * p, 2 * p);
  Pi << CMatrix::Identity(p, p), Phi.adjoint(), Phi, CMatrix::Identity(p, p);
  return 0.5 * Pi;
}

CMatrix isometry_from_projector(const CMatrix& Pi, int plus_dim, double tol) {
  const int n = static_cast<int>(Pi.rows());
  if (Pi.cols() != n || plus_dim < 0 || plus_dim > n)
    throw Error(ErrorKind::NotCompatibleProjector, "shape");
  if ((Pi * Pi - Pi).cwiseAbs().maxCoeff() > tol || hermitian_defect(Pi) > tol)
    throw Error(ErrorKind::NotCompatibleProjector, "not a self-adjoint projection");
  RVector s = RVector::Ones(n);
  s.tail(n - plus_dim).setConstant(-1.0);
  CMatrix Sig = s.cast<cplx>().asDiagonal();
  // Sigma(Im Pi) = Ker Pi  <=>  Pi Sigma Pi = 0 and rank Pi = n/2.
  const double trace = Pi.trace().real();
  if (2 * plus_dim != n || std::abs(trace - plus_dim) > 1e-8 ||
      (Pi * Sig * Pi).cwiseAbs().maxCoeff() > tol)
    throw Error(ErrorKind::NotCompatibleProjector, "Sigma(Im Pi) != Ker Pi");
  return 2.0 * Pi.bottomLeftCorner(n - plus_dim, plus_dim);
}

}  // namespace ebp
