#include "ebp/numeric_core.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace ebp {

const char* error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AmbientMismatch: return "AmbientMismatch";
    case ErrorKind::BoundaryEigenvalue: return "BoundaryEigenvalue";
    case ErrorKind::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::SigmaSingular: return "SigmaSingular";
    case ErrorKind::NotElliptic: return "NotElliptic";
    case ErrorKind::NotUnitarySigma: return "NotUnitarySigma";
    case ErrorKind::NotLagrangian: return "NotLagrangian";
    case ErrorKind::NotGraph: return "NotGraph";
    case ErrorKind::NotTransverse: return "NotTransverse";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotCompatibleProjector: return "NotCompatibleProjector";
    case ErrorKind::SingularSlice: return "SingularSlice";
    case ErrorKind::NotSpecialStart: return "NotSpecialStart";
    case ErrorKind::NotAntiCommuting: return "NotAntiCommuting";
    case ErrorKind::NotSpecial: return "NotSpecial";
    case ErrorKind::BadSpectrum: return "BadSpectrum";
    case ErrorKind::PhaseJump: return "PhaseJump";
    case ErrorKind::MissingBoundaryCondition: return "MissingBoundaryCondition";
    case ErrorKind::BadParameters: return "BadParameters";
    case ErrorKind::NotSkewAdjoint: return "NotSkewAdjoint";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::NotEquivariant: return "NotEquivariant";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NotSelfAdjointBC: return "NotSelfAdjointBC";
    case ErrorKind::ClusteredEigenvalues: return "ClusteredEigenvalues";
    case ErrorKind::IncompatibleModels: return "IncompatibleModels";
    case ErrorKind::TrackingAmbiguity: return "TrackingAmbiguity";
    case ErrorKind::LevelOnSpectrum: return "LevelOnSpectrum";
    case ErrorKind::NotDefinite: return "NotDefinite";
    case ErrorKind::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}

void require_same_ambient(const Subspace& U, const Subspace& V, const char* where) {
  if (U.ambient_dim() != V.ambient_dim())
    throw Error(ErrorKind::AmbientMismatch,
                std::string(where) + ": ambient " + std::to_string(U.ambient_dim()) +
                    " vs " + std::to_string(V.ambient_dim()));
}

namespace {

// Two passes of modified Gram-Schmidt; exact for full-rank input.
CMatrix gram_schmidt(const CMatrix& A) {
  CMatrix Q = A;
  for (int j = 0; j < Q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) {
        cplx r = Q.col(i).dot(Q.col(j));
        Q.col(j) -= r * Q.col(i);
      }
    Q.col(j).normalize();
  }
  return Q;
}

}  // namespace

Subspace subspace_from_columns(const CMatrix& cols, const Tolerances& tol, int ambient) {
  if (ambient >= 0 && cols.rows() != ambient)
    throw Error(ErrorKind::AmbientMismatch,
                "columns have " + std::to_string(cols.rows()) + " rows, expected " +
                    std::to_string(ambient));
  const int n = static_cast<int>(cols.rows());
  if (cols.cols() == 0) return Subspace::zero(n);
  Eigen::BDCSVD<CMatrix> svd(cols, Eigen::ComputeThinU);
  const RVector& s = svd.singularValues();
  const double smax = s(0);
  if (smax == 0.0) return Subspace::zero(n);
  int r = 0;
  while (r < s.size() && s(r) > tol.rank * smax) ++r;
  if (r == cols.cols()) return Subspace(gram_schmidt(cols));
  return Subspace(svd.matrixU().leftCols(r));
}

Subspace span_of(std::initializer_list<CVector> vecs, const Tolerances& tol) {
  if (vecs.size() == 0) throw Error(ErrorKind::BadParameters, "span_of: no vectors");
  const auto n = vecs.begin()->size();
  CMatrix A(n, static_cast<Eigen::Index>(vecs.size()));
  int j = 0;
  for (const auto& v : vecs) {
    if (v.size() != n) throw Error(ErrorKind::AmbientMismatch, "span_of");
    A.col(j++) = v;
  }
  return subspace_from_columns(A, tol);
}

double largest_singular_value(const CMatrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(M);
  return svd.singularValues()(0);
}

double smallest_singular_value(const CMatrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(M);
  const RVector& s = svd.singularValues();
  if (M.rows() < M.cols()) return 0.0;
  return s(s.size() - 1);
}

double gap_distance(const Subspace& U, const Subspace& V) {
  require_same_ambient(U, V, "gap_distance");
  if (U.dim() != V.dim()) return 1.0;
  if (U.dim() == 0) return 0.0;
  double g = largest_singular_value(U.projector() - V.projector());
  return std::clamp(g, 0.0, 1.0);
}

EigenSelector EigenSelector::im_positive() {
  return {[](cplx z) { return z.imag() > 0; }, [](cplx z) { return std::abs(z.imag()); }};
}
EigenSelector EigenSelector::im_negative() {
  return {[](cplx z) { return z.imag() < 0; }, [](cplx z) { return std::abs(z.imag()); }};
}
EigenSelector EigenSelector::re_positive() {
  return {[](cplx z) { return z.real() > 0; }, [](cplx z) { return std::abs(z.real()); }};
}
EigenSelector EigenSelector::re_negative() {
  return {[](cplx z) { return z.real() < 0; }, [](cplx z) { return std::abs(z.real()); }};
}

namespace {

// Swap the adjacent diagonal entries k, k+1 of an upper-triangular T.
void swap_adjacent(CMatrix& T, CMatrix& Q, int k) {
  const cplx a = T(k, k), b = T(k + 1, k + 1), c = T(k, k + 1);
  cplx v1 = c, v2 = b - a;
  double nv = std::sqrt(std::norm(v1) + std::norm(v2));
  if (nv == 0.0) return;
  v1 /= nv;
  v2 /= nv;
  Eigen::Matrix2cd Z;
  Z << v1, -std::conj(v2), v2, std::conj(v1);
  const int n = static_cast<int>(T.rows());
  T.block(k, k, 2, n - k) = Z.adjoint() * T.block(k, k, 2, n - k);
  T.block(0, k, k + 2, 2) = T.block(0, k, k + 2, 2) * Z;
  Q.middleCols(k, 2) = Q.middleCols(k, 2) * Z;
  T(k + 1, k) = 0.0;
  T(k, k) = b;
  T(k + 1, k + 1) = a;
}

}  // namespace

OrderedSchur ordered_schur(const CMatrix& M, const std::function<bool(cplx)>& pick) {
  OrderedSchur out;
  const int n = static_cast<int>(M.rows());
  if (n == 0) return out;
  Eigen::ComplexSchur<CMatrix> schur(M);
  out.T = schur.matrixT();
  out.Q = schur.matrixU();
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i) out.T(i, j) = 0.0;
  int placed = 0;
  for (int i = 0; i < n; ++i) {
    if (!pick(out.T(i, i))) continue;
    for (int k = i - 1; k >= placed; --k) swap_adjacent(out.T, out.Q, k);
    ++placed;
  }
  out.selected = placed;
  return out;
}

Subspace invariant_subspace(const CMatrix& M, const EigenSelector& selector,
                            const Tolerances& tol) {
  if (M.rows() != M.cols()) throw Error(ErrorKind::AmbientMismatch, "invariant_subspace: not square");
  Eigen::ComplexEigenSolver<CMatrix> es(M, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (selector.boundary_distance(es.eigenvalues()(i)) <= tol.ellipticity_margin)
      throw Error(ErrorKind::BoundaryEigenvalue, "eigenvalue on selector boundary");
  OrderedSchur os = ordered_schur(M, selector.pick);
  return Subspace(os.Q.leftCols(os.selected));
}

Subspace orthogonal_complement(const Subspace& S) {
  const int n = S.ambient_dim();
  if (S.dim() == 0) return Subspace::full(n);
  if (S.dim() == n) return Subspace::zero(n);
  Eigen::HouseholderQR<CMatrix> qr(S.frame());
  CMatrix Q = qr.householderQ() * CMatrix::Identity(n, n);
  return Subspace(gram_schmidt(Q.rightCols(n - S.dim())));
}

Subspace subspace_sum(const Subspace& U, const Subspace& V, const Tolerances& tol) {
  require_same_ambient(U, V, "subspace_sum");
  CMatrix A(U.ambient_dim(), U.dim() + V.dim());
  A << U.frame(), V.frame();
  return subspace_from_columns(A, tol);
}

double hermitian_defect(const CMatrix& M) {
  if (M.size() == 0) return 0.0;
  return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

bool is_unitary(const CMatrix& U, double tol) {
  if (U.rows() != U.cols()) return false;
  return (U.adjoint() * U - CMatrix::Identity(U.rows(), U.cols())).norm() <= tol;
}

CMatrix expm(const CMatrix& A) { return A.exp(); }

CMatrix hermitian_function(const CMatrix& H, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (H + H.adjoint()));
  RVector fv = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix oblique_projector(const Subspace& onto, const Subspace& along) {
  require_same_ambient(onto, along, "oblique_projector");
  const int n = onto.ambient_dim();
  if (onto.dim() + along.dim() != n)
    throw Error(ErrorKind::NotTransverse, "oblique_projector: dimensions do not add up");
  CMatrix B(n, n);
  B << onto.frame(), along.frame();
  Eigen::PartialPivLU<CMatrix> lu(B);
  CMatrix D = CMatrix::Zero(n, n);
  D.topLeftCorner(onto.dim(), onto.dim()).setIdentity();
  return B * D * lu.inverse();
}

CMatrix null_space(const CMatrix& M, double rel_tol) {
  const int n = static_cast<int>(M.cols());
  if (M.rows() == 0) return CMatrix::Identity(n, n);
  Eigen::BDCSVD<CMatrix> svd(M, Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  int r = 0;
  while (r < s.size() && s(r) > rel_tol * std::max(smax, 1e-300)) ++r;
  if (smax == 0.0) r = 0;
  return svd.matrixV().rightCols(n - r);
}

void normal_eigen(const CMatrix& M, CVector& values, CMatrix& vectors) {
  Eigen::ComplexSchur<CMatrix> schur(M);
  values = schur.matrixT().diagonal();
  vectors = schur.matrixU();
}

}  // namespace ebp
