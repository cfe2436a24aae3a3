#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebp {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr cplx I1{0.0, 1.0};

enum class ErrorKind {
  AmbientMismatch,
  BoundaryEigenvalue,
  NotSelfAdjoint,
  Singular,
  SigmaSingular,
  NotElliptic,
  NotUnitarySigma,
  NotLagrangian,
  NotGraph,
  NotTransverse,
  NotUnitary,
  NotCompatibleProjector,
  SingularSlice,
  NotSpecialStart,
  NotAntiCommuting,
  NotSpecial,
  BadSpectrum,
  PhaseJump,
  MissingBoundaryCondition,
  BadParameters,
  NotSkewAdjoint,
  NotInvertible,
  NotEquivariant,
  GridTooCoarse,
  NotSelfAdjointBC,
  ClusteredEigenvalues,
  IncompatibleModels,
  TrackingAmbiguity,
  LevelOnSpectrum,
  NotDefinite,
  TruncationInsufficient,
  InvalidInput,
};

const char* error_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct Tolerances {
  double ortho = 1e-12;
  double rank = 1e-9;
  double ellipticity_margin = 1e-8;
  double eig_match = 1e-6;
};

// Orthonormal-column frame of a linear subspace.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(CMatrix frame) : frame_(std::move(frame)) {}

  static Subspace zero(int ambient) { return Subspace(CMatrix(ambient, 0)); }
  static Subspace full(int ambient) {
    return Subspace(CMatrix::Identity(ambient, ambient));
  }

  const CMatrix& frame() const { return frame_; }
  int ambient_dim() const { return static_cast<int>(frame_.rows()); }
  int dim() const { return static_cast<int>(frame_.cols()); }
  CMatrix projector() const { return frame_ * frame_.adjoint(); }

 private:
  CMatrix frame_;
};

Subspace subspace_from_columns(const CMatrix& cols, const Tolerances& tol = {},
                               int ambient = -1);
Subspace span_of(std::initializer_list<CVector> vecs, const Tolerances& tol = {});

double gap_distance(const Subspace& U, const Subspace& V);

// Eigenvalue predicate with a signed distance to its decision boundary.
struct EigenSelector {
  std::function<bool(cplx)> pick;
  std::function<double(cplx)> boundary_distance;

  static EigenSelector im_positive();
  static EigenSelector im_negative();
  static EigenSelector re_positive();
  static EigenSelector re_negative();
};

Subspace invariant_subspace(const CMatrix& M, const EigenSelector& selector,
                            const Tolerances& tol = {});

// Ordered complex Schur form M = Q T Q^H with selected eigenvalues leading.
struct OrderedSchur {
  CMatrix Q;
  CMatrix T;
  int selected = 0;
};
OrderedSchur ordered_schur(const CMatrix& M, const std::function<bool(cplx)>& pick);

Subspace orthogonal_complement(const Subspace& S);
Subspace subspace_sum(const Subspace& U, const Subspace& V, const Tolerances& tol = {});

double smallest_singular_value(const CMatrix& M);
double largest_singular_value(const CMatrix& M);
double hermitian_defect(const CMatrix& M);
bool is_unitary(const CMatrix& U, double tol);

CMatrix expm(const CMatrix& A);
// f applied to the spectrum of a Hermitian matrix.
CMatrix hermitian_function(const CMatrix& H, const std::function<double(double)>& f);
// Oblique projector onto U along V, for U + V the full space.
CMatrix oblique_projector(const Subspace& onto, const Subspace& along);
// Orthonormal basis of the null space of a matrix.
CMatrix null_space(const CMatrix& M, double rel_tol = 1e-10);
// Eigenvalues of a normal matrix via Schur, with an orthonormal eigenbasis.
void normal_eigen(const CMatrix& M, CVector& values, CMatrix& vectors);

void require_same_ambient(const Subspace& U, const Subspace& V, const char* where);

}  // namespace ebp
