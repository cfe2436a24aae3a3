#include "ebp/bott.hpp"

#include <cmath>
#include <numbers>

namespace ebp {

namespace {

constexpr double kPi = std::numbers::pi;

void require_spectrum_pm_i(const CMatrix& phi, const Tolerances& tol) {
  const int n = static_cast<int>(phi.rows());
  if (phi.cols() != n || !is_unitary(phi, 1e-9) ||
      (phi * phi + CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol.eig_match)
    throw Error(ErrorKind::BadSpectrum, "phi must be unitary with spectrum in {i, -i}");
}

}  // namespace

Subspace bott_lambda(const CMatrix& a, double theta, const Tolerances& tol) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw Error(ErrorKind::AmbientMismatch, "bott_lambda needs a square a");
  if (n > 0 && smallest_singular_value(a) <= tol.rank) throw Error(ErrorKind::Singular, "a is singular");
  if (theta < -1e-12 || theta > kPi + 1e-12) throw Error(ErrorKind::BadParameters, "theta outside [0, pi]");
  CMatrix cols(2 * n, n);
  cols.topRows(n) = std::cos(theta / 2) * CMatrix::Identity(n, n);
  cols.bottomRows(n) = std::sin(theta / 2) * a;
  return subspace_from_columns(cols, tol);
}

CMatrix bott_f(const Subspace& A, double eta) {
  const int n = A.ambient_dim();
  const CMatrix Id = CMatrix::Identity(n, n);
  if (eta >= kPi) return std::polar(1.0, eta) * Id;
  const CMatrix P = A.projector();
  return std::polar(1.0, eta) * P + std::polar(1.0, -eta) * (Id - P);
}

CMatrix bott_f_prime(const Subspace& A, double eta) { return -I1 * bott_f(A, eta); }

Subspace bott_gamma_prime(const Subspace& A, double eta, double theta) {
  const int n = A.ambient_dim();
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const CMatrix P = A.projector();
  const CMatrix Id = CMatrix::Identity(n, n);
  CMatrix cols(2 * n, n);
  cols.topRows(n) = c * Id;
  cols.bottomRows(n) =
      s * (std::polar(1.0, eta - kPi / 2) * P + std::polar(1.0, -eta - kPi / 2) * (Id - P));
  return subspace_from_columns(cols);
}

CMatrix omega_path(const CMatrix& phi, double eta, const Tolerances& tol) {
  require_spectrum_pm_i(phi, tol);
  const int n = static_cast<int>(phi.rows());
  const CMatrix Id = CMatrix::Identity(n, n);
  const CMatrix Pp = 0.5 * (Id - I1 * phi);
  return std::polar(1.0, eta) * Pp + std::polar(1.0, -eta) * (Id - Pp);
}

Subspace phi_plus_space(const CMatrix& phi, const Tolerances& tol) {
  require_spectrum_pm_i(phi, tol);
  const int n = static_cast<int>(phi.rows());
  return subspace_from_columns(0.5 * (CMatrix::Identity(n, n) - I1 * phi), tol, n);
}

int phase_winding(const std::vector<cplx>& values) {
  if (values.size() < 2) throw Error(ErrorKind::BadParameters, "loop needs at least two samples");
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    if (values[k] == cplx(0) || values[k + 1] == cplx(0))
      throw Error(ErrorKind::Singular, "loop passes through zero");
    const double step = std::arg(values[k + 1] / values[k]);
    if (std::abs(step) >= kPi / 2) throw Error(ErrorKind::PhaseJump, "phase step exceeds pi/2");
    total += step;
  }
  return static_cast<int>(std::lround(total / (2 * kPi)));
}

int det_winding(const std::vector<CMatrix>& samples) {
  std::vector<cplx> dets;
  dets.reserve(samples.size());
  for (const auto& U : samples) dets.push_back(U.rows() == 0 ? cplx(1) : U.determinant());
  return phase_winding(dets);
}

int winding_number(const UnitaryLoop& loop) {
  const auto& S = loop.samples;
  if (S.size() < 2) throw Error(ErrorKind::BadParameters, "loop needs at least two samples");
  for (const auto& U : S)
    if (!is_unitary(U, 1e-9)) throw Error(ErrorKind::NotUnitary, "loop sample not unitary");
  if ((S.front() - S.back()).cwiseAbs().maxCoeff() > 1e-8)
    throw Error(ErrorKind::BadParameters, "loop is not closed");
  for (std::size_t k = 0; k + 1 < S.size(); ++k)
    if (largest_singular_value(S[k + 1] - S[k]) >= 0.5)
      throw Error(ErrorKind::PhaseJump, "consecutive loop samples too far apart");
  return det_winding(S);
}

}  // namespace ebp
