#include "ebp/deformations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ebp {

namespace {

constexpr double kPi = std::numbers::pi;

double angle_0_2pi(cplx z) {
  double a = std::arg(z);
  return a < 0 ? a + 2 * kPi : a;
}

CMatrix spectral_arc(const CMatrix& omega, const std::function<double(double)>& target_angle,
                     double alpha) {
  CVector vals;
  CMatrix vecs;
  normal_eigen(omega, vals, vecs);
  CVector moved(vals.size());
  for (Eigen::Index j = 0; j < vals.size(); ++j) {
    const double th = angle_0_2pi(vals(j));
    const double th_a = (1 - alpha) * th + alpha * target_angle(th);
    moved(j) = std::polar(1.0, th_a);
  }
  return vecs * moved.asDiagonal() * vecs.adjoint();
}

StageSample make_sample(double param, const EllipticPair& pair, const Subspace& N,
                        const Tolerances& tol) {
  StageSample s;
  s.param = param;
  s.pair = pair;
  s.N = N;
  s.ellipticity = pair.margin;
  IndefiniteForm f = pair.form();
  s.lagrangian_residual = lagrangian_residual(f, N);
  s.lagrangian = is_lagrangian(f, N, tol);
  s.transversality = transversality_margin(N, pair.L_minus);
  return s;
}

void require_unitary_sigma(const CMatrix& sigma) {
  const int n = static_cast<int>(sigma.rows());
  if ((sigma * sigma - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-9 ||
      hermitian_defect(sigma) > 1e-9)
    throw Error(ErrorKind::NotUnitarySigma, "sigma is not a unitary involution");
}

}  // namespace

double DeformationTrace::min_ellipticity() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& st : stages)
    for (const auto& s : st.samples) m = std::min(m, s.ellipticity);
  return m;
}

double DeformationTrace::min_transversality() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& st : stages)
    for (const auto& s : st.samples) m = std::min(m, s.transversality);
  return m;
}

double DeformationTrace::max_lagrangian_residual() const {
  double m = 0.0;
  for (const auto& st : stages)
    for (const auto& s : st.samples) m = std::max(m, s.lagrangian_residual);
  return m;
}

bool DeformationTrace::all_lagrangian() const {
  for (const auto& st : stages)
    for (const auto& s : st.samples)
      if (!s.lagrangian) return false;
  return true;
}

std::pair<EllipticPair, Subspace> deform_unitarize(const EllipticPair& pair, const Subspace& N,
                                                   double alpha, const Tolerances& tol) {
  if (alpha < 0 || alpha > 0.5) throw Error(ErrorKind::BadParameters, "alpha outside [0, 1/2]");
  CMatrix abs_pow_neg = hermitian_function(pair.sigma, [alpha](double s) {
    return std::pow(std::abs(s), -alpha);
  });
  CMatrix abs_pow = hermitian_function(pair.sigma, [alpha](double s) {
    return std::pow(std::abs(s), alpha);
  });
  CMatrix sigma_a = abs_pow_neg * pair.sigma * abs_pow_neg;
  CMatrix tau_a = abs_pow_neg * pair.tau * abs_pow_neg;
  sigma_a = 0.5 * (sigma_a + sigma_a.adjoint()).eval();
  tau_a = 0.5 * (tau_a + tau_a.adjoint()).eval();
  EllipticPair out = make_elliptic_pair(sigma_a, tau_a, tol);
  return {out, subspace_from_columns(abs_pow * N.frame(), tol)};
}

EllipticPair deform_rho_to_pm_i(const EllipticPair& pair, double beta, const Tolerances& tol) {
  if (beta < 0 || beta > 1) throw Error(ErrorKind::BadParameters, "beta outside [0, 1]");
  const int n = pair.dim();
  CMatrix P = oblique_projector(pair.L_plus, pair.L_minus);
  CMatrix rho0 = I1 * P - I1 * (CMatrix::Identity(n, n) - P);
  return pair_from_rho(pair.sigma, (1 - beta) * pair.rho + beta * rho0, tol);
}

EllipticPair deform_align_Lminus(const EllipticPair& pair, const Subspace& N, double alpha,
                                 const Tolerances& tol) {
  if (alpha < 0 || alpha > 1) throw Error(ErrorKind::BadParameters, "alpha outside [0, 1]");
  require_unitary_sigma(pair.sigma);
  IndefiniteForm form = pair.form();
  Split E = sigma_split(pair.sigma);
  CMatrix phiN = isometry_of_lagrangian(form, E, N, tol).phi;
  CMatrix psi0 = isometry_of_lagrangian(form, E, pair.L_minus, tol).phi;
  CMatrix omega = phiN.adjoint() * psi0;
  CVector vals;
  CMatrix vecs;
  normal_eigen(omega, vals, vecs);
  for (Eigen::Index j = 0; j < vals.size(); ++j)
    if (std::abs(vals(j) - 1.0) < tol.eig_match)
      throw Error(ErrorKind::NotSpecialStart, "relative isometry of L_minus has eigenvalue 1");
  CMatrix psi_a = phiN * spectral_arc(omega, [](double) { return kPi; }, alpha);
  Subspace L_minus_a = graph_of(E, psi_a);
  CMatrix V = E.plus.frame() * E.plus.frame().adjoint() +
              E.minus.frame() * (psi_a * psi0.adjoint()) * E.minus.frame().adjoint();
  Subspace L_plus_a = subspace_from_columns(V * pair.L_plus.frame(), tol);
  return pair_from_split(pair.sigma, L_plus_a, L_minus_a, tol);
}

EllipticPair deform_Lplus_to_N(const EllipticPair& pair, const Subspace& N, double t,
                               const Tolerances& tol) {
  if (t < 0 || t > 1) throw Error(ErrorKind::BadParameters, "t outside [0, 1]");
  Subspace Nperp = orthogonal_complement(N);
  if (gap_distance(pair.L_minus, Nperp) > 1e-8)
    throw Error(ErrorKind::BadParameters, "L_minus is not the orthogonal complement of N");
  IndefiniteForm form = pair.form();
  CMatrix delta = transverse_delta(form, pair.L_minus, N, pair.L_plus, tol);
  Subspace L_plus_t = delta_graph(N, (1 - t) * delta, tol);
  return pair_from_split(pair.sigma, L_plus_t, pair.L_minus, tol);
}

std::pair<NormalForm, DeformationTrace> normalize(const EllipticPair& pair, const Subspace& N,
                                                  int samples, const Tolerances& tol) {
  if (samples < 2) throw Error(ErrorKind::BadParameters, "at least two samples per stage");
  if (N.ambient_dim() != pair.dim()) throw Error(ErrorKind::AmbientMismatch, "normalize");
  if (!is_lagrangian(pair.form(), N, tol)) throw Error(ErrorKind::NotLagrangian, "normalize");
  if (!is_transverse(N, pair.L_minus, tol))
    throw Error(ErrorKind::NotTransverse, "N is not transverse to L_minus");

  DeformationTrace trace;
  auto grid = [samples](int k) { return static_cast<double>(k) / (samples - 1); };

  DeformationStage s1{"unitarize", {}};
  for (int k = 0; k < samples; ++k) {
    auto [p, n] = deform_unitarize(pair, N, 0.5 * grid(k), tol);
    s1.samples.push_back(make_sample(grid(k), p, n, tol));
  }
  const EllipticPair p1 = s1.samples.back().pair;
  const Subspace N1 = s1.samples.back().N;
  trace.stages.push_back(std::move(s1));

  DeformationStage s2{"rho_to_pm_i", {}};
  for (int k = 0; k < samples; ++k)
    s2.samples.push_back(make_sample(grid(k), deform_rho_to_pm_i(p1, grid(k), tol), N1, tol));
  const EllipticPair p2 = s2.samples.back().pair;
  trace.stages.push_back(std::move(s2));

  DeformationStage s3{"align_Lminus", {}};
  for (int k = 0; k < samples; ++k)
    s3.samples.push_back(make_sample(grid(k), deform_align_Lminus(p2, N1, grid(k), tol), N1, tol));
  const EllipticPair p3 = s3.samples.back().pair;
  trace.stages.push_back(std::move(s3));

  DeformationStage s4{"Lplus_to_N", {}};
  for (int k = 0; k < samples; ++k)
    s4.samples.push_back(make_sample(grid(k), deform_Lplus_to_N(p3, N1, grid(k), tol), N1, tol));
  const EllipticPair p4 = s4.samples.back().pair;
  trace.stages.push_back(std::move(s4));

  NormalForm nf;
  nf.split = sigma_split(p4.sigma);
  nf.phi = isometry_of_lagrangian(p4.form(), nf.split, N1, tol).phi;
  nf.pair = p4;
  nf.N = N1;
  return {nf, trace};
}

bool is_normalized(const EllipticPair& pair, const Subspace& N, double tol) {
  const int n = pair.dim();
  if (N.ambient_dim() != n) return false;
  if ((pair.sigma * pair.sigma - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol) return false;
  if ((pair.rho * pair.L_plus.frame() - I1 * pair.L_plus.frame()).cwiseAbs().maxCoeff() > tol)
    return false;
  if ((pair.rho * pair.L_minus.frame() + I1 * pair.L_minus.frame()).cwiseAbs().maxCoeff() > tol)
    return false;
  return gap_distance(pair.L_plus, N) <= tol &&
         gap_distance(pair.L_minus, orthogonal_complement(N)) <= tol;
}

bool is_graded_normalized(const EllipticPair& pair, const Subspace& N, const Split& split,
                          double tol) {
  const CMatrix& Ep = split.plus.frame();
  const CMatrix& Em = split.minus.frame();
  if (Ep.rows() != pair.dim() || Em.rows() != pair.dim() || Ep.cols() != Em.cols()) return false;
  if ((Ep.adjoint() * Em).cwiseAbs().maxCoeff() > tol) return false;
  if ((pair.rho * Ep - I1 * Ep).cwiseAbs().maxCoeff() > tol) return false;
  if ((pair.rho * Em + I1 * Em).cwiseAbs().maxCoeff() > tol) return false;
  if ((Ep.adjoint() * pair.sigma * Ep).cwiseAbs().maxCoeff() > tol) return false;
  if ((Em.adjoint() * pair.sigma * Em).cwiseAbs().maxCoeff() > tol) return false;
  CMatrix phi = Em.adjoint() * pair.sigma * Ep;
  if (!is_unitary(phi, tol)) return false;
  return gap_distance(N, split.plus) <= tol;
}

CMatrix special_relative_isometry(const EllipticPair& pair, const Subspace& N,
                                  const Tolerances& tol) {
  require_unitary_sigma(pair.sigma);
  IndefiniteForm form = pair.form();
  Split E = sigma_split(pair.sigma);
  CMatrix psi = isometry_of_lagrangian(form, E, N, tol).phi;
  CMatrix phi = isometry_of_lagrangian(form, E, pair.L_plus, tol).phi;
  return psi.adjoint() * phi;
}

namespace {

void require_anti_commuting(const EllipticPair& pair) {
  const double scale = std::max(1.0, pair.tau.cwiseAbs().maxCoeff());
  if ((pair.sigma * pair.tau + pair.tau * pair.sigma).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw Error(ErrorKind::NotAntiCommuting, "sigma does not anti-commute with tau");
}

}  // namespace

EllipticPair deform_special(const EllipticPair& pair, const Subspace& N, double alpha,
                            const Tolerances& tol) {
  require_anti_commuting(pair);
  require_unitary_sigma(pair.sigma);
  IndefiniteForm form = pair.form();
  Split E = sigma_split(pair.sigma);
  CMatrix psi = isometry_of_lagrangian(form, E, N, tol).phi;
  CMatrix phi = isometry_of_lagrangian(form, E, pair.L_plus, tol).phi;
  CMatrix omega = psi.adjoint() * phi;
  CVector vals;
  CMatrix vecs;
  normal_eigen(omega, vals, vecs);
  for (Eigen::Index j = 0; j < vals.size(); ++j)
    if (std::abs(vals(j) - 1.0) < tol.eig_match || std::abs(vals(j) + 1.0) < tol.eig_match)
      throw Error(ErrorKind::NotSpecial, "psi^{-1} phi has an eigenvalue at +-1");
  CMatrix phi_a = psi * spectral_arc(omega, [](double th) {
    return th < kPi ? kPi / 2 : 3 * kPi / 2;
  }, alpha);
  Subspace L_plus_a = graph_of(E, phi_a);
  Subspace L_minus_a = graph_of(E, -phi_a);
  return pair_from_split(pair.sigma, L_plus_a, L_minus_a, tol);
}

std::pair<EllipticPair, Subspace> normalize_special(const EllipticPair& pair, const Subspace& N,
                                                    const Tolerances& tol) {
  require_anti_commuting(pair);
  if (!is_transverse(N, pair.L_minus, tol) || !is_transverse(N, pair.L_plus, tol))
    throw Error(ErrorKind::NotSpecial, "N is not transverse to both stable subspaces");
  auto [p1, N1] = deform_unitarize(pair, N, 0.5, tol);
  EllipticPair p2 = deform_rho_to_pm_i(p1, 1.0, tol);
  return {deform_special(p2, N1, 1.0, tol), N1};
}

}  // namespace ebp
