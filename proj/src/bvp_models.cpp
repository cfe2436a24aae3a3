#include "ebp/bvp_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ebp {

namespace {

constexpr double kPi = std::numbers::pi;

double scale_of(const CMatrix& M) { return std::max(1.0, M.cwiseAbs().maxCoeff()); }

CMatrix kron(const Eigen::MatrixXd& A, const CMatrix& B) {
  CMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

CMatrix block_diag(const CMatrix& A, const CMatrix& B) {
  CMatrix out = CMatrix::Zero(A.rows() + B.rows(), A.cols() + B.cols());
  out.topLeftCorner(A.rows(), A.cols()) = A;
  out.bottomRightCorner(B.rows(), B.cols()) = B;
  return out;
}

// Staggered SBP pieces on [0, L]: p-grid of n + 1 nodes, m-grid of n cell midpoints.
struct StaggeredOps {
  Eigen::MatrixXd Wp, Wm, WpDpm, WmDmp, WpIpm, WmImp;
  Eigen::VectorXd ep0, epL, em0, emL;
};

StaggeredOps staggered_ops(int n, double L) {
  const double h = L / n;
  StaggeredOps o;
  o.Wp = Eigen::MatrixXd::Identity(n + 1, n + 1) * h;
  o.Wp(0, 0) = o.Wp(n, n) = h / 2;
  o.Wm = Eigen::MatrixXd::Identity(n, n) * h;
  Eigen::MatrixXd Dmp = Eigen::MatrixXd::Zero(n, n + 1);
  Eigen::MatrixXd Imp = Eigen::MatrixXd::Zero(n, n + 1);
  for (int i = 0; i < n; ++i) {
    Dmp(i, i) = -1 / h;
    Dmp(i, i + 1) = 1 / h;
    Imp(i, i) = Imp(i, i + 1) = 0.5;
  }
  o.ep0 = Eigen::VectorXd::Zero(n + 1);
  o.epL = Eigen::VectorXd::Zero(n + 1);
  o.ep0(0) = 1;
  o.epL(n) = 1;
  o.em0 = Eigen::VectorXd::Zero(n);
  o.emL = Eigen::VectorXd::Zero(n);
  o.em0(0) = 1.5;
  o.em0(1) = -0.5;
  o.emL(n - 1) = 1.5;
  o.emL(n - 2) = -0.5;
  Eigen::MatrixXd Bnd = o.epL * o.emL.transpose() - o.ep0 * o.em0.transpose();
  o.WpDpm = Bnd - Dmp.transpose() * o.Wm;
  o.WmDmp = o.Wm * Dmp;
  o.WmImp = o.Wm * Imp;
  o.WpIpm = o.WmImp.transpose();
  return o;
}

// u = R w with R^H Sigma R = [[0, I], [I, 0]].
CMatrix pairing_transform(const CMatrix& Sigma) {
  const int k = static_cast<int>(Sigma.rows());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (Sigma + Sigma.adjoint()));
  const RVector& s = es.eigenvalues();
  int neg = 0;
  while (neg < k && s(neg) < 0) ++neg;
  if (2 * neg != k) throw Error(ErrorKind::InvalidInput, "Sigma needs equal positive and negative parts");
  const int p = k / 2;
  const cplx c = std::polar(1.0, kPi / 4);
  CMatrix V(k, k);
  for (int j = 0; j < p; ++j) {
    V.col(j) = es.eigenvectors().col(neg + j) / std::sqrt(s(neg + j));
    V.col(p + j) = c * es.eigenvectors().col(j) / std::sqrt(-s(j));
  }
  CMatrix H(k, k);
  const CMatrix I = CMatrix::Identity(p, p) / std::sqrt(2.0);
  H << I, I, I, -I;
  return V * H;
}

}  // namespace

void validate_model(const IntervalModel& m, const Tolerances& tol) {
  const int k = m.dim();
  if (k == 0 || m.Sigma.cols() != k || m.T.rows() != k || m.T.cols() != k)
    throw Error(ErrorKind::InvalidInput, "Sigma and T must be square of equal size");
  if (!(m.length > 0)) throw Error(ErrorKind::InvalidInput, "length must be positive");
  if (hermitian_defect(m.Sigma) > 1e-10 * scale_of(m.Sigma) || hermitian_defect(m.T) > 1e-10 * scale_of(m.T))
    throw Error(ErrorKind::NotSelfAdjoint, "Sigma and T must be self-adjoint");
  if (smallest_singular_value(m.Sigma) <= tol.rank) throw Error(ErrorKind::SigmaSingular, "Sigma is singular");
  for (const Subspace* N : {&m.N0, &m.N1}) {
    if (N->ambient_dim() != k) throw Error(ErrorKind::AmbientMismatch, "boundary subspace");
    if (!is_lagrangian(IndefiniteForm{m.Sigma, k}, *N, tol))
      throw Error(ErrorKind::NotLagrangian, "boundary subspace is not Lagrangian for Sigma");
  }
}

AbstractBVP interval_assemble_sbp(const IntervalModel& model, int n) {
  if (n < 8) throw Error(ErrorKind::GridTooCoarse, "interval grid needs n >= 8");
  validate_model(model);
  const int k = model.dim(), p = k / 2;
  const CMatrix R = pairing_transform(model.Sigma);
  const CMatrix Tp = R.adjoint() * model.T * R;
  const CMatrix M = R.adjoint() * R;
  const CMatrix Ra = R.leftCols(p), Rb = R.rightCols(p);
  const StaggeredOps o = staggered_ops(n, model.length);
  const int na = (n + 1) * p, nb = n * p, d = na + nb;
  const CMatrix Ip = CMatrix::Identity(p, p);
  auto blk = [p](const CMatrix& X, int r, int c) { return X.block(r * p, c * p, p, p); };

  AbstractBVP bvp;
  bvp.K = CMatrix::Zero(d, d);
  bvp.K.topLeftCorner(na, na) = kron(o.Wp, blk(Tp, 0, 0));
  bvp.K.topRightCorner(na, nb) = kron(o.WpDpm, -I1 * Ip) + kron(o.WpIpm, blk(Tp, 0, 1));
  bvp.K.bottomLeftCorner(nb, na) = kron(o.WmDmp, -I1 * Ip) + kron(o.WmImp, blk(Tp, 1, 0));
  bvp.K.bottomRightCorner(nb, nb) = kron(o.Wm, blk(Tp, 1, 1));
  bvp.G = CMatrix::Zero(d, d);
  bvp.G.topLeftCorner(na, na) = kron(o.Wp, blk(M, 0, 0));
  bvp.G.topRightCorner(na, nb) = kron(o.WpIpm, blk(M, 0, 1));
  bvp.G.bottomLeftCorner(nb, na) = kron(o.WmImp, blk(M, 1, 0));
  bvp.G.bottomRightCorner(nb, nb) = kron(o.Wm, blk(M, 1, 1));

  bvp.gamma = CMatrix::Zero(2 * k, d);
  bvp.gamma.topLeftCorner(k, na) = kron(o.ep0.transpose(), Ra);
  bvp.gamma.topRightCorner(k, nb) = kron(o.em0.transpose(), Rb);
  bvp.gamma.bottomLeftCorner(k, na) = kron(o.epL.transpose(), Ra);
  bvp.gamma.bottomRightCorner(k, nb) = kron(o.emL.transpose(), Rb);
  bvp.Sigma_b = block_diag(I1 * model.Sigma, -I1 * model.Sigma);
  bvp.Pi = block_diag(model.N0.projector(), model.N1.projector());
  return bvp;
}

double check_lagrange_identity(const AbstractBVP& bvp) {
  CMatrix R = bvp.K - bvp.K.adjoint() - bvp.gamma.adjoint() * bvp.Sigma_b * bvp.gamma;
  return R.cwiseAbs().maxCoeff();
}

bool boundary_projector_selfadjoint(const CMatrix& Pi, const CMatrix& Sigma_b, double tol) {
  if (Pi.rows() != Pi.cols() || Sigma_b.rows() != Pi.rows() || Sigma_b.cols() != Pi.cols()) return false;
  if ((Pi * Pi - Pi).cwiseAbs().maxCoeff() > tol || hermitian_defect(Pi) > tol) return false;
  Subspace im = subspace_from_columns(Pi, {}, static_cast<int>(Pi.rows()));
  Subspace ker = orthogonal_complement(im);
  if (im.dim() + ker.dim() != Pi.rows()) return false;
  Subspace sigma_im = subspace_from_columns(Sigma_b * im.frame(), {}, static_cast<int>(Pi.rows()));
  return gap_distance(sigma_im, ker) <= tol;
}

Compression compress_AGamma(const AbstractBVP& bvp, bool with_basis) {
  if (!boundary_projector_selfadjoint(bvp.Pi, bvp.Sigma_b))
    throw Error(ErrorKind::NotSelfAdjointBC, "boundary projector is not self-adjoint");
  const int d = bvp.dim();
  Subspace ker_pi = orthogonal_complement(subspace_from_columns(bvp.Pi, {}, bvp.boundary_dim()));
  const CMatrix C = ker_pi.frame().adjoint() * bvp.gamma;
  // Columns touched by the constraint; the rest of Ker Gamma is spanned by unit vectors.
  std::vector<int> touched, free;
  for (int j = 0; j < d; ++j)
    (C.col(j).cwiseAbs().maxCoeff() > 0 ? touched : free).push_back(j);
  CMatrix CJ(C.rows(), touched.size());
  for (std::size_t j = 0; j < touched.size(); ++j) CJ.col(j) = C.col(touched[j]);
  const CMatrix NJ = null_space(CJ, 1e-12);
  const int nf = static_cast<int>(free.size()), dz = nf + static_cast<int>(NJ.cols());
  // Z^H A Z for Z = [unit columns on free | NJ on touched rows].
  auto compress = [&](const CMatrix& A) {
    CMatrix AZ(d, dz);
    for (int j = 0; j < nf; ++j) AZ.col(j) = A.col(free[j]);
    CMatrix At(d, touched.size());
    for (std::size_t j = 0; j < touched.size(); ++j) At.col(j) = A.col(touched[j]);
    AZ.rightCols(NJ.cols()) = At * NJ;
    CMatrix out(dz, dz), Rt(touched.size(), dz);
    for (int i = 0; i < nf; ++i) out.row(i) = AZ.row(free[i]);
    for (std::size_t i = 0; i < touched.size(); ++i) Rt.row(i) = AZ.row(touched[i]);
    out.bottomRows(NJ.cols()) = NJ.adjoint() * Rt;
    return out;
  };
  CMatrix Gz = compress(bvp.G);
  CMatrix Kz = compress(bvp.K);
  Eigen::LLT<CMatrix> llt(0.5 * (Gz + Gz.adjoint()));
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotSelfAdjointBC, "weight not positive on Ker Gamma");
  const auto L = llt.matrixL();
  CMatrix X = L.solve(Kz);                              // L^{-1} Kz
  Compression c;
  c.H = L.solve(X.adjoint()).adjoint();                 // L^{-1} Kz L^{-H}
  if (with_basis) {
    CMatrix Z = CMatrix::Zero(d, dz);
    for (int j = 0; j < nf; ++j) Z(free[j], j) = 1.0;
    for (std::size_t j = 0; j < touched.size(); ++j) Z.row(touched[j]).tail(NJ.cols()) = NJ.row(j);
    c.Q = L.solve(Z.adjoint()).adjoint();               // Z L^{-H}
  }
  return c;
}

double hermitian_defect_of(const Compression& c) { return (c.H - c.H.adjoint()).cwiseAbs().maxCoeff(); }

RVector compression_eigenvalues(const Compression& c) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (c.H + c.H.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

RVector compression_spectrum(const IntervalModel& model, int n) {
  return compression_eigenvalues(compress_AGamma(interval_assemble_sbp(model, n), false));
}

DualityReport check_duality(const AbstractBVP& bvp, double tol) {
  const Compression c = compress_AGamma(bvp);
  Subspace ker_pi = orthogonal_complement(subspace_from_columns(bvp.Pi, {}, bvp.boundary_dim()));
  const CMatrix& F = ker_pi.frame();
  const int d = bvp.dim();
  const int r = static_cast<int>(c.Q.cols());
  // A (+) Gamma in G-orthonormal coordinates of Ker Gamma and orthonormal coordinates of Ker Pi.
  CMatrix T(r + F.cols(), d);
  T.topRows(r) = c.Q.adjoint() * bvp.K;
  T.bottomRows(F.cols()) = F.adjoint() * bvp.gamma;
  Eigen::BDCSVD<CMatrix> svd(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double cut = 1e-9 * std::max(1.0, s(0));
  int rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  const CMatrix comp = svd.matrixU().rightCols(T.rows() - rank);
  const CMatrix ker = svd.matrixV().rightCols(d - rank);

  DualityReport rep;
  rep.complement_dim = static_cast<int>(comp.cols());
  rep.image_dim = static_cast<int>(ker.cols());
  CMatrix img(T.rows(), ker.cols());
  const CMatrix gF = bvp.gamma.adjoint() * F;
  for (Eigen::Index j = 0; j < ker.cols(); ++j) {
    const CVector u = ker.col(j);
    const CVector x = F * gF.colPivHouseholderQr().solve(bvp.K * u);
    const double unorm = std::sqrt(std::abs(u.dot(bvp.G * u)));
    rep.boundary_residual = std::max(rep.boundary_residual, x.norm() / unorm);
    img.col(j).head(r) = c.Q.adjoint() * bvp.G * u;
    img.col(j).tail(F.cols()) = F.adjoint() * (bvp.Sigma_b * (bvp.gamma * u) - x);
  }
  if (rep.complement_dim != rep.image_dim) return rep;
  if (rep.image_dim == 0) {
    rep.gap = 0.0;
  } else {
    rep.gap = gap_distance(Subspace(comp), subspace_from_columns(img, {}, static_cast<int>(T.rows())));
  }
  rep.ok = rep.gap <= tol;
  return rep;
}

double reduction_gap(const Compression& c, double rel_tol) {
  Eigen::BDCSVD<CMatrix> svd(c.H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double cut = rel_tol * std::max(1.0, s(0));
  int rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  const int n = static_cast<int>(c.H.rows());
  Subspace ker(svd.matrixV().rightCols(n - rank));
  Subspace range_perp(svd.matrixU().rightCols(n - rank));
  if (ker.dim() == 0) return 0.0;
  return gap_distance(ker, range_perp);
}

namespace {

double golden_min(const std::function<double(double)>& f, double a, double b) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

void local_minima(const std::vector<double>& xs, const std::vector<double>& vals,
                  std::vector<std::pair<double, double>>& brackets) {
  for (std::size_t i = 1; i + 1 < xs.size(); ++i)
    if (vals[i] <= vals[i - 1] && vals[i] < vals[i + 1]) brackets.emplace_back(xs[i - 1], xs[i + 1]);
}

}  // namespace

std::vector<double> dip_eigenvalues(const std::function<CMatrix(double)>& F, double lo, double hi,
                                    int steps) {
  if (!(hi > lo) || steps < 8) throw Error(ErrorKind::BadParameters, "window and steps");
  auto smin = [&F](double x) { return smallest_singular_value(F(x)); };
  const double h = (hi - lo) / steps;
  std::vector<double> xs, vals;
  for (int i = -1; i <= steps + 1; ++i) {
    xs.push_back(lo + i * h);
    vals.push_back(smin(xs.back()));
  }
  std::vector<std::pair<double, double>> coarse;
  local_minima(xs, vals, coarse);

  std::vector<std::pair<double, int>> roots;
  for (auto [a, b] : coarse) {
    std::vector<double> sx, sv;
    const int sub = 64;
    for (int i = 0; i <= sub; ++i) {
      sx.push_back(a + (b - a) * i / sub);
      sv.push_back(smin(sx.back()));
    }
    std::vector<std::pair<double, double>> fine;
    local_minima(sx, sv, fine);
    if (fine.empty()) fine.emplace_back(a, b);
    for (auto [fa, fb] : fine) {
      const double x = golden_min(smin, fa, fb);
      const CMatrix Fx = F(x);
      Eigen::JacobiSVD<CMatrix> svd(Fx);
      const RVector& s = svd.singularValues();
      const double scale = std::max(1.0, s(0));
      int mult = 0;
      for (Eigen::Index j = s.size() - 1; j >= 0 && s(j) <= 1e-7 * scale; --j) ++mult;
      if (mult == 0) continue;
      const Eigen::Index next = s.size() - 1 - mult;
      if (next >= 0 && s(next) < 1e-5 * scale)
        throw Error(ErrorKind::ClusteredEigenvalues, "unresolved eigenvalue cluster");
      roots.emplace_back(x, mult);
    }
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  double last = -std::numeric_limits<double>::infinity();
  for (auto [x, mult] : roots) {
    if (x < lo || x > hi) continue;
    if (std::abs(x - last) <= 1e-9 * std::max(1.0, std::abs(x))) continue;
    last = x;
    for (int j = 0; j < mult; ++j) out.push_back(x);
  }
  return out;
}

CMatrix transfer_matrix(const CMatrix& Sigma, const CMatrix& T, double lambda, double length) {
  const int k = static_cast<int>(Sigma.rows());
  CMatrix G = Sigma.partialPivLu().solve(lambda * CMatrix::Identity(k, k) - T);
  return expm(I1 * length * G);
}

std::vector<double> shooting_eigenvalues(const IntervalModel& model, double lo, double hi, int steps) {
  validate_model(model);
  const CMatrix N1perp = orthogonal_complement(model.N1).frame();
  const CMatrix& N0 = model.N0.frame();
  auto F = [&](double lam) -> CMatrix {
    return N1perp.adjoint() * transfer_matrix(model.Sigma, model.T, lam, model.length) * N0;
  };
  return dip_eigenvalues(F, lo, hi, steps);
}

StandardOperatorAssembly standard_operator(const StandardParams& params) {
  const StandardParams& sp = params;
  if (sp.fplus_dim < 0 || sp.fminus_dim < 0 || sp.fplus_dim + sp.fminus_dim == 0)
    throw Error(ErrorKind::BadParameters, "field dimensions");
  if (!(sp.lambda_plus > 0) || !(sp.lambda_minus > 0) || !(sp.lambda > 0))
    throw Error(ErrorKind::BadParameters, "lambda values must be positive");
  if (sp.K < 0 || sp.n < 8) throw Error(ErrorKind::BadParameters, "truncation and grid");
  const int n = sp.n;
  const double h = 1.0 / n;
  StandardOperatorAssembly a;
  a.params = sp;
  auto cutoff = sp.cutoff;
  if (!cutoff) throw Error(ErrorKind::BadParameters, "cutoff missing");
  a.W = RVector::Constant(n + 1, h);
  a.W(0) = a.W(n) = h / 2;
  a.phi.resize(n + 1);
  for (int i = 0; i <= n; ++i) a.phi(i) = cutoff(i * h);
  if (std::abs(a.phi(0) - 1) > 1e-12 || std::abs(a.phi(n)) > 1e-12)
    throw Error(ErrorKind::BadParameters, "cutoff must equal 1 at the boundary and vanish at x = 1");

  Eigen::MatrixXd Dx = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Dx(0, 0) = -1 / h;
  Dx(0, 1) = 1 / h;
  Dx(n, n - 1) = -1 / h;
  Dx(n, n) = 1 / h;
  for (int i = 1; i < n; ++i) {
    Dx(i, i - 1) = -0.5 / h;
    Dx(i, i + 1) = 0.5 / h;
  }
  const Eigen::MatrixXd W = a.W.asDiagonal();
  const Eigen::MatrixXd Phi = a.phi.asDiagonal();
  const Eigen::MatrixXd Psi2 = (RVector::Ones(n + 1) - a.phi).cwiseAbs2().asDiagonal();
  Eigen::MatrixXd WdPhi = -(W * Phi * Dx + Dx.transpose() * Phi * W);
  WdPhi(n, n) += a.phi(n);
  WdPhi(0, 0) -= a.phi(0);
  const Eigen::MatrixXd dPhi = a.W.cwiseInverse().asDiagonal() * WdPhi;
  const CMatrix PhiD = (Phi * Dx).cast<cplx>();

  const int p = sp.fplus_dim, q = sp.fminus_dim, f = p + q, m = n + 1;
  for (int k = -sp.K; k <= sp.K; ++k) {
    StandardMode mode;
    mode.k = k;
    mode.P = CMatrix::Zero(f * m, f * m);
    mode.Pt_prime = CMatrix::Zero(f * m, f * m);
    const double Lam = std::abs(k) + sp.lambda;
    for (int j = 0; j < f; ++j) {
      const double s = j < p ? 1.0 : -1.0;
      const double Ls = std::abs(k) + (j < p ? sp.lambda_plus : sp.lambda_minus);
      const CMatrix common = (I1 * Ls * Phi + I1 * Lam * Psi2).cast<cplx>();
      mode.P.block(j * m, j * m, m, m) = -I1 * s * PhiD + common;
      mode.Pt_prime.block(j * m, j * m, m, m) = I1 * s * PhiD + common + I1 * s * dPhi.cast<cplx>();
    }
    mode.B = CMatrix::Zero(q, f * m);
    for (int j = p; j < f; ++j) mode.B(j - p, j * m) = 1.0;
    mode.B_sa = CMatrix::Zero(f, 2 * f * m);
    for (int j = 0; j < p; ++j) mode.B_sa(j, j * m) = 1.0;                   // u+
    for (int j = p; j < f; ++j) mode.B_sa(j, (f + j) * m) = 1.0;             // v-
    a.modes.push_back(std::move(mode));
  }
  return a;
}

CMatrix standard_psa(const StandardOperatorAssembly&, const StandardMode& m, double t) {
  const int N = static_cast<int>(m.P.rows());
  const CMatrix Id = CMatrix::Identity(N, N);
  CMatrix S = CMatrix::Zero(2 * N, 2 * N);
  S.topRightCorner(N, N) = m.P + I1 * t * Id;
  S.bottomLeftCorner(N, N) = -m.Pt_prime - I1 * t * Id;
  return S;
}

namespace {

RVector full_weights(const StandardOperatorAssembly& a, int copies) {
  const int m = static_cast<int>(a.W.size());
  RVector w(copies * m);
  for (int c = 0; c < copies; ++c) w.segment(c * m, m) = a.W;
  return w;
}

// W^{-1/2}-scaled selection of the dofs left free by a constraint with unit-vector rows.
CMatrix free_basis(const CMatrix& B, const RVector& w) {
  const int N = static_cast<int>(w.size());
  std::vector<int> keep;
  for (int j = 0; j < N; ++j)
    if (B.rows() == 0 || B.col(j).cwiseAbs().maxCoeff() == 0) keep.push_back(j);
  CMatrix Q = CMatrix::Zero(N, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) Q(keep[c], c) = 1.0 / std::sqrt(w(keep[c]));
  return Q;
}

}  // namespace

double garding_margin(const StandardOperatorAssembly& a, double t) {
  double margin = std::numeric_limits<double>::infinity();
  const RVector w = full_weights(a, a.field_dim());
  for (const auto& m : a.modes) {
    const CMatrix WP = w.cast<cplx>().asDiagonal() * m.P;
    const CMatrix Him = (WP - WP.adjoint()) / (2.0 * I1);
    const CMatrix Q = free_basis(m.B, w);
    CMatrix Hc = Q.adjoint() * Him * Q;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (Hc + Hc.adjoint()), Eigen::EigenvaluesOnly);
    margin = std::min(margin, es.eigenvalues()(0) + t);
  }
  return margin;
}

double psa_hermitian_defect(const StandardOperatorAssembly& a, double t) {
  double defect = 0.0;
  const RVector w = full_weights(a, 2 * a.field_dim());
  for (const auto& m : a.modes) {
    const CMatrix Q = free_basis(m.B_sa, w);
    const CMatrix H = Q.adjoint() * w.cast<cplx>().asDiagonal() * standard_psa(a, m, t) * Q;
    defect = std::max(defect, (H - H.adjoint()).cwiseAbs().maxCoeff());
  }
  return defect;
}

double psa_bsa_sigma_min(const StandardOperatorAssembly& a, double t) {
  double best = std::numeric_limits<double>::infinity();
  const RVector w = full_weights(a, 2 * a.field_dim());
  const RVector ws = w.cwiseSqrt();
  const RVector wis = ws.cwiseInverse();
  for (const auto& m : a.modes) {
    const CMatrix S = standard_psa(a, m, t);
    CMatrix M(S.rows() + m.B_sa.rows(), S.cols());
    M.topRows(S.rows()) = ws.cast<cplx>().asDiagonal() * S * wis.cast<cplx>().asDiagonal();
    M.bottomRows(m.B_sa.rows()) = m.B_sa * wis.cast<cplx>().asDiagonal();
    best = std::min(best, smallest_singular_value(M));
  }
  return best;
}

CircleModel glue_double(const IntervalModel& model) {
  validate_model(model);
  return CircleModel{model.Sigma, model.T, 2 * model.length};
}

std::vector<double> circle_eigenvalues(const CircleModel& c, double lo, double hi, int steps) {
  const int k = static_cast<int>(c.Sigma.rows());
  auto F = [&](double lam) -> CMatrix {
    return transfer_matrix(c.Sigma, c.T, lam, c.circumference) - CMatrix::Identity(k, k);
  };
  return dip_eigenvalues(F, lo, hi, steps);
}

IntervalModel fold_double(const IntervalModel& model) {
  validate_model(model);
  const int k = model.dim();
  IntervalModel out;
  out.Sigma = block_diag(model.Sigma, -model.Sigma);
  out.T = block_diag(model.T, model.T);
  out.length = model.length;
  CMatrix diag(2 * k, k);
  diag << CMatrix::Identity(k, k), CMatrix::Identity(k, k);
  out.N0 = subspace_from_columns(diag);
  out.N1 = out.N0;
  return out;
}

namespace {

bool is_standard_sigma(const CMatrix& S) {
  const int k = static_cast<int>(S.rows());
  if (k % 2 != 0 || S.cols() != k) return false;
  const int p = k / 2;
  CMatrix ref = CMatrix::Zero(k, k);
  ref.topRightCorner(p, p).setIdentity();
  ref.bottomLeftCorner(p, p).setIdentity();
  return (S - ref).cwiseAbs().maxCoeff() <= 1e-12;
}

}  // namespace

IntervalModel standard_partner(const IntervalModel& model, double coupling) {
  validate_model(model);
  if (!is_standard_sigma(model.Sigma))
    throw Error(ErrorKind::IncompatibleModels, "gluing needs Sigma = [[0, 1], [1, 0]]");
  const int k = model.dim(), p = k / 2;
  IntervalModel out;
  out.Sigma = -model.Sigma;
  out.T = CMatrix::Zero(k, k);
  out.T.topRightCorner(p, p) = I1 * coupling * CMatrix::Identity(p, p);
  out.T.bottomLeftCorner(p, p) = -I1 * coupling * CMatrix::Identity(p, p);
  out.length = model.length;
  CMatrix first = CMatrix::Zero(k, p), second = CMatrix::Zero(k, p);
  first.topRows(p).setIdentity();
  second.bottomRows(p).setIdentity();
  out.N0 = Subspace(first);
  out.N1 = Subspace(second);
  return out;
}

Subspace btau_kernel(const IntervalModel& m1, const IntervalModel& m2, double tau) {
  if (!is_standard_sigma(m1.Sigma) || m2.Sigma.rows() != m1.Sigma.rows() ||
      (m2.Sigma + m1.Sigma).cwiseAbs().maxCoeff() > 1e-12 || std::abs(m1.length - m2.length) > 1e-12)
    throw Error(ErrorKind::IncompatibleModels, "models cannot be glued");
  const int k = m1.dim(), p = k / 2;
  CMatrix cols = CMatrix::Zero(2 * k, k);
  for (int j = 0; j < p; ++j) {
    cols(j, j) = tau;           // u1 = tau u2
    cols(k + j, j) = 1.0;       // u2 free
    cols(p + j, p + j) = 1.0;   // v1 free
    cols(k + p + j, p + j) = tau;  // v2 = tau v1
  }
  return subspace_from_columns(cols);
}

CMatrix btau_condition(const IntervalModel& m1, const IntervalModel& m2, double tau) {
  return btau_kernel(m1, m2, tau).projector();
}

IntervalModel glue_pair(const IntervalModel& m1, const IntervalModel& m2, double tau) {
  validate_model(m1);
  validate_model(m2);
  IntervalModel out;
  out.Sigma = block_diag(m1.Sigma, m2.Sigma);
  out.T = block_diag(m1.T, m2.T);
  out.length = m1.length;
  out.N0 = btau_kernel(m1, m2, tau);
  out.N1 = Subspace(block_diag(m1.N1.frame(), m2.N1.frame()));
  return out;
}

}  // namespace ebp
