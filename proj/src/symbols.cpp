#include "ebp/symbols.hpp"

#include "ebp/bott.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ebp {

namespace {

constexpr double kPi = std::numbers::pi;

double scale_of(const CMatrix& M) { return std::max(1.0, M.cwiseAbs().maxCoeff()); }

cplx graph_det(const Split& s, const Subspace& L, const Tolerances& tol) {
  CMatrix a = s.plus.frame().adjoint() * L.frame();
  CMatrix b = s.minus.frame().adjoint() * L.frame();
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw Error(ErrorKind::NotGraph, "subspace has the wrong dimension for a graph");
  if (a.rows() == 0) return 1.0;
  if (smallest_singular_value(a) <= tol.ellipticity_margin ||
      smallest_singular_value(b) <= tol.ellipticity_margin)
    throw Error(ErrorKind::NotGraph, "subspace meets E+ or E- nontrivially");
  return b.determinant() / a.determinant();
}

void require_boundary_conditions(const SampledSymbolFamily& fam) {
  for (const auto& s : fam.samples)
    if (!s.N) throw Error(ErrorKind::MissingBoundaryCondition, "sample without N");
}

}  // namespace

bool check_order_one(const SampledSymbolFamily& fam, const std::vector<double>& theta_grid,
                     double tol) {
  if (!fam.half_circle) return false;
  for (const auto& s : fam.samples)
    for (double th : theta_grid) {
      CMatrix expect = s.sigma * std::cos(th) + s.tau * std::sin(th);
      CMatrix got = fam.half_circle(s, th);
      if ((got - expect).cwiseAbs().maxCoeff() > tol * scale_of(expect)) return false;
    }
  return true;
}

ConditionReport check_conditions(const SampledSymbolFamily& fam, const Tolerances& tol) {
  require_boundary_conditions(fam);
  ConditionReport r;
  ConditionMargins& m = r.margins;
  m.ellipticity = std::numeric_limits<double>::infinity();
  m.special = std::numeric_limits<double>::infinity();
  bool lagrangian = true;
  bool decay_ok = true;
  for (const auto& s : fam.samples) {
    EllipticPair pair = make_elliptic_pair(s.sigma, s.tau, tol);
    const Subspace& N = *s.N;
    IndefiniteForm form = pair.form();
    m.lagrangian_residual = std::max(m.lagrangian_residual, lagrangian_residual(form, N) / scale_of(s.sigma));
    lagrangian = lagrangian && is_lagrangian(form, N, tol);
    // Decaying space: L_minus, confirmed column by column against the half-line ODE.
    for (int j = 0; j < pair.L_minus.dim(); ++j)
      decay_ok = decay_ok && ode_decay_check(pair, pair.L_minus.frame().col(j)).decaying;
    const double t_minus = transversality_margin(N, pair.L_minus);
    const double t_plus = transversality_margin(N, pair.L_plus);
    m.ellipticity = std::min(m.ellipticity, t_minus);
    m.special = std::min(m.special, std::min(t_minus, t_plus));
    m.anticommutator = std::max(m.anticommutator,
        (s.sigma * s.tau + s.tau * s.sigma).cwiseAbs().maxCoeff() / scale_of(s.tau));
  }
  for (int iy = 0; iy < fam.grid_size(); ++iy) {
    const auto& p = fam.at(iy, 1);
    const auto& q = fam.at(iy, -1);
    m.bundle_defect = std::max(m.bundle_defect, (p.tau - q.tau).cwiseAbs().maxCoeff());
    m.bundle_defect = std::max(m.bundle_defect, (p.sigma - q.sigma).cwiseAbs().maxCoeff());
    m.bundle_defect = std::max(m.bundle_defect, gap_distance(*p.N, *q.N));
  }
  r.self_adjoint = lagrangian;
  r.elliptic = decay_ok && m.ellipticity > tol.ellipticity_margin;
  r.bundle_like = m.bundle_defect <= 1e-9;
  r.anti_commuting = m.anticommutator <= 1e-9;
  r.special = r.elliptic && m.special > tol.ellipticity_margin;
  return r;
}

double standard_cutoff(double x) {
  auto h = [](double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; };
  const double a = std::abs(x);
  const double s = (a - 0.25) / 0.5;
  if (s <= 0) return 1.0;
  if (s >= 1) return 0.0;
  return h(1 - s) / (h(1 - s) + h(s));
}

SampledSymbolFamily elementary_symbol(int fplus_dim, int fminus_dim, double lambda_plus,
                                      double lambda_minus, double lambda,
                                      const std::function<double(double)>& cutoff, int grid) {
  if (fplus_dim < 0 || fminus_dim < 0 || fplus_dim + fminus_dim == 0 || grid < 3)
    throw Error(ErrorKind::BadParameters, "dimensions and grid");
  if (!(lambda_plus > 0) || !(lambda_minus > 0) || !(lambda > 0))
    throw Error(ErrorKind::BadParameters, "lambda values must be positive");
  if (!cutoff || std::abs(cutoff(0.0) - 1) > 1e-12 || std::abs(cutoff(0.05) - 1) > 1e-12 ||
      std::abs(cutoff(-0.05) - 1) > 1e-12 || cutoff(0.999) != 0.0 || cutoff(-0.999) != 0.0)
    throw Error(ErrorKind::BadParameters, "cutoff must be 1 near 0 and vanish near +-1");
  const int p = fplus_dim, q = fminus_dim, n = p + q;
  RVector S(n), Lam(n);
  for (int j = 0; j < n; ++j) {
    S(j) = j < p ? 1.0 : -1.0;
    Lam(j) = j < p ? lambda_plus : lambda_minus;
  }
  // Fields (u+, u-, v+, v-).
  CMatrix sigma = CMatrix::Zero(2 * n, 2 * n);
  sigma.topRightCorner(n, n) = S.cast<cplx>().asDiagonal();
  sigma.bottomLeftCorner(n, n) = S.cast<cplx>().asDiagonal();
  CMatrix tau = CMatrix::Zero(2 * n, 2 * n);
  tau.topRightCorner(n, n) = (I1 * Lam.cast<cplx>()).asDiagonal();
  tau.bottomLeftCorner(n, n) = (-I1 * Lam.cast<cplx>()).asDiagonal();
  CMatrix Nf = CMatrix::Zero(2 * n, n);
  for (int j = 0; j < p; ++j) Nf(n + j, j) = 1.0;      // v+
  for (int j = p; j < n; ++j) Nf(j, j) = 1.0;          // u-
  Subspace N(Nf);

  SampledSymbolFamily fam;
  for (int iy = 0; iy < grid; ++iy) {
    const double y = 2 * kPi * iy / grid;
    fam.boundary_grid.push_back(y);
    for (int u : {1, -1}) fam.samples.push_back(SymbolSample{y, u, sigma, tau, N});
  }
  // Symbol of [[0, P], [P^*, 0]] with P = diag(xi + i lambda+ |eta|, -xi + i lambda- |eta|).
  fam.half_circle = [S, Lam, n](const SymbolSample& s, double theta) {
    const double xi = std::cos(theta);
    const double eta = s.u * std::sin(theta);
    CVector d(n);
    for (int j = 0; j < n; ++j) d(j) = S(j) * xi + I1 * Lam(j) * std::abs(eta);
    CMatrix full = CMatrix::Zero(2 * n, 2 * n);
    full.topRightCorner(n, n) = d.asDiagonal();
    full.bottomLeftCorner(n, n) = d.conjugate().asDiagonal();
    return full;
  };
  return fam;
}

int obstruction_winding(const SampledSymbolFamily& fam, const Tolerances& tol) {
  require_boundary_conditions(fam);
  std::vector<cplx> ratio;
  for (int iy = 0; iy <= fam.grid_size(); ++iy) {
    const int k = iy % fam.grid_size();
    const Split s = sigma_split(fam.at(k, 1).sigma);
    ratio.push_back(graph_det(s, *fam.at(k, 1).N, tol) / graph_det(s, *fam.at(k, -1).N, tol));
  }
  return phase_winding(ratio);
}

int epsilon_winding(const SampledSymbolFamily& fam, int u, const Tolerances& tol) {
  const CMatrix& sigma0 = fam.at(0, u).sigma;
  for (const auto& s : fam.samples)
    if ((s.sigma - sigma0).cwiseAbs().maxCoeff() > 1e-12)
      throw Error(ErrorKind::BadParameters, "epsilon_winding needs a constant sigma");
  const Split split = sigma_split(sigma0);
  std::vector<cplx> dets;
  for (int iy = 0; iy <= fam.grid_size(); ++iy) {
    const auto& s = fam.at(iy % fam.grid_size(), u);
    dets.push_back(graph_det(split, make_elliptic_pair(s.sigma, s.tau, tol).L_plus, tol));
  }
  return phase_winding(dets);
}

std::vector<CMatrix> boundary_symbol_upsilon(const SampledSymbolFamily& fam,
                                             const Tolerances& tol) {
  require_boundary_conditions(fam);
  std::vector<CMatrix> out;
  for (const auto& s : fam.samples) {
    EllipticPair pair = make_elliptic_pair(s.sigma, s.tau, tol);
    IndefiniteForm form = pair.form();
    Split E = sigma_split(s.sigma);
    CMatrix psi = isometry_of_lagrangian(form, E, *s.N, tol).phi;
    CMatrix phi = isometry_of_lagrangian(form, E, pair.L_plus, tol).phi;
    CMatrix omega = psi.adjoint() * phi;
    CVector vals;
    CMatrix vecs;
    normal_eigen(omega, vals, vecs);
    RVector sign(vals.size());
    for (Eigen::Index j = 0; j < vals.size(); ++j) {
      if (std::abs(vals(j) - 1.0) < tol.eig_match || std::abs(vals(j) + 1.0) < tol.eig_match)
        throw Error(ErrorKind::NotSpecial, "psi^{-1} phi has an eigenvalue at +-1");
      sign(j) = vals(j).imag() > 0 ? 1.0 : -1.0;
    }
    CMatrix ups = vecs * sign.cast<cplx>().asDiagonal() * vecs.adjoint();
    out.push_back(0.5 * (ups + ups.adjoint()));
  }
  return out;
}

CMatrix cayley(const CMatrix& f) {
  const int n = static_cast<int>(f.rows());
  const CMatrix Id = CMatrix::Identity(n, n);
  return (Id + f).partialPivLu().solve(Id - f);
}

std::pair<Subspace, Subspace> skew_eigenbundles(const CMatrix& f) {
  // f = i H with H Hermitian.
  CMatrix H = -I1 * f;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (H + H.adjoint()));
  const RVector& w = es.eigenvalues();
  int neg = 0;
  while (neg < w.size() && w(neg) < 0) ++neg;
  const int n = static_cast<int>(w.size());
  return {Subspace(es.eigenvectors().rightCols(n - neg)), Subspace(es.eigenvectors().leftCols(neg))};
}

DiracData dirac_like(const std::vector<double>& grid, const std::vector<CMatrix>& f,
                     const std::vector<CMatrix>& tau_bar, const Tolerances& tol) {
  if (f.size() != grid.size() || tau_bar.size() != 2 * grid.size() || grid.empty())
    throw Error(ErrorKind::AmbientMismatch, "dirac_like sample counts");
  const int n = static_cast<int>(f.front().rows());
  DiracData d;
  d.grid = grid;
  d.f = f;
  d.tau_bar = tau_bar;
  for (std::size_t iy = 0; iy < grid.size(); ++iy) {
    const CMatrix& fy = f[iy];
    if (fy.rows() != n || fy.cols() != n) throw Error(ErrorKind::AmbientMismatch, "f shape");
    if ((fy + fy.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale_of(fy))
      throw Error(ErrorKind::NotSkewAdjoint, "f is not skew-adjoint");
    if (smallest_singular_value(fy) <= tol.rank) throw Error(ErrorKind::NotInvertible, "f is singular");
    for (int k = 0; k < 2; ++k) {
      const CMatrix& t = tau_bar[2 * iy + k];
      if (t.rows() != n || t.cols() != n) throw Error(ErrorKind::AmbientMismatch, "tau shape");
      if ((t + t.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale_of(t))
        throw Error(ErrorKind::NotSkewAdjoint, "tau_bar is not skew-adjoint");
      if ((fy * t - t * fy).cwiseAbs().maxCoeff() > 1e-9 * scale_of(fy) * scale_of(t))
        throw Error(ErrorKind::NotEquivariant, "f does not commute with tau_bar");
    }
    d.psi.push_back(cayley(fy));
    CMatrix cols(2 * n, n);
    cols << CMatrix::Identity(n, n), fy;
    d.N.push_back(subspace_from_columns(cols, tol));
    auto [Lp, Lm] = skew_eigenbundles(fy);
    d.L_plus.push_back(Lp);
    d.L_minus.push_back(Lm);
  }
  return d;
}

SampledSymbolFamily dirac_family(const DiracData& d) {
  const int n = d.fiber_dim();
  CMatrix sigma = CMatrix::Zero(2 * n, 2 * n);
  sigma.topRightCorner(n, n).setIdentity();
  sigma.bottomLeftCorner(n, n).setIdentity();
  SampledSymbolFamily fam;
  fam.boundary_grid = d.grid;
  for (std::size_t iy = 0; iy < d.grid.size(); ++iy)
    for (int k = 0; k < 2; ++k) {
      const CMatrix& t = d.tau_bar[2 * iy + k];
      CMatrix tau = CMatrix::Zero(2 * n, 2 * n);
      tau.topRightCorner(n, n) = t.adjoint();
      tau.bottomLeftCorner(n, n) = t;
      fam.samples.push_back(SymbolSample{d.grid[iy], k == 0 ? 1 : -1, sigma, tau, d.N[iy]});
    }
  return fam;
}

std::pair<RestrictedSymbol, RestrictedSymbol> tau_pm_split(const DiracData& d) {
  RestrictedSymbol plus, minus;
  for (std::size_t iy = 0; iy < d.grid.size(); ++iy)
    for (int k = 0; k < 2; ++k) {
      const CMatrix& t = d.tau_bar[2 * iy + k];
      for (auto [dst, bundle] : {std::pair{&plus, &d.L_plus[iy]}, std::pair{&minus, &d.L_minus[iy]}}) {
        const CMatrix& F = bundle->frame();
        CMatrix tf = t * F;
        CMatrix r = F.adjoint() * tf;
        dst->leakage = std::max(dst->leakage, F.cols() == 0 ? 0.0 : (tf - F * r).cwiseAbs().maxCoeff());
        dst->values.push_back(r);
      }
    }
  return {plus, minus};
}

}  // namespace ebp
