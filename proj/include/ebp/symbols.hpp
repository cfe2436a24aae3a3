#pragma once

#include "ebp/elliptic_pairs.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace ebp {

// Boundary data at (y, u), u in {+1, -1}.
struct SymbolSample {
  double y = 0.0;
  int u = 1;
  CMatrix sigma;
  CMatrix tau;
  std::optional<Subspace> N;
};

struct SampledSymbolFamily {
  std::vector<double> boundary_grid;  // y values on [0, 2 pi)
  std::vector<SymbolSample> samples;  // index 2 * iy + (u < 0)
  // Full symbol on the half circle nu cos(theta) + u sin(theta), when available.
  std::function<CMatrix(const SymbolSample&, double)> half_circle;

  const SymbolSample& at(int iy, int u) const { return samples[2 * iy + (u < 0 ? 1 : 0)]; }
  int grid_size() const { return static_cast<int>(boundary_grid.size()); }
};

struct ConditionMargins {
  double lagrangian_residual = 0.0;
  double ellipticity = 0.0;  // min transversality of N to the decaying space
  double bundle_defect = 0.0;
  double anticommutator = 0.0;
  double special = 0.0;      // min transversality of N to both stable spaces
};

struct ConditionReport {
  bool self_adjoint = false;
  bool elliptic = false;
  bool bundle_like = false;
  bool anti_commuting = false;
  bool special = false;
  ConditionMargins margins;
};

struct DiracData {
  std::vector<double> grid;
  std::vector<CMatrix> f;         // per y, skew-adjoint invertible
  std::vector<CMatrix> tau_bar;   // per (y, u), index 2 * iy + (u < 0)
  std::vector<CMatrix> psi;       // Cayley transform (1 - f)(1 + f)^{-1}
  std::vector<Subspace> N;        // graph of f in F (+) F
  std::vector<Subspace> L_plus;   // f = +i|f| eigenspace
  std::vector<Subspace> L_minus;

  int fiber_dim() const { return f.empty() ? 0 : static_cast<int>(f.front().rows()); }
};

struct RestrictedSymbol {
  std::vector<CMatrix> values;   // per (y, u), in the coordinates of the eigenbundle frame
  double leakage = 0.0;
};

bool check_order_one(const SampledSymbolFamily& fam, const std::vector<double>& theta_grid,
                     double tol = 1e-9);

ConditionReport check_conditions(const SampledSymbolFamily& fam, const Tolerances& tol = {});

SampledSymbolFamily elementary_symbol(int fplus_dim, int fminus_dim, double lambda_plus,
                                      double lambda_minus, double lambda,
                                      const std::function<double(double)>& cutoff,
                                      int grid = 16);

// Smooth cutoff equal to 1 on [-1/4, 1/4] and supported in (-3/4, 3/4).
double standard_cutoff(double x);

// Winding over y of det(phi_{+1}) / det(phi_{-1}), phi_u the graph map of N_u over the sigma split.
int obstruction_winding(const SampledSymbolFamily& fam, const Tolerances& tol = {});
// Winding over y of det of the graph map of L_plus(rho_u).
int epsilon_winding(const SampledSymbolFamily& fam, int u, const Tolerances& tol = {});

// +1 on L_plus(psi^{-1} phi_u), -1 on L_minus(psi^{-1} phi_u), acting on E+ coordinates.
std::vector<CMatrix> boundary_symbol_upsilon(const SampledSymbolFamily& fam,
                                             const Tolerances& tol = {});

DiracData dirac_like(const std::vector<double>& grid, const std::vector<CMatrix>& f,
                     const std::vector<CMatrix>& tau_bar, const Tolerances& tol = {});
// sigma = [[0, 1], [1, 0]], tau_u = [[0, tau_bar^*], [tau_bar, 0]], N = graph f.
SampledSymbolFamily dirac_family(const DiracData& d);
std::pair<RestrictedSymbol, RestrictedSymbol> tau_pm_split(const DiracData& d);

CMatrix cayley(const CMatrix& f);
// Eigenspaces of the skew-adjoint f with eigenvalues on the positive / negative imaginary axis.
std::pair<Subspace, Subspace> skew_eigenbundles(const CMatrix& f);

}  // namespace ebp
