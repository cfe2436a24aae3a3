#pragma once

#include "ebp/numeric_core.hpp"
#include "ebp/pontryagin.hpp"

namespace ebp {

struct EllipticPair {
  CMatrix sigma;
  CMatrix tau;
  CMatrix rho;  // sigma^{-1} tau
  Subspace L_plus;
  Subspace L_minus;
  double margin = 0.0;  // min |Im| over spec(rho)

  int dim() const { return static_cast<int>(sigma.rows()); }
  IndefiniteForm form() const { return IndefiniteForm{sigma, dim()}; }
};

struct BoundaryCondition {
  Subspace N;
};

EllipticPair make_elliptic_pair(const CMatrix& sigma, const CMatrix& tau, const Tolerances& tol = {});

// Pair with a prescribed rho, tau = sigma rho.
EllipticPair pair_from_rho(const CMatrix& sigma, const CMatrix& rho, const Tolerances& tol = {});

// Pair whose rho is i on L_plus and -i on L_minus.
EllipticPair pair_from_split(const CMatrix& sigma, const Subspace& L_plus,
                             const Subspace& L_minus, const Tolerances& tol = {});

std::pair<Subspace, Subspace> stable_split(const EllipticPair& pair);

struct DecayReport {
  bool decaying = false;
  double end_norm = 0.0;
};

DecayReport ode_decay_check(const EllipticPair& pair, const CVector& v, double horizon);
DecayReport ode_decay_check(const EllipticPair& pair, const CVector& v);

Subspace positive_path(const EllipticPair& pair, double theta, const Tolerances& tol = {});
Subspace plus_path_formula(const CMatrix& phi, double theta);

// sigma = diag(1, -1), tau = [[0, i phi^*], [-i phi, 0]] on E+ (+) E-.
EllipticPair normalized_pair(const CMatrix& phi, const Tolerances& tol = {});

}  // namespace ebp
