#pragma once

#include "ebp/numeric_core.hpp"

namespace ebp {

// [u, v] = <sigma u, v> for self-adjoint invertible sigma.
struct IndefiniteForm {
  CMatrix sigma;
  int dim = 0;

  cplx operator()(const CVector& u, const CVector& v) const { return v.dot(sigma * u); }
  // Gram matrix of the form on the columns of a frame.
  CMatrix gram(const CMatrix& frame) const { return frame.adjoint() * sigma * frame; }
};

struct Split {
  Subspace plus;
  Subspace minus;
};

struct LagrangianGraph {
  Split split;
  CMatrix phi;  // E+ coordinates -> E- coordinates

  Subspace graph() const;
};

IndefiniteForm form_from_sigma(const CMatrix& sigma, const Tolerances& tol = {});

// Eigenspaces of sigma with positive and negative eigenvalues.
Split sigma_split(const CMatrix& sigma);

bool is_lagrangian(const IndefiniteForm& form, const Subspace& L, const Tolerances& tol = {});
double lagrangian_residual(const IndefiniteForm& form, const Subspace& L);
bool is_transverse(const Subspace& U, const Subspace& V, const Tolerances& tol = {});
// Smallest singular value of the stacked frame; 0 when dimensions do not add up.
double transversality_margin(const Subspace& U, const Subspace& V);

LagrangianGraph isometry_of_lagrangian(const IndefiniteForm& form, const Split& split,
                                       const Subspace& L, const Tolerances& tol = {});
// Graph {(u, phi u)} in the frame coordinates of the split.
Subspace graph_of(const Split& split, const CMatrix& phi);

CMatrix transverse_delta(const IndefiniteForm& form, const Subspace& L, const Subspace& M,
                         const Subspace& M_new, const Tolerances& tol = {});
// Graph {u + delta u : u in M}.
Subspace delta_graph(const Subspace& M, const CMatrix& delta, const Tolerances& tol = {});

CMatrix projector_from_isometry(const CMatrix& Phi, double tol = 1e-10);
CMatrix isometry_from_projector(const CMatrix& Pi, int plus_dim, double tol = 1e-10);

}  // namespace ebp
