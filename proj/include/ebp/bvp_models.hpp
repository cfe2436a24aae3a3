#pragma once

#include "ebp/numeric_core.hpp"
#include "ebp/pontryagin.hpp"

#include <functional>
#include <vector>

namespace ebp {

// Finite-dimensional boundary problem: <A u, v>_0 = v^H K u with H0 weight G.
struct AbstractBVP {
  CMatrix G;
  CMatrix K;
  CMatrix gamma;    // H1 -> H_boundary
  CMatrix Sigma_b;  // skew-adjoint, invertible
  CMatrix Pi;       // boundary projector; Gamma = (1 - Pi) gamma

  int dim() const { return static_cast<int>(K.rows()); }
  int boundary_dim() const { return static_cast<int>(gamma.rows()); }
};

// Sigma D + T on [0, length], D = -i d/dx, with u(0) in N0 and u(length) in N1.
struct IntervalModel {
  CMatrix Sigma;
  CMatrix T;
  double length = 1.0;
  Subspace N0;
  Subspace N1;

  int dim() const { return static_cast<int>(Sigma.rows()); }
};

// Sigma D + T on the circle of the given circumference.
struct CircleModel {
  CMatrix Sigma;
  CMatrix T;
  double circumference = 2.0;
};

struct Compression {
  CMatrix H;  // Q^H K Q
  CMatrix Q;  // G-orthonormal basis of Ker Gamma
};

struct DualityReport {
  bool ok = false;
  double gap = 1.0;
  int complement_dim = 0;
  int image_dim = 0;
  double boundary_residual = 0.0;  // size of the discrete boundary correction on the kernel
};

void validate_model(const IntervalModel& model, const Tolerances& tol = {});

// Staggered summation-by-parts assembly; exact discrete Green formula.
AbstractBVP interval_assemble_sbp(const IntervalModel& model, int n);

double check_lagrange_identity(const AbstractBVP& bvp);
bool boundary_projector_selfadjoint(const CMatrix& Pi, const CMatrix& Sigma_b, double tol = 1e-9);

// with_basis = false leaves Q empty.
Compression compress_AGamma(const AbstractBVP& bvp, bool with_basis = true);
double hermitian_defect_of(const Compression& c);
RVector compression_eigenvalues(const Compression& c);
RVector compression_spectrum(const IntervalModel& model, int n);

DualityReport check_duality(const AbstractBVP& bvp, double tol = 1e-8);
// gap(Ker H, (Range H)^perp) for the compressed operator.
double reduction_gap(const Compression& c, double rel_tol = 1e-9);

// Roots of lambda -> sigma_min(F(lambda)) on [lo, hi], repeated by multiplicity.
std::vector<double> dip_eigenvalues(const std::function<CMatrix(double)>& F, double lo, double hi,
                                    int steps = 2048);

CMatrix transfer_matrix(const CMatrix& Sigma, const CMatrix& T, double lambda, double length);
std::vector<double> shooting_eigenvalues(const IntervalModel& model, double lo, double hi,
                                         int steps = 2048);

// Per-mode assembly of the standard operator on [0, 1] x S^1.
struct StandardParams {
  int fplus_dim = 1;
  int fminus_dim = 0;
  double lambda_plus = 1.0;
  double lambda_minus = 1.0;
  double lambda = 1.0;
  int K = 8;
  int n = 64;
  std::function<double(double)> cutoff;
};

struct StandardMode {
  int k = 0;
  CMatrix P;        // on (u+, u-) nodal values
  CMatrix Pt_prime; // -Pt_prime is the discrete W-adjoint of P up to the boundary term
  CMatrix B;        // u -> gamma u-
  CMatrix B_sa;     // (u, v) -> (gamma u+, gamma v-)
};

struct StandardOperatorAssembly {
  StandardParams params;
  RVector W;        // nodal quadrature weights
  RVector phi;      // cutoff samples
  std::vector<StandardMode> modes;

  int field_dim() const { return params.fplus_dim + params.fminus_dim; }
};

StandardOperatorAssembly standard_operator(const StandardParams& params);
// P^sa(t) = [[0, P + i t], [-Pt' - i t, 0]] for one mode.
CMatrix standard_psa(const StandardOperatorAssembly& a, const StandardMode& m, double t);
double garding_margin(const StandardOperatorAssembly& a, double t);
double psa_hermitian_defect(const StandardOperatorAssembly& a, double t);
double psa_bsa_sigma_min(const StandardOperatorAssembly& a, double t);

// Periodic doubling to a circle of twice the length.
CircleModel glue_double(const IntervalModel& model);
std::vector<double> circle_eigenvalues(const CircleModel& circle, double lo, double hi,
                                       int steps = 2048);
// The doubled problem folded onto the interval: fiber E (+) E, transmission at both ends.
IntervalModel fold_double(const IntervalModel& model);

// Partner with Sigma_2 = -Sigma_1, invertible under its own boundary conditions.
IntervalModel standard_partner(const IntervalModel& model, double coupling = 1.5);
// Ker B_tau at the glued end, over (u1, v1, u2, v2).
Subspace btau_kernel(const IntervalModel& m1, const IntervalModel& m2, double tau);
CMatrix btau_condition(const IntervalModel& m1, const IntervalModel& m2, double tau);
// Model 1 and its partner coupled at x = 0 through Ker B_tau.
IntervalModel glue_pair(const IntervalModel& m1, const IntervalModel& m2, double tau);

}  // namespace ebp
