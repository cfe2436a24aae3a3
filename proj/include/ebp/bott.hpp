#pragma once

#include "ebp/numeric_core.hpp"

#include <vector>

namespace ebp {

struct UnitaryLoop {
  std::vector<CMatrix> samples;  // closed: samples.front() == samples.back()
};

// {(u cos(theta/2), a u sin(theta/2))} in F (+) F.
Subspace bott_lambda(const CMatrix& a, double theta, const Tolerances& tol = {});

// e^{i eta} on A and e^{-i eta} on A^perp for eta in [0, pi]; e^{i eta} id on [pi, 2 pi].
CMatrix bott_f(const Subspace& A, double eta);
CMatrix bott_f_prime(const Subspace& A, double eta);

// Sum of {(u cos, u e^{i(eta - pi/2)} sin) : u in A} and {(u cos, u e^{-i(eta + pi/2)} sin) : u in A^perp}.
Subspace bott_gamma_prime(const Subspace& A, double eta, double theta);

// e^{i eta} on L_plus(phi), e^{-i eta} on L_minus(phi); phi unitary with spectrum {i, -i}.
CMatrix omega_path(const CMatrix& phi, double eta, const Tolerances& tol = {});
// Eigenspace of phi for the eigenvalue i.
Subspace phi_plus_space(const CMatrix& phi, const Tolerances& tol = {});

int winding_number(const UnitaryLoop& loop);
// Winding of arg det over a closed loop of invertible matrices, without unitarity checks.
int det_winding(const std::vector<CMatrix>& samples);
int phase_winding(const std::vector<cplx>& values);

}  // namespace ebp
