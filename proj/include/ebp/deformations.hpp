#pragma once

#include "ebp/elliptic_pairs.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ebp {

struct StageSample {
  double param = 0.0;
  EllipticPair pair;
  Subspace N;
  double ellipticity = 0.0;      // pair.margin
  double lagrangian_residual = 0.0;
  double transversality = 0.0;   // sigma_min of [N, L_minus]
  bool lagrangian = false;
};

struct DeformationStage {
  std::string label;
  std::vector<StageSample> samples;
};

struct DeformationTrace {
  std::vector<DeformationStage> stages;

  double min_ellipticity() const;
  double min_transversality() const;
  double max_lagrangian_residual() const;
  bool all_lagrangian() const;
};

struct NormalForm {
  Split split;
  CMatrix phi;
  EllipticPair pair;
  Subspace N;
};

std::pair<EllipticPair, Subspace> deform_unitarize(const EllipticPair& pair, const Subspace& N,
                                                   double alpha, const Tolerances& tol = {});
EllipticPair deform_rho_to_pm_i(const EllipticPair& pair, double beta, const Tolerances& tol = {});
EllipticPair deform_align_Lminus(const EllipticPair& pair, const Subspace& N, double alpha,
                                 const Tolerances& tol = {});
EllipticPair deform_Lplus_to_N(const EllipticPair& pair, const Subspace& N, double t,
                               const Tolerances& tol = {});

std::pair<NormalForm, DeformationTrace> normalize(const EllipticPair& pair, const Subspace& N,
                                                  int samples = 33, const Tolerances& tol = {});

bool is_normalized(const EllipticPair& pair, const Subspace& N, double tol = 1e-8);
bool is_graded_normalized(const EllipticPair& pair, const Subspace& N, const Split& split,
                          double tol = 1e-8);

// psi^{-1} phi, where N = graph(psi) and L_plus = graph(phi) over the sigma split.
CMatrix special_relative_isometry(const EllipticPair& pair, const Subspace& N,
                                  const Tolerances& tol = {});
// Moves the eigenvalues of psi^{-1} phi along arcs to +-i; requires sigma unitary and rho = +-i.
EllipticPair deform_special(const EllipticPair& pair, const Subspace& N, double alpha,
                            const Tolerances& tol = {});
std::pair<EllipticPair, Subspace> normalize_special(const EllipticPair& pair, const Subspace& N,
                                                    const Tolerances& tol = {});

}  // namespace ebp
