#pragma once

#include "ebp/bvp_models.hpp"
#include "ebp/symbols.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ebp {

using SpectrumFn = std::function<std::vector<double>(double)>;
using IntervalFamily = std::function<IntervalModel(double)>;

struct EigenTracks {
  std::vector<double> z;
  std::vector<std::vector<double>> values;  // sorted, inside [lo, hi]
  std::vector<std::vector<int>> track_id;   // parallel to values
  double lo = 0.0;
  double hi = 0.0;
};

struct Crossing {
  double z = 0.0;
  int direction = 0;  // +1 upward through the level, -1 downward
};

struct SpectralFlowReport {
  int flow = 0;
  std::vector<Crossing> crossings;
  std::vector<std::string> engines;
  bool agreement = true;
  double margin = 0.0;  // family-specific: definiteness or conditioning margin
};

// Sorted-continuation tracking; bisects a step while the continuation is ambiguous.
EigenTracks track_eigenvalues(const SpectrumFn& spectrum, const std::vector<double>& z_grid,
                              double lo, double hi, int max_refine = 8);
// Up-crossings minus down-crossings of level + 1e-7.
SpectralFlowReport spectral_flow(const EigenTracks& tracks, double level = 0.0);

std::vector<double> uniform_loop_grid(int m, double z0 = 0.0, double z1 = 2 * 3.141592653589793);

// Flow of a family of interval models over the grid, shooting engine.
SpectralFlowReport shooting_flow(const IntervalFamily& family, const std::vector<double>& z_grid,
                                 double lo, double hi);
// Flow from the compressed operators at n and 2n; only crossings present at both resolutions count.
SpectralFlowReport compression_flow(const IntervalFamily& family, const std::vector<double>& z_grid,
                                    int n);
// Both engines; agreement records whether the integers coincide.
SpectralFlowReport interval_flow(const IntervalFamily& family, const std::vector<double>& z_grid,
                                 double lo, double hi, int n);

// Cylinder [0, length] x S^1 with sigma D_x + tau D_y, N = graph f_z at x = 0 and s_- = g s_+ at x = length.
struct CylinderLoop {
  int fiber_dim = 2;
  // Fourier coefficients (frequency, matrix) of y -> f_z(y); f_z skew-adjoint and invertible.
  std::function<std::vector<std::pair<int, CMatrix>>(double)> f_modes;
  cplx g = I1;
  double length = 1.0;
};

struct CylinderOptions {
  int K = 16;    // Fourier truncation in y
  int n = 64;    // y samples for the boundary symbol data
  int nz = 256;  // loop samples
  double z_offset = 0.0123;
};

CMatrix cylinder_f(const CylinderLoop& loop, double z, double y);
// Toeplitz matrix of f_z on the modes -K..K.
CMatrix cylinder_toeplitz(const CylinderLoop& loop, double z, int K);
// U_0^H U_1(lambda): eigenvalue 1 exactly when lambda is an eigenvalue of the truncated problem.
CMatrix cylinder_phase_operator(const CylinderLoop& loop, double z, double lambda, int K,
                                bool complement = false);
// Spectral flow through lambda = 0 over the loop, at truncation K only.
SpectralFlowReport cylinder_flow_at(const CylinderLoop& loop, const CylinderOptions& opt,
                                    bool complement = false);
// Flows for N and N^perp at truncation K from one eigen-decomposition per sample.
std::pair<SpectralFlowReport, SpectralFlowReport> cylinder_flow_pair(const CylinderLoop& loop,
                                                                    const CylinderOptions& opt);
// Flow at K, checked against truncation 2K; throws TruncationInsufficient on disagreement.
SpectralFlowReport cylinder_flow(const CylinderLoop& loop, const CylinderOptions& opt,
                                 bool complement = false);

DiracData cylinder_dirac_data(const CylinderLoop& loop, double z, int ny);

// Winding of the holonomy around y, over z, of a bundle given by frames on the (y, z) grid.
int holonomy_chern(const std::function<CMatrix(int iy, int iz)>& frame, int ny, int nz);
// Boundary symbol restricted to a bundle: (frame, Hermitian value in frame coordinates).
struct BundleSymbol {
  CMatrix frame;
  CMatrix value;
};
// Samples for one z, index 2 * iy + (u < 0).
using BundleSymbolLoop = std::function<std::vector<BundleSymbol>(double)>;

// c1(E+ over u = +1) - c1(E+ over u = -1), E+ the positive eigenbundle of the symbol.
int symbol_winding(const BundleSymbolLoop& a, int ny, int nz);

struct DiracFlipReport {
  int sf = 0;
  int w_minus = 0;
  int w_plus = 0;
  bool equal = false;
};

// i tau_minus on L_minus(f) and -i tau_plus on L_plus(f).
BundleSymbolLoop i_tau_minus(const CylinderLoop& loop, int ny);
BundleSymbolLoop minus_i_tau_plus(const CylinderLoop& loop, int ny);

DiracFlipReport verify_dirac_flip(const CylinderLoop& loop, const CylinderOptions& opt);

struct DifferenceReport {
  int lhs = 0;
  int rhs = 0;
  int sf_N = 0;
  int sf_N_perp = 0;
  bool equal = false;
};

int upsilon_winding(const CylinderLoop& loop, const CylinderOptions& opt);
DifferenceReport verify_difference_theorem(const CylinderLoop& loop, const CylinderOptions& opt);

// Requires i f_z definite at every sample; the flow must vanish.
SpectralFlowReport verify_index_zero_definite(const CylinderLoop& loop, const CylinderOptions& opt);

struct GluingReport {
  int flow_tau = 0;        // glued pair over the tau sweep at beta = pi
  int flow_beta_tau0 = 0;  // over beta, decoupled
  int flow_beta_tau1 = 0;  // over beta, transmission
  int flow_beta_alone = 0; // model alone over beta
  double spectrum_mismatch = 0.0;  // glued circle vs interval with transmission, per eigenvalue
  bool kernels_lagrangian = false;
  bool ok = false;
};

GluingReport verify_gluing_invariance(const IntervalFamily& beta_family, const std::vector<double>& tau_grid,
                                      double window = 10.0);

// g must be purely imaginary. f = i d.sigma with d = (sin z, sin(m y) + e, M + cos z + cos(m y)).
CylinderLoop rotating_dirac_loop(int m, double M = 1.0, double e = 0.3, cplx g = I1,
                                 const CMatrix& conj = CMatrix());
// f = i (1 + 0.5 sin z) s id with s = +-1.
CylinderLoop definite_dirac_loop(int sign = 1, cplx g = I1);

// Sigma = diag(1, -1), T = 0, N0 = span(1, 1), N1 = span(1, e^{i beta}).
IntervalModel beta_twist(double beta, double length = 1.0);
// The same model rotated to Sigma = [[0, 1], [1, 0]].
IntervalModel beta_twist_rotated(double beta, double length = 1.0);

}  // namespace ebp
