#pragma once

#include "ebp/elliptic_pairs.hpp"
#include "ebp/spectral_flow.hpp"

#include <random>

namespace ebp {

using Rng = std::mt19937_64;

CMatrix random_complex(Rng& rng, int rows, int cols);
// Haar-distributed unitary via QR with phase correction.
CMatrix random_unitary(Rng& rng, int n);
// Unitary with spectrum {i, -i}; both eigenvalues present when n >= 2.
CMatrix random_phi_pm_i(Rng& rng, int n);

// Elliptic pair of dimension 2 p built from 2 x 2 blocks and a well-conditioned congruence.
EllipticPair random_elliptic_pair(Rng& rng, int p);
// Lagrangian for the form of sigma: graph of a unitary over the normalized sigma split.
Subspace random_lagrangian(Rng& rng, const CMatrix& sigma);

struct PairWithCondition {
  EllipticPair pair;
  Subspace N;
};
// Lagrangian N with transversality margin to L_minus at least min_margin.
PairWithCondition random_pair_with_condition(Rng& rng, int p, double min_margin = 0.05);

// normalized_pair of a random unitary p x p.
EllipticPair random_normalized_pair(Rng& rng, int p);

// Rotating cylinder family with random shape parameters, far-end phase and fiber rotation.
CylinderLoop random_special_loop(Rng& rng, int m);

}  // namespace ebp
