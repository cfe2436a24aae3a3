#pragma once

#include "ebp/numeric_core.hpp"

#include <doctest.h>

#include <cmath>
#include <initializer_list>

namespace testing {

using ebp::cplx;
using ebp::CMatrix;
using ebp::CVector;
using ebp::I1;

inline constexpr double kPi = 3.141592653589793;

inline CVector vec(std::initializer_list<cplx> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (cplx x : xs) v(i++) = x;
  return v;
}

inline CMatrix mat(int rows, int cols, std::initializer_list<cplx> xs) {
  CMatrix M(rows, cols);
  auto it = xs.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = *it++;
  return M;
}

inline CMatrix diag(std::initializer_list<cplx> xs) { return vec(xs).asDiagonal(); }

inline ebp::Subspace span(std::initializer_list<CVector> vs) { return ebp::span_of(vs); }

// Distance of two subspaces through their orthogonal projectors, computed without the library.
inline double projector_distance(const CMatrix& A, const CMatrix& B) {
  auto proj = [](const CMatrix& X) {
    Eigen::ColPivHouseholderQR<CMatrix> qr(X);
    const Eigen::Index r = qr.rank();
    CMatrix Q = qr.householderQ() * CMatrix::Identity(X.rows(), r);
    return CMatrix(Q * Q.adjoint());
  };
  return Eigen::JacobiSVD<CMatrix>(proj(A) - proj(B)).singularValues()(0);
}

inline bool same_subspace(const ebp::Subspace& S, const CMatrix& cols, double tol = 1e-10) {
  return S.dim() == ebp::subspace_from_columns(cols).dim() && projector_distance(S.frame(), cols) < tol;
}

}  // namespace testing
