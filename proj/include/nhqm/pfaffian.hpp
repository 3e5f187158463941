// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pfaffian of a skew-symmetric matrix by Parlett-Reid tridiagonalization
// with partial pivoting. The O(n^3) part is the rank-2 Schur update; an
// OpenMP version and a serial reference are both exported so tests and the
// benchmark can compare them.

#pragma once

#include "nhqm/core.hpp"

namespace nhqm {

enum class Exec { serial, parallel };

// Signed Pfaffian. Odd dimension returns 0. Throws NotSkewSymmetric if
// |A_ij + A_ji| > skew_tol or |A_ii| > skew_tol for some entry.
cplx pfaffian(const ComplexMatrix& a, double skew_tol = 1e-10, Exec exec = Exec::parallel);
double pfaffian(const RealMatrix& a, double skew_tol = 1e-10, Exec exec = Exec::parallel);

inline double pfaffian_abs(const ComplexMatrix& a, double skew_tol = 1e-10) {
  return std::abs(pfaffian(a, skew_tol));
}

// Determinant via LU, used by the pf^2 = det checks.
cplx determinant(const ComplexMatrix& a);

}  // namespace nhqm
