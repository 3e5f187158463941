// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "nhqm/core.hpp"

namespace nhqm {

enum class Ordering { byRealAscending, byOverlapMatch };

struct EigenSystem {
  std::vector<cplx> eigenvalues;
  ComplexMatrix vectors;  // column n is the right eigenvector of eigenvalues[n]
  Ordering ordering = Ordering::byRealAscending;
  double max_residual = 0.0;  // max_n |H v_n - E_n v_n|
  Warnings warnings;

  std::size_t dim() const { return eigenvalues.size(); }
  std::vector<cplx> vector(std::size_t n) const;
};

// Relative width used when deciding that two real parts tie.
inline constexpr double kRealTieTol = 1e-9;

// Index order: ascending real part, ties (within kRealTieTol * scale)
// broken by ascending imaginary part.
std::vector<std::size_t> real_ascending_order(const std::vector<cplx>& ev);

// Full right eigendecomposition, sorted byRealAscending. Hermitian and real
// inputs are routed to the matching LAPACK driver. Throws NonConvergence.
EigenSystem eig_right(const ComplexMatrix& h);

// Eigenvalues only, sorted byRealAscending.
std::vector<cplx> eigenvalues(const ComplexMatrix& h);

struct GroundState {
  cplx energy;
  std::vector<cplx> psi;
  Warnings warnings;
};

// Right eigenvector by shifted inverse iteration. Returns false when the
// residual does not drop below 1e-12 * |H|_F.
bool inverse_iteration(const ComplexMatrix& h, cplx shift, std::vector<cplx>& psi, cplx& energy);

// Smallest-real-part state (ties by smallest imaginary part). Uses an
// eigenvalue-only solve plus inverse iteration, falling back to eig_right
// when the ground state is near defective. When spectrum is given, the sorted
// eigenvalues are stored there (left empty on the Hermitian path).
GroundState ground_state(const ComplexMatrix& h, std::vector<cplx>* spectrum = nullptr);

// Greedy bijection maximizing |<prev_n|next_pi(n)>|; result[n] = pi(n)
// (0-based). Flags AmbiguousMatch into `warnings` when an assigned overlap
// is below 0.5.
std::vector<std::size_t> match_states(const EigenSystem& prev, const EigenSystem& next,
                                      Warnings* warnings = nullptr);

}  // namespace nhqm
