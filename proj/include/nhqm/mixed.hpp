// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Mixed-field Ising chain H = -J sum Z Z + h_x sum X + i h_z sum Z by dense
// exact diagonalization. Bit l of a basis index is spin l (0 = up).

#pragma once

#include <span>
#include <vector>

#include "nhqm/core.hpp"
#include "nhqm/eigen.hpp"

namespace nhqm {

enum class Boundary { PBC, OBC };

struct MixedSpec {
  int N = 10;
  double J = 1.0;
  double h_x = 0.0;
  double h_z = 0.0;
  Boundary bc = Boundary::PBC;
};

void validate(const MixedSpec& s);

ComplexMatrix build_mixed(const MixedSpec& s);

// Real matrix similar to build_mixed(s). With F the global spin flip,
// F H F = conj(H); in the basis (|s> +/- |~s>)/sqrt(2) followed by the
// diagonal phase diag(1, i) the matrix becomes real. The similarity is
// unitary, so fidelities computed in this basis equal those of H.
RealMatrix mixed_real_form(const MixedSpec& s);

// Maps a vector in the real-form basis back to the spin basis.
std::vector<cplx> mixed_from_real_basis(std::span<const cplx> phi, int N);

// Ground state of build_mixed(s) through the real form. Throws
// DegenerateGroundState for h_x = 0, h_z != 0.
GroundState mixed_ground_state(const MixedSpec& s);

// (1/N) <psi| sum_l Z_l |psi>.
cplx magnetization(std::span<const cplx> psi, int N);
// <psi| Z_l |psi> for one site.
cplx site_magnetization(std::span<const cplx> psi, int N, int l);

}  // namespace nhqm
