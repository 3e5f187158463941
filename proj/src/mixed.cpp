// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0

#include "nhqm/mixed.hpp"

#include <bit>
#include <cmath>

namespace nhqm {
namespace {

double zz_diagonal(const MixedSpec& s, std::size_t state) {
  const int bonds = s.bc == Boundary::PBC ? s.N : s.N - 1;
  double e = 0.0;
  for (int l = 0; l < bonds; ++l) {
    const int m = (l + 1) % s.N;
    const bool same = (((state >> l) ^ (state >> m)) & 1U) == 0;
    e += same ? -s.J : s.J;
  }
  return e;
}

double z_total(std::size_t state, int N) {
  return static_cast<double>(N - 2 * std::popcount(state));
}

}  // namespace

void validate(const MixedSpec& s) {
  if (s.N < 2 || s.N > 12) throw Error(Code::InvalidArgument, "mixed Ising needs 2 <= N <= 12");
}

ComplexMatrix build_mixed(const MixedSpec& s) {
  validate(s);
  const std::size_t D = std::size_t{1} << s.N;
  ComplexMatrix H(D);
  for (std::size_t st = 0; st < D; ++st) {
    H(st, st) = cplx(zz_diagonal(s, st), s.h_z * z_total(st, s.N));
    for (int l = 0; l < s.N; ++l) H(st ^ (std::size_t{1} << l), st) += s.h_x;
  }
  return H;
}

RealMatrix mixed_real_form(const MixedSpec& s) {
  validate(s);
  const std::size_t P = std::size_t{1} << (s.N - 1);  // representatives have the top bit clear
  const std::size_t mask = (std::size_t{1} << s.N) - 1;
  RealMatrix R(2 * P);
  for (std::size_t q = 0; q < P; ++q) {
    const double d = zz_diagonal(s, q);
    R(q, q) = d;
    R(P + q, P + q) = d;
    const double b = s.h_z * z_total(q, s.N);
    R(q, P + q) = -b;
    R(P + q, q) = b;
    for (int l = 0; l < s.N; ++l) {
      const std::size_t t = q ^ (std::size_t{1} << l);
      const bool rep = t < P;
      const std::size_t p = rep ? t : (t ^ mask);
      R(p, q) += s.h_x;
      R(P + p, P + q) += rep ? s.h_x : -s.h_x;
    }
  }
  return R;
}

std::vector<cplx> mixed_from_real_basis(std::span<const cplx> phi, int N) {
  const std::size_t P = std::size_t{1} << (N - 1);
  const std::size_t mask = (std::size_t{1} << N) - 1;
  if (phi.size() != 2 * P) throw Error(Code::InvalidArgument, "vector length does not match 2^N");
  std::vector<cplx> psi(2 * P);
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  for (std::size_t p = 0; p < P; ++p) {
    psi[p] = r * (phi[p] + i * phi[P + p]);
    psi[p ^ mask] = r * (phi[p] - i * phi[P + p]);
  }
  return psi;
}

GroundState mixed_ground_state(const MixedSpec& s) {
  validate(s);
  if (s.h_x == 0.0 && s.h_z != 0.0)
    throw Error(Code::DegenerateGroundState, "h_x = 0 with h_z != 0 leaves every real part degenerate");
  GroundState gs = ground_state(to_complex(mixed_real_form(s)));
  gs.psi = mixed_from_real_basis(gs.psi, s.N);
  return gs;
}

cplx magnetization(std::span<const cplx> psi, int N) {
  cplx acc = 0.0;
  for (std::size_t st = 0; st < psi.size(); ++st) acc += std::conj(psi[st]) * psi[st] * z_total(st, N);
  return acc / static_cast<double>(N);
}

cplx site_magnetization(std::span<const cplx> psi, int /*N*/, int l) {
  cplx acc = 0.0;
  for (std::size_t st = 0; st < psi.size(); ++st)
    acc += std::conj(psi[st]) * psi[st] * (((st >> l) & 1U) ? -1.0 : 1.0);
  return acc;
}

}  // namespace nhqm
