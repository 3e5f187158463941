// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0

#include "nhqm/quasiperiodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nhqm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_zeta(double zeta) {
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw Error(Code::InvalidArgument, "zeta must lie in [0, 1]");
}

double sum_fourth(std::span<const cplx> psi) {
  double s = 0.0;
  for (const cplx& z : psi) {
    const double p = std::norm(z);
    s += p * p;
  }
  return s;
}

}  // namespace

void validate(const Gaa1Spec& s) {
  if (s.L < 3) throw Error(Code::InvalidArgument, "GAA1 needs L >= 3");
  check_zeta(s.zeta);
}

void validate(const Gaa2Spec& s) {
  if (s.L < 3) throw Error(Code::InvalidArgument, "GAA2 needs L >= 3");
  if (!(std::abs(s.alpha) < 1.0)) throw Error(Code::InvalidArgument, "GAA2 needs |alpha| < 1");
  check_zeta(s.zeta);
}

double gaa1_hopping(const Gaa1Spec& s, int j) {
  return s.t + s.V2 * std::cos(kTwoPi * s.beta * (j + 0.5));
}

double gaa2_onsite(const Gaa2Spec& s, int j) {
  const double c = std::cos(kTwoPi * s.beta * j);
  const double den = 1.0 - s.alpha * c;
  if (std::abs(den) < 1e-12) throw Error(Code::PotentialSingular, "1 - alpha cos(2 pi beta j) vanishes");
  return s.Delta * c / den;
}

ComplexMatrix build_gaa1(const Gaa1Spec& s) {
  validate(s);
  const int L = s.L;
  ComplexMatrix H(static_cast<std::size_t>(L));
  const double fwd = std::exp(-s.g), bwd = std::exp(s.g);
  for (int j = 1; j <= L; ++j) {
    const double x = kTwoPi * s.beta * j;
    // cos(x + i h) = cos x cosh h - i sin x sinh h
    H(j - 1, j - 1) = s.V1 * cplx(std::cos(x) * std::cosh(s.h), -std::sin(x) * std::sinh(s.h));
  }
  for (int j = 1; j < L; ++j) {
    const double tj = gaa1_hopping(s, j);
    H(j, j - 1) = tj * fwd;
    H(j - 1, j) = tj * bwd;
  }
  const double tL = gaa1_hopping(s, L);
  H(0, L - 1) += s.zeta * tL * fwd;
  H(L - 1, 0) += s.zeta * tL * bwd;
  return H;
}

ComplexMatrix build_gaa2(const Gaa2Spec& s) {
  validate(s);
  const int L = s.L;
  ComplexMatrix H(static_cast<std::size_t>(L));
  const double fwd = s.t * std::exp(-s.g), bwd = s.t * std::exp(s.g);
  for (int j = 1; j <= L; ++j) H(j - 1, j - 1) = gaa2_onsite(s, j);
  for (int j = 1; j < L; ++j) {
    H(j, j - 1) = fwd;
    H(j - 1, j) = bwd;
  }
  H(0, L - 1) += s.zeta * fwd;
  H(L - 1, 0) += s.zeta * bwd;
  return H;
}

double fractal_dimension(std::span<const cplx> psi, int L) {
  if (L < 2) throw Error(Code::InvalidArgument, "fractal dimension needs L >= 2");
  return -std::log(sum_fourth(psi)) / std::log(static_cast<double>(L));
}

double participation_ratio(std::span<const cplx> psi, int L) {
  if (L < 1) throw Error(Code::InvalidArgument, "participation ratio needs L >= 1");
  return 1.0 / (static_cast<double>(L) * sum_fourth(psi));
}

LocalizationDiagnostics localization(const std::vector<std::vector<cplx>>& states, int L) {
  LocalizationDiagnostics d;
  d.eta.reserve(states.size());
  d.pr.reserve(states.size());
  for (const auto& psi : states) {
    d.eta.push_back(fractal_dimension(psi, L));
    d.pr.push_back(participation_ratio(psi, L));
  }
  return d;
}

double gaa1_critical_v1(double t, double V2, double g, double h) {
  if (!(t > 0.0)) throw Error(Code::InvalidArgument, "t must be positive");
  const double K = std::max(t, std::abs(V2));
  const double ag = std::abs(g);
  return std::exp(-std::abs(h)) * (2.0 * K * std::cosh(ag) + 2.0 * std::sqrt(K * K - V2 * V2) * std::sinh(ag));
}

double gaa2_mobility_edge(double t, double Delta, double alpha) {
  if (alpha == 0.0) throw Error(Code::AlphaZero, "no mobility edge at alpha = 0");
  return (2.0 * t - Delta) / alpha;
}

std::vector<int> fibonacci_sizes(int min_size, int max_size) {
  std::vector<int> out;
  int a = 1, b = 2;
  while (a <= max_size) {
    if (a >= min_size && (out.empty() || out.back() != a)) out.push_back(a);
    const int c = a + b;
    a = b;
    b = c;
  }
  return out;
}

bool is_fibonacci(int n) {
  const auto f = fibonacci_sizes(n, n);
  return !f.empty();
}

}  // namespace nhqm
