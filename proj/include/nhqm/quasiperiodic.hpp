// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Non-Hermitian generalized Aubry-Andre chains and their localization
// diagnostics. Sites are labelled j = 1..L; matrix row j-1 holds site j.

#pragma once

#include <span>
#include <vector>

#include "nhqm/core.hpp"

namespace nhqm {

inline const double kGoldenBeta = 0.6180339887498948482;  // (sqrt(5) - 1) / 2

struct Gaa1Spec {
  int L = 610;
  double t = 1.0;
  double V1 = 0.0;
  double V2 = 0.0;
  double g = 0.0;
  double h = 0.0;
  double beta = kGoldenBeta;
  double zeta = 1.0;  // wrap-bond coefficient, 0 = open chain
};

struct Gaa2Spec {
  int L = 610;
  double t = 1.0;
  double Delta = 0.0;
  double alpha = 0.0;
  double g = 0.0;
  double beta = kGoldenBeta;
  double zeta = 1.0;
};

struct LocalizationDiagnostics {
  std::vector<double> eta;
  std::vector<double> pr;
};

void validate(const Gaa1Spec& s);
void validate(const Gaa2Spec& s);

// t_j = t + V2 cos(2 pi beta (j + 1/2)).
double gaa1_hopping(const Gaa1Spec& s, int j);
double gaa2_onsite(const Gaa2Spec& s, int j);

ComplexMatrix build_gaa1(const Gaa1Spec& s);
ComplexMatrix build_gaa2(const Gaa2Spec& s);

double fractal_dimension(std::span<const cplx> psi, int L);
double participation_ratio(std::span<const cplx> psi, int L);
LocalizationDiagnostics localization(const std::vector<std::vector<cplx>>& states, int L);

double gaa1_critical_v1(double t, double V2, double g, double h);
double gaa2_mobility_edge(double t, double Delta, double alpha);

// Fibonacci numbers F_j used as ring sizes.
std::vector<int> fibonacci_sizes(int min_size, int max_size);
bool is_fibonacci(int n);

}  // namespace nhqm
