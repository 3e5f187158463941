// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Diagonal quantum metric g_mumu = -2 ln F / dmu^2 of self-normalized right
// eigenstates, evaluated on the symmetric stencil mu -/+ dmu/2.

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nhqm/core.hpp"
#include "nhqm/eigen.hpp"

namespace nhqm {

using MatrixFamily = std::function<ComplexMatrix(double)>;

struct MetricValue {
  double g = 0.0;
  double xi = 0.0;
  double fidelity = 1.0;
  double step = 0.0;  // dmu actually used after any halving
  Warnings warnings;
};

struct MetricOptions {
  double step = 1e-4;
  int max_halvings = 8;
  // Seed inverse iteration at mu + dmu/2 from the full solve at mu - dmu/2.
  bool continuation = true;
};

inline constexpr double kXiFloor = 1e-300;

double xi_of(double g);

// |<a|b>| for unit vectors. Throws NotNormalized if either norm is off by
// more than 1e-10.
double fidelity(std::span<const cplx> a, std::span<const cplx> b);

// -ln(|<a|b>|^2 / (|a|^2 |b|^2)) computed from the component of a
// orthogonal to b, which stays accurate when the overlap is within rounding
// of one and is never negative.
double minus_log_fidelity_sq(std::span<const cplx> a, std::span<const cplx> b);

MetricValue metric_from_pair(std::span<const cplx> a, std::span<const cplx> b, double step);

// Ground state (state 1) metric.
MetricValue metric_ground_state(const MatrixFamily& family, double mu, const MetricOptions& opts = {});

// Metric of state n (1-based). n = 1 uses ground-state selection on both
// sides of the stencil; n > 1 pairs states by overlap.
MetricValue metric_diagonal(const MatrixFamily& family, double mu, std::size_t n, const MetricOptions& opts = {});

// All states from one pair of full eigendecompositions; entry n belongs to
// the n-th state (byRealAscending) at mu - dmu/2. `energies` receives those
// eigenvalues when non-null.
std::vector<MetricValue> metric_spectrum(const MatrixFamily& family, double mu, const MetricOptions& opts = {},
                                         std::vector<cplx>* energies = nullptr);

}  // namespace nhqm
