// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Non-Hermitian cluster Ising chain solved in momentum space: BdG modes,
// complex gaps, Majorana correlators, Pfaffian order parameters and the
// ground-state metric. A small exact-diagonalization oracle sits alongside
// for cross-checks.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "nhqm/core.hpp"
#include "nhqm/metric.hpp"
#include "nhqm/pfaffian.hpp"

namespace nhqm {

struct ClusterSpec {
  double J = 1.0;
  double lambda = 0.0;
  double Gamma = 0.0;
  int n_modes = 4096;
  int r_eval = 1000;
};

void validate(const ClusterSpec& s);

struct BdGMode {
  double k = 0.0;
  double y = 0.0;
  cplx z;
  cplx E_minus;
  cplx E_plus;
  cplx u;
  cplx v;
};

// Throws ModeSingular when the normalization constant C vanishes.
BdGMode bdg_mode(double k, const ClusterSpec& s);

// Weights entering the correlator integrals, all divided by |u|^2 + |v|^2.
struct ModeWeights {
  double w = 0.0;  // |u|^2 - |v|^2
  double x = 0.0;  // u v* + u* v
  cplx s;          // u v* - u* v
};
ModeWeights mode_weights(const BdGMode& m);

struct GapPair {
  double delta_R = 0.0;
  double delta_I = 0.0;
};

inline constexpr double kGaplessThreshold = 1e-3;

GapPair gaps(const ClusterSpec& s);
bool is_gapless(const GapPair& g);

enum class Quadrature {
  continuum,    // midpoint rule with M = max(n_modes, 32 r_max) momenta
  finiteChain,  // exactly n_modes antiperiodic momenta k_m = (2m-1) pi / (2 n_modes)
};

struct CorrelatorTable {
  int r_max = 0;
  std::vector<cplx> G;  // G[r + r_max] holds G_r for r in [-r_max, r_max]
  std::vector<cplx> S;  // S[r] for r in [1, r_max]; S[0] unused
  Warnings warnings;

  cplx g_at(int r) const { return G.at(static_cast<std::size_t>(r + r_max)); }
  cplx s_at(int r) const { return S.at(static_cast<std::size_t>(r)); }
  cplx q_at(int r) const { return s_at(r); }
  bool is_real(double tol = 0.0) const;
};

CorrelatorTable correlator_elements(const ClusterSpec& s, int r_max, Quadrature q = Quadrature::continuum,
                                    Exec exec = Exec::parallel);

// A Majorana string X_1 X_2 ... with X = A_l = c_l^dag + c_l or B_l = c_l^dag - c_l.
struct Majorana {
  char type;  // 'A' or 'B'
  int site;
};

// Skew matrix M_ij = <X_i X_j> (i < j) whose Pfaffian is <X_1 X_2 ...>.
ComplexMatrix wick_matrix(const CorrelatorTable& t, const std::vector<Majorana>& ops);
std::vector<Majorana> two_spin_string(int r);
std::vector<Majorana> string_order_string(int r);

// R_r^y = (-1)^r pf of the 2r x 2r matrix.
cplx two_spin_correlation(const CorrelatorTable& t, int r);
// O_r^x in the spin basis; see the README for the sign convention.
cplx string_correlation(const CorrelatorTable& t, int r);

struct OrderParameters {
  double m_y = 0.0;
  double O_x = 0.0;
  double dOx_dlambda = 0.0;
  double dmy_dlambda = 0.0;
  cplx R_y;  // R^y at r_eval
  cplx O_r;  // O^x at r_eval
  Warnings warnings;
};

inline constexpr double kOrderDerivStep = 1e-3;

OrderParameters order_parameters(const ClusterSpec& s);

enum class ClusterParam { lambda, Gamma };
ClusterParam cluster_param(const std::string& name);

// Per-mode metric summed over k_m = (2m-1) pi / (2 n_modes).
MetricValue ground_state_metric(const ClusterSpec& s, ClusterParam p, double dmu = 1e-4,
                                Exec exec = Exec::parallel);

struct EdOracleResult {
  cplx energy;
  std::vector<cplx> R_y;  // index r-1 for r = 1..3
  std::vector<cplx> O_x;  // index r-1 for r = 1..3
  Warnings warnings;
};

// Dense many-spin solution on the even-parity sector (prod sigma^z = +1),
// the sector matched by the antiperiodic momenta of Quadrature::finiteChain.
EdOracleResult ed_oracle(int N, double lambda, double Gamma, double J = 1.0);
ComplexMatrix build_cluster_spin(int N, double lambda, double Gamma, double J = 1.0);

}  // namespace nhqm
