// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0

#include "nhqm/cluster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <type_traits>

#include "nhqm/eigen.hpp"

namespace nhqm {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kBlock = 256;  // momenta per deterministic reduction block
constexpr int kReseed = 64;          // exact sincos every kReseed recurrence steps

double golden_min(const std::function<double(double)>& f, double a, double b) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  return std::min(f1, f2);
}

cplx e_plus(double k, const ClusterSpec& s) {
  const double y = s.J * std::sin(2.0 * k) + s.lambda * std::sin(k);
  const cplx z(s.J * std::cos(2.0 * k) - s.lambda * std::cos(k), -0.25 * s.Gamma);
  return std::sqrt(z * z + y * y);
}

// Fidelity defect of the per-mode two-component state (u, -v).
double mode_minus_log_f2(const BdGMode& a, const BdGMode& b) {
  const cplx a1 = a.u, a2 = -a.v, b1 = b.u, b2 = -b.v;
  const double na = std::norm(a1) + std::norm(a2), nb = std::norm(b1) + std::norm(b2);
  const double q = std::min(std::norm(a1 * b2 - a2 * b1) / (na * nb), 1.0);
  return -std::log1p(-q);
}

}  // namespace

void validate(const ClusterSpec& s) {
  if (s.n_modes < 2) throw Error(Code::InvalidArgument, "n_modes must be >= 2");
  if (s.r_eval < 1) throw Error(Code::InvalidArgument, "r_eval must be >= 1");
  if (s.Gamma < 0.0) throw Error(Code::InvalidArgument, "Gamma must be >= 0");
}

BdGMode bdg_mode(double k, const ClusterSpec& s) {
  BdGMode m;
  m.k = k;
  m.y = s.J * std::sin(2.0 * k) + s.lambda * std::sin(k);
  m.z = cplx(s.J * std::cos(2.0 * k) - s.lambda * std::cos(k), -0.25 * s.Gamma);
  m.E_plus = std::sqrt(m.z * m.z + m.y * m.y);
  m.E_minus = -m.E_plus;
  const cplx num = m.z + m.E_minus;
  cplx c = std::sqrt(num * num + m.y * m.y);
  if (c.real() < 0.0 || (c.real() == 0.0 && c.imag() < 0.0)) c = -c;
  if (c.imag() == 0.0) c = cplx(c.real(), 0.0);  // drop a signed zero
  if (std::abs(c) < 1e-12) throw Error(Code::ModeSingular, "u_k, v_k undefined at k = " + std::to_string(k));
  m.u = num / c;
  m.v = -m.y / c;
  return m;
}

ModeWeights mode_weights(const BdGMode& m) {
  const double uu = std::norm(m.u), vv = std::norm(m.v), n = uu + vv;
  const cplx uv = m.u * std::conj(m.v);
  ModeWeights w;
  w.w = (uu - vv) / n;
  w.x = 2.0 * uv.real() / n;
  w.s = cplx(0.0, 2.0 * uv.imag() / n);
  return w;
}

GapPair gaps(const ClusterSpec& s) {
  validate(s);
  const int n = s.n_modes;
  const double dk = kPi / (n - 1);
  auto fr = [&](double k) { return std::abs(2.0 * e_plus(k, s).real()); };
  auto fi = [&](double k) { return std::abs(2.0 * e_plus(k, s).imag()); };
  int ir = 0, ii = 0;
  double br = fr(0.0), bi = fi(0.0);
  for (int i = 1; i < n; ++i) {
    const double k = i * dk;
    const double vr = fr(k), vi = fi(k);
    if (vr < br) { br = vr; ir = i; }
    if (vi < bi) { bi = vi; ii = i; }
  }
  auto refine = [&](const std::function<double(double)>& f, int i, double best) {
    const double a = std::max(0.0, (i - 1) * dk), b = std::min(kPi, (i + 1) * dk);
    return std::min(best, golden_min(f, a, b));
  };
  GapPair g;
  g.delta_R = refine(fr, ir, br);
  g.delta_I = refine(fi, ii, bi);
  return g;
}

bool is_gapless(const GapPair& g) { return g.delta_R < kGaplessThreshold && g.delta_I < kGaplessThreshold; }

bool CorrelatorTable::is_real(double tol) const {
  for (const cplx& z : G)
    if (std::abs(z.imag()) > tol) return false;
  for (const cplx& z : S)
    if (std::abs(z) > tol) return false;
  return true;
}

CorrelatorTable correlator_elements(const ClusterSpec& s, int r_max, Quadrature q, Exec exec) {
  validate(s);
  if (r_max < 1) throw Error(Code::InvalidArgument, "r_max must be >= 1");
  const std::size_t M = q == Quadrature::continuum
                            ? static_cast<std::size_t>(std::max(s.n_modes, 32 * r_max))
                            : static_cast<std::size_t>(s.n_modes);
  const std::size_t R = static_cast<std::size_t>(r_max) + 1;
  const std::size_t nblocks = (M + kBlock - 1) / kBlock;

  // Per block: sum cos(kr) w, sum sin(kr) x, sum sin(kr) s.
  std::vector<double> cw(nblocks * R, 0.0), sx(nblocks * R, 0.0);
  std::vector<cplx> ss(nblocks * R, 0.0);
  std::vector<int> singular(nblocks, 0);

  auto run_block = [&](std::size_t b) {
    double* pcw = cw.data() + b * R;
    double* psx = sx.data() + b * R;
    cplx* pss = ss.data() + b * R;
    const std::size_t m0 = b * kBlock, m1 = std::min(M, m0 + kBlock);
    for (std::size_t m = m0; m < m1; ++m) {
      const double k = (2.0 * static_cast<double>(m) + 1.0) * kPi / (2.0 * static_cast<double>(M));
      ModeWeights wt;
      try {
        wt = mode_weights(bdg_mode(k, s));
      } catch (const Error&) {
        ++singular[b];
        continue;
      }
      const cplx step(std::cos(k), std::sin(k));
      cplx e(1.0, 0.0);
      for (std::size_t r = 0; r < R; ++r) {
        if (r % kReseed == 0) e = cplx(std::cos(k * static_cast<double>(r)), std::sin(k * static_cast<double>(r)));
        pcw[r] += e.real() * wt.w;
        psx[r] += e.imag() * wt.x;
        pss[r] += e.imag() * wt.s;
        e *= step;
      }
    }
  };

  const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(nblocks);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t b = 0; b < nb; ++b) run_block(static_cast<std::size_t>(b));
  } else {
    for (std::ptrdiff_t b = 0; b < nb; ++b) run_block(static_cast<std::size_t>(b));
  }

  std::vector<double> C(R, 0.0), X(R, 0.0);
  std::vector<cplx> Ssum(R, 0.0);
  int nsing = 0;
  for (std::size_t b = 0; b < nblocks; ++b) {
    nsing += singular[b];
    for (std::size_t r = 0; r < R; ++r) {
      C[r] += cw[b * R + r];
      X[r] += sx[b * R + r];
      Ssum[r] += ss[b * R + r];
    }
  }

  CorrelatorTable t;
  t.r_max = r_max;
  t.G.assign(2 * R - 1, 0.0);
  t.S.assign(R, 0.0);
  const double inv = 1.0 / static_cast<double>(M);
  for (std::size_t r = 0; r < R; ++r) {
    const int ri = static_cast<int>(r);
    t.G[static_cast<std::size_t>(r_max + ri)] = (-C[r] + X[r]) * inv;
    t.G[static_cast<std::size_t>(r_max - ri)] = (-C[r] - X[r]) * inv;
    if (r > 0) t.S[r] = Ssum[r] * inv;
  }
  if (nsing > 0) t.warnings.add(Code::ModeSingular, nsing);
  return t;
}

namespace {

cplx pair_value(const CorrelatorTable& t, const Majorana& x, const Majorana& y) {
  const int d = y.site - x.site;
  if (x.type == 'B' && y.type == 'A') return t.g_at(d);
  if (x.type == 'A' && y.type == 'B') return -t.g_at(-d);
  // <B_a B_b> = S_{b-a}, <A_a A_b> = Q_{b-a}; reversed order anticommutes.
  if (d == 0) return x.type == 'A' ? 1.0 : -1.0;
  return d > 0 ? t.s_at(d) : -t.s_at(-d);
}

template <typename T>
Matrix<T> assemble(const CorrelatorTable& t, const std::vector<Majorana>& ops) {
  const std::size_t n = ops.size();
  Matrix<T> m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = pair_value(t, ops[i], ops[j]);
      if constexpr (std::is_same_v<T, double>) {
        m(i, j) = v.real();
        m(j, i) = -v.real();
      } else {
        m(i, j) = v;
        m(j, i) = -v;
      }
    }
  return m;
}

cplx pf_of(const CorrelatorTable& t, const std::vector<Majorana>& ops) {
  if (t.is_real()) return pfaffian(assemble<double>(t, ops));
  return pfaffian(assemble<cplx>(t, ops));
}

}  // namespace

ComplexMatrix wick_matrix(const CorrelatorTable& t, const std::vector<Majorana>& ops) {
  return assemble<cplx>(t, ops);
}

std::vector<Majorana> two_spin_string(int r) {
  std::vector<Majorana> ops{{'A', 0}};
  for (int l = 1; l < r; ++l) {
    ops.push_back({'B', l});
    ops.push_back({'A', l});
  }
  ops.push_back({'B', r});
  return ops;
}

std::vector<Majorana> string_order_string(int r) {
  std::vector<Majorana> ops{{'B', 1}, {'B', 2}};
  for (int l = 3; l <= r; ++l) {
    ops.push_back({'A', l});
    ops.push_back({'B', l});
  }
  ops.push_back({'A', r + 1});
  ops.push_back({'A', r + 2});
  return ops;
}

cplx two_spin_correlation(const CorrelatorTable& t, int r) {
  if (r < 1 || r > t.r_max) throw Error(Code::InvalidArgument, "distance outside the correlator table");
  const cplx pf = pf_of(t, two_spin_string(r));
  return (r % 2 == 0) ? pf : -pf;
}

cplx string_correlation(const CorrelatorTable& t, int r) {
  if (r < 1 || r + 1 > t.r_max) throw Error(Code::InvalidArgument, "distance outside the correlator table");
  // Jordan-Wigner of sigma^x_1 sigma^y_2 ... sigma^x_{r+2} carries an extra
  // minus relative to the plain Majorana product.
  return -pf_of(t, string_order_string(r));
}

OrderParameters order_parameters(const ClusterSpec& s) {
  validate(s);
  const int r = s.r_eval;
  const double sign = (r % 2 == 0) ? 1.0 : -1.0;
  auto eval = [&](double lambda, OrderParameters* full) {
    ClusterSpec c = s;
    c.lambda = lambda;
    const CorrelatorTable t = correlator_elements(c, r + 2);
    const cplx R = two_spin_correlation(t, r);
    const cplx O = string_correlation(t, r);
    if (full) {
      full->R_y = R;
      full->O_r = O;
      full->warnings.merge(t.warnings);
    }
    return std::pair<double, double>{std::sqrt(std::max(sign * R.real(), 0.0)), sign * O.real()};
  };
  OrderParameters out;
  const auto [my, ox] = eval(s.lambda, &out);
  out.m_y = my;
  out.O_x = ox;
  const auto [my_p, ox_p] = eval(s.lambda + kOrderDerivStep, nullptr);
  const auto [my_m, ox_m] = eval(s.lambda - kOrderDerivStep, nullptr);
  out.dOx_dlambda = (ox_p - ox_m) / (2.0 * kOrderDerivStep);
  out.dmy_dlambda = (my_p - my_m) / (2.0 * kOrderDerivStep);
  return out;
}

ClusterParam cluster_param(const std::string& name) {
  if (name == "lambda") return ClusterParam::lambda;
  if (name == "Gamma") return ClusterParam::Gamma;
  throw Error(Code::InvalidArgument, "cluster metric parameter must be lambda or Gamma, got " + name);
}

MetricValue ground_state_metric(const ClusterSpec& s, ClusterParam p, double dmu, Exec exec) {
  validate(s);
  if (!(dmu > 0.0)) throw Error(Code::InvalidArgument, "metric step must be positive");
  const std::size_t M = static_cast<std::size_t>(s.n_modes);
  const std::size_t nblocks = (M + kBlock - 1) / kBlock;
  Warnings w;
  MetricValue v;
  double step = dmu;
  for (int attempt = 0; attempt <= 8; ++attempt) {
    ClusterSpec lo = s, hi = s;
    double& plo = (p == ClusterParam::lambda) ? lo.lambda : lo.Gamma;
    double& phi = (p == ClusterParam::lambda) ? hi.lambda : hi.Gamma;
    plo -= 0.5 * step;
    phi += 0.5 * step;
    std::vector<double> part(nblocks, 0.0);
    std::vector<int> singular(nblocks, 0);
    auto run_block = [&](std::size_t b) {
      const std::size_t m0 = b * kBlock, m1 = std::min(M, m0 + kBlock);
      for (std::size_t m = m0; m < m1; ++m) {
        const double k = (2.0 * static_cast<double>(m) + 1.0) * kPi / (2.0 * static_cast<double>(M));
        try {
          part[b] += mode_minus_log_f2(bdg_mode(k, lo), bdg_mode(k, hi));
        } catch (const Error&) {
          ++singular[b];
        }
      }
    };
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(nblocks);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t b = 0; b < nb; ++b) run_block(static_cast<std::size_t>(b));
    } else {
      for (std::ptrdiff_t b = 0; b < nb; ++b) run_block(static_cast<std::size_t>(b));
    }
    double total = 0.0;
    int nsing = 0;
    for (std::size_t b = 0; b < nblocks; ++b) {
      total += part[b];
      nsing += singular[b];
    }
    v.g = total / (step * step);
    v.xi = xi_of(v.g);
    v.fidelity = std::exp(-0.5 * total);
    v.step = step;
    if (nsing > 0) w.add(Code::ModeSingular, nsing);
    if (v.fidelity >= 0.5) break;
    w.add(Code::StepTooLarge);
    if (attempt < 8) step *= 0.5;
  }
  v.warnings = w;
  return v;
}

namespace {

// Applies a single-site Pauli ('x','y','z') to basis state `s` in place of
// bit `site` (bit value 0 = spin up). Returns the new state and phase.
std::pair<std::size_t, cplx> apply_pauli(char op, int site, std::size_t s) {
  const std::size_t bit = std::size_t{1} << site;
  const bool down = (s & bit) != 0;
  switch (op) {
    case 'x': return {s ^ bit, 1.0};
    case 'y': return {s ^ bit, down ? cplx(0.0, -1.0) : cplx(0.0, 1.0)};
    case 'z': return {s, down ? -1.0 : 1.0};
    default: return {s, 1.0};
  }
}

// <psi| P_1 P_2 ... |psi> for a product of single-site Paulis.
cplx pauli_expectation(const std::vector<cplx>& psi, const std::vector<std::pair<char, int>>& ops) {
  cplx acc = 0.0;
  for (std::size_t s = 0; s < psi.size(); ++s) {
    if (psi[s] == cplx(0.0)) continue;
    std::size_t t = s;
    cplx amp = psi[s];
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
      const auto [t2, ph] = apply_pauli(it->first, it->second, t);
      t = t2;
      amp *= ph;
    }
    acc += std::conj(psi[t]) * amp;
  }
  return acc;
}

}  // namespace

ComplexMatrix build_cluster_spin(int N, double lambda, double Gamma, double J) {
  if (N < 3 || N > 12) throw Error(Code::InvalidArgument, "cluster ED needs 3 <= N <= 12");
  const std::size_t D = std::size_t{1} << N;
  ComplexMatrix H(D);
  for (std::size_t s = 0; s < D; ++s) {
    for (int l = 0; l < N; ++l) {
      const int lm = (l + N - 1) % N, lp = (l + 1) % N;
      // -J sigma^x_{l-1} sigma^z_l sigma^x_{l+1}
      {
        auto [t, ph] = apply_pauli('x', lp, s);
        auto [t2, ph2] = apply_pauli('z', l, t);
        auto [t3, ph3] = apply_pauli('x', lm, t2);
        H(t3, s) += -J * ph * ph2 * ph3;
      }
      // lambda sigma^y_l sigma^y_{l+1}
      {
        auto [t, ph] = apply_pauli('y', lp, s);
        auto [t2, ph2] = apply_pauli('y', l, t);
        H(t2, s) += lambda * ph * ph2;
      }
      // (i Gamma / 2) sigma^u_l with sigma^u = diag(1, 0)
      if ((s & (std::size_t{1} << l)) == 0) H(s, s) += cplx(0.0, 0.5 * Gamma);
    }
  }
  return H;
}

EdOracleResult ed_oracle(int N, double lambda, double Gamma, double J) {
  const ComplexMatrix full = build_cluster_spin(N, lambda, Gamma, J);
  const std::size_t D = full.dim();
  std::vector<std::size_t> even;
  for (std::size_t s = 0; s < D; ++s)
    if (std::popcount(s) % 2 == 0) even.push_back(s);
  ComplexMatrix H(even.size());
  for (std::size_t i = 0; i < even.size(); ++i)
    for (std::size_t j = 0; j < even.size(); ++j) H(i, j) = full(even[i], even[j]);
  const EigenSystem es = eig_right(H);

  EdOracleResult out;
  out.energy = es.eigenvalues[0];
  out.warnings = es.warnings;
  std::vector<cplx> psi(D, 0.0);
  for (std::size_t i = 0; i < even.size(); ++i) psi[even[i]] = es.vectors(i, 0);

  for (int r = 1; r <= 3; ++r) {
    out.R_y.push_back(pauli_expectation(psi, {{'y', 0}, {'y', r % N}}));
    // sigma^x_1 sigma^y_2 (prod_{l=3}^{r} sigma^z_l) sigma^y_{r+1} sigma^x_{r+2}, sites shifted to 0-based.
    std::vector<std::pair<char, int>> ops{{'x', 0}, {'y', 1}};
    for (int l = 3; l <= r; ++l) ops.push_back({'z', (l - 1) % N});
    ops.push_back({'y', r % N});
    ops.push_back({'x', (r + 1) % N});
    out.O_x.push_back(pauli_expectation(psi, ops));
  }
  return out;
}

}  // namespace nhqm
