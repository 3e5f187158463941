// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0

#include "nhqm/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhqm {

double xi_of(double g) { return std::log10(std::max(g, kXiFloor)); }

double fidelity(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(Code::InvalidArgument, "fidelity needs equal lengths");
  if (std::abs(norm2(a) - 1.0) > 1e-10 || std::abs(norm2(b) - 1.0) > 1e-10)
    throw Error(Code::NotNormalized, "fidelity arguments must have unit norm");
  return std::exp(-0.5 * minus_log_fidelity_sq(a, b));
}

double minus_log_fidelity_sq(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  const double nb2 = std::norm(norm2(b));
  const double na2 = std::norm(norm2(a));
  std::vector<cplx> perp(a.begin(), a.end());
  for (int pass = 0; pass < 2; ++pass) {
    const cplx c = inner(b, perp) / nb2;
    for (std::size_t i = 0; i < n; ++i) perp[i] -= c * b[i];
  }
  const double q = std::min(std::norm(norm2(perp)) / na2, 1.0);
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-q);
}

MetricValue metric_from_pair(std::span<const cplx> a, std::span<const cplx> b, double step) {
  MetricValue v;
  const double mlf = minus_log_fidelity_sq(a, b);
  v.fidelity = std::exp(-0.5 * mlf);
  v.g = mlf / (step * step);
  v.xi = xi_of(v.g);
  v.step = step;
  return v;
}

namespace {

// Distance below which a competitor could take over the ground state when
// the parameter moves by half a step.
double ground_margin(const std::vector<cplx>& ev) {
  const cplx e1 = ev[0];
  double scale = 1.0;
  for (const cplx& e : ev) scale = std::max(scale, std::abs(e));
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < ev.size(); ++j) {
    m = std::min(m, std::abs(ev[j] - e1));
    const double dre = ev[j].real() - e1.real();
    if (dre > kRealTieTol * scale) m = std::min(m, dre);
  }
  return m;
}

GroundState tracked_ground_state(const ComplexMatrix& h, bool track, cplx e1, double margin) {
  if (track) {
    GroundState gs;
    cplx e;
    if (inverse_iteration(h, e1, gs.psi, e) && std::abs(e - e1) <= 0.25 * margin) {
      gs.energy = e;
      return gs;
    }
  }
  return ground_state(h);
}

}  // namespace

MetricValue metric_ground_state(const MatrixFamily& family, double mu, const MetricOptions& opts) {
  double step = opts.step;
  if (!(step > 0.0)) throw Error(Code::InvalidArgument, "metric step must be positive");

  Warnings w;
  MetricValue v;
  for (int attempt = 0; attempt <= opts.max_halvings; ++attempt) {
    // The lower point is solved outright; the upper one is tracked from it
    // when the lower spectrum shows a clear ground-state margin.
    std::vector<cplx> ev;
    const GroundState lo = ground_state(family(mu - 0.5 * step), opts.continuation ? &ev : nullptr);
    bool track = false;
    double margin = 0.0;
    if (ev.size() > 1) {
      margin = ground_margin(ev);
      double scale = 1.0;
      for (const cplx& e : ev) scale = std::max(scale, std::abs(e));
      track = margin > 1e-8 * scale;
    }
    const GroundState hi = tracked_ground_state(family(mu + 0.5 * step), track, lo.energy, margin);
    w.merge(lo.warnings);
    w.merge(hi.warnings);
    v = metric_from_pair(lo.psi, hi.psi, step);
    if (v.fidelity >= 0.5) break;
    w.add(Code::StepTooLarge);
    if (attempt < opts.max_halvings) step *= 0.5;
  }
  v.warnings = w;
  return v;
}

std::vector<MetricValue> metric_spectrum(const MatrixFamily& family, double mu, const MetricOptions& opts,
                                         std::vector<cplx>* energies) {
  double step = opts.step;
  if (!(step > 0.0)) throw Error(Code::InvalidArgument, "metric step must be positive");
  std::vector<MetricValue> out;
  std::vector<char> pending;
  for (int attempt = 0; attempt <= opts.max_halvings; ++attempt) {
    const EigenSystem lo = eig_right(family(mu - 0.5 * step));
    const EigenSystem hi = eig_right(family(mu + 0.5 * step));
    const std::size_t n = lo.dim();
    if (attempt == 0) {
      out.assign(n, MetricValue{});
      pending.assign(n, 1);
      if (energies) *energies = lo.eigenvalues;
    }
    Warnings shared = lo.warnings;
    shared.merge(hi.warnings);
    const std::vector<std::size_t> perm = match_states(lo, hi);
    bool again = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (!pending[s]) continue;
      const std::vector<cplx> a = lo.vector(s), b = hi.vector(perm[s]);
      Warnings keep = out[s].warnings;
      keep.merge(shared);
      out[s] = metric_from_pair(a, b, step);
      if (out[s].fidelity < 0.5) {
        keep.add(Code::StepTooLarge);
        if (attempt == opts.max_halvings) keep.add(Code::AmbiguousMatch);
        again = true;
      } else {
        pending[s] = 0;
      }
      out[s].warnings = keep;
    }
    if (!again) break;
    step *= 0.5;
  }
  return out;
}

MetricValue metric_diagonal(const MatrixFamily& family, double mu, std::size_t n, const MetricOptions& opts) {
  if (n == 0) throw Error(Code::InvalidArgument, "state index is 1-based");
  if (n == 1) return metric_ground_state(family, mu, opts);
  const std::vector<MetricValue> all = metric_spectrum(family, mu, opts);
  if (n > all.size()) throw Error(Code::InvalidArgument, "state index exceeds dimension");
  return all[n - 1];
}

}  // namespace nhqm
