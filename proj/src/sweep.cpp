// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0

#include "nhqm/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

namespace nhqm {
namespace {

const std::vector<std::string>& allowed_observables(const ModelSpec& m) {
  static const std::vector<std::string> gaa{"metric", "eta", "pr", "spectrum"};
  static const std::vector<std::string> cluster{"metric", "gaps", "order_params"};
  static const std::vector<std::string> mixed{"metric", "magnetization", "spectrum"};
  if (m.index() <= 1) return gaa;
  if (m.index() == 2) return cluster;
  return mixed;
}

[[noreturn]] void invalid(const std::string& why) { throw Error(Code::ConfigInvalid, why); }

void check_axis(const ModelSpec& m, const Axis& a, const char* label) {
  if (a.count < 2) invalid(std::string(label) + ".count must be >= 2");
  if (!(a.stop > a.start)) invalid(std::string(label) + ".stop must exceed start");
  const auto ints = integer_parameters(m);
  const bool is_int = std::find(ints.begin(), ints.end(), a.parameter) != ints.end();
  if (!has_real_parameter(m, a.parameter) && !is_int)
    invalid(std::string(label) + ".parameter '" + a.parameter + "' is not a field of model " + model_name(m));
  if (is_int && (a.start != std::floor(a.start) || a.step() != std::floor(a.step())))
    invalid(std::string(label) + " over integer field " + a.parameter + " must hit whole numbers");
}

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// Placeholder for a point that did not produce values. Real columns keep a
// zero imaginary part so that exports round-trip.
std::vector<cplx> failed_values(const std::vector<Column>& columns) {
  std::vector<cplx> v;
  for (const auto& col : columns) v.emplace_back(kNaN, col.complex ? kNaN : 0.0);
  return v;
}

}  // namespace

double Axis::value(int i) const {
  if (i == count - 1) return stop;
  return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
}

void validate(const SweepConfig& c) {
  check_axis(c.model, c.axis1, "axis1");
  if (c.axis2) {
    check_axis(c.model, *c.axis2, "axis2");
    if (c.axis2->parameter == c.axis1.parameter) invalid("axis1 and axis2 sweep the same parameter");
  }
  if (c.observables.empty()) invalid("observables must be nonempty");
  const auto& ok = allowed_observables(c.model);
  std::set<std::string> seen;
  for (const auto& o : c.observables) {
    if (std::find(ok.begin(), ok.end(), o) == ok.end())
      invalid("observable '" + o + "' is not available for model " + model_name(c.model));
    if (!seen.insert(o).second) invalid("observable '" + o + "' listed twice");
  }
  if (!(c.metric_step > 0.0)) invalid("metric_step must be positive");
  if (c.workers < 1) invalid("workers must be >= 1");
  if (c.state < 1) invalid("state must be >= 1");
  if (c.model.index() == 2 && c.state != 1) invalid("the cluster model only has a ground-state metric");
  if (!(c.prominence > 0.0)) invalid("prominence must be positive");
  const std::string mp = c.metric_parameter.empty() ? c.axis1.parameter : c.metric_parameter;
  if (seen.count("metric") && !has_real_parameter(c.model, mp))
    invalid("metric parameter '" + mp + "' is not a real field of model " + model_name(c.model));
  if (c.model.index() == 3 && c.state != 1 && (seen.count("magnetization")))
    invalid("magnetization is defined for the ground state only");
  try {
    validate(c.model);
  } catch (const Error& e) {
    invalid(std::string("model: ") + e.what());
  }
}

std::vector<Column> observable_columns(const std::string& o) {
  if (o == "metric") return {{"g", false}, {"xi", false}};
  if (o == "eta") return {{"eta", false}};
  if (o == "pr") return {{"pr", false}};
  if (o == "gaps") return {{"delta_R", false}, {"delta_I", false}};
  if (o == "order_params") return {{"m_y", false}, {"O_x", false}, {"dOx_dlambda", false}, {"dmy_dlambda", false}};
  if (o == "magnetization") return {{"Mz", true}};
  if (o == "spectrum") return {{"E", true}};
  throw Error(Code::ConfigInvalid, "unknown observable " + o);
}

int effective_workers(int requested) {
  int w = std::max(1, requested);
  if (const char* env = std::getenv("NHQM_MAX_WORKERS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) w = std::min(w, cap);
  }
  return w;
}

namespace {

struct StateData {
  cplx energy;
  std::vector<cplx> psi;
  Warnings warnings;
};

StateData chosen_state(const SweepConfig& c, const ModelSpec& m) {
  StateData d;
  if (const auto* s = std::get_if<MixedSpec>(&m)) {
    if (c.state == 1) {
      GroundState gs = mixed_ground_state(*s);
      return {gs.energy, std::move(gs.psi), gs.warnings};
    }
    if (s->h_x == 0.0 && s->h_z != 0.0) throw Error(Code::DegenerateGroundState, "h_x = 0 with h_z != 0");
    const EigenSystem es = eig_right(build_matrix(m));
    if (static_cast<std::size_t>(c.state) > es.dim()) throw Error(Code::InvalidArgument, "state exceeds dimension");
    return {es.eigenvalues[c.state - 1], mixed_from_real_basis(es.vector(c.state - 1), s->N), es.warnings};
  }
  const ComplexMatrix h = build_matrix(m);
  if (c.state == 1) {
    GroundState gs = ground_state(h);
    return {gs.energy, std::move(gs.psi), gs.warnings};
  }
  const EigenSystem es = eig_right(h);
  if (static_cast<std::size_t>(c.state) > es.dim()) throw Error(Code::InvalidArgument, "state exceeds dimension");
  return {es.eigenvalues[c.state - 1], es.vector(c.state - 1), es.warnings};
}

int site_count(const ModelSpec& m) {
  if (const auto* s = std::get_if<Gaa1Spec>(&m)) return s->L;
  if (const auto* s = std::get_if<Gaa2Spec>(&m)) return s->L;
  if (const auto* s = std::get_if<MixedSpec>(&m)) return s->N;
  return 0;
}

}  // namespace

SweepRecord evaluate_point(const SweepConfig& c, const std::vector<Column>& columns, const ModelSpec& m) {
  SweepRecord rec;
  rec.values = failed_values(columns);
  const std::string mp = c.metric_parameter.empty() ? c.axis1.parameter : c.metric_parameter;

  std::optional<StateData> state;
  auto need_state = [&]() -> const StateData& {
    if (!state) {
      state = chosen_state(c, m);
      rec.warnings.merge(state->warnings);
    }
    return *state;
  };

  std::size_t col = 0;
  for (const auto& obs : c.observables) {
    const std::size_t width = observable_columns(obs).size();
    try {
      std::vector<cplx> v;
      if (obs == "metric") {
        MetricRequest req{m, mp, static_cast<std::size_t>(c.state), c.metric_step};
        const MetricValue mv = evaluate_metric(req).front();
        rec.warnings.merge(mv.warnings);
        v = {mv.g, mv.xi};
      } else if (obs == "eta") {
        v = {fractal_dimension(need_state().psi, site_count(m))};
      } else if (obs == "pr") {
        v = {participation_ratio(need_state().psi, site_count(m))};
      } else if (obs == "spectrum") {
        v = {need_state().energy};
      } else if (obs == "magnetization") {
        v = {magnetization(need_state().psi, site_count(m))};
      } else if (obs == "gaps") {
        const GapPair gp = gaps(std::get<ClusterSpec>(m));
        v = {gp.delta_R, gp.delta_I};
      } else if (obs == "order_params") {
        const OrderParameters op = order_parameters(std::get<ClusterSpec>(m));
        rec.warnings.merge(op.warnings);
        v = {op.m_y, op.O_x, op.dOx_dlambda, op.dmy_dlambda};
      }
      for (std::size_t k = 0; k < width; ++k) rec.values[col + k] = v[k];
    } catch (const Error& e) {
      rec.warnings.add(e.code());
      if (!rec.error.empty()) rec.error += "; ";
      rec.error += obs + ": " + e.what();
    }
    col += width;
  }
  return rec;
}

SweepResult run_sweep(const SweepConfig& c) {
  validate(c);
  SweepResult out;
  out.axes.push_back(c.axis1.parameter);
  if (c.axis2) out.axes.push_back(c.axis2->parameter);
  for (const auto& o : c.observables)
    for (const auto& col : observable_columns(o)) out.columns.push_back(col);

  const int n1 = c.axis1.count, n2 = c.axis2 ? c.axis2->count : 1;
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(n1) * n2;
  out.records.resize(static_cast<std::size_t>(total));
  const int workers = effective_workers(c.workers);

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const int i1 = static_cast<int>(idx / n2), i2 = static_cast<int>(idx % n2);
    ModelSpec m = c.model;
    std::vector<double> params{c.axis1.value(i1)};
    if (c.axis2) params.push_back(c.axis2->value(i2));
    SweepRecord rec;
    try {
      set_parameter(m, c.axis1.parameter, params[0]);
      if (c.axis2) set_parameter(m, c.axis2->parameter, params[1]);
      validate(m);
      rec = evaluate_point(c, out.columns, m);
    } catch (const Error& e) {
      rec.values = failed_values(out.columns);
      rec.warnings.add(e.code());
      rec.error = e.what();
    }
    rec.params = std::move(params);
    out.records[static_cast<std::size_t>(idx)] = std::move(rec);
  }
  return out;
}

SizePeak refine_peak(const ModelSpec& model, const std::string& parameter, double a, double b, int iterations,
                     double metric_step) {
  const MatrixFamily f = matrix_family(model, parameter);
  MetricOptions opts;
  opts.step = metric_step;
  SizePeak best;
  best.xi = -std::numeric_limits<double>::infinity();
  auto eval = [&](double x) {
    const MetricValue v = metric_ground_state(f, x, opts);
    best.warnings.merge(v.warnings);
    if (v.xi > best.xi) {
      best.xi = v.xi;
      best.x = x;
    }
    return v.xi;
  };
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = eval(x2);
    }
  }
  return best;
}

FssResult finite_size_scaling(const ModelSpec& model, const std::vector<int>& sizes, const std::string& parameter,
                              double lo, double hi, const FssOptions& opts) {
  if (sizes.size() < 3) throw Error(Code::InvalidArgument, "finite-size scaling needs at least three sizes");
  if (model.index() > 1) throw Error(Code::InvalidArgument, "finite-size scaling supports the gaa1 and gaa2 models");
  if (!has_real_parameter(model, parameter)) throw Error(Code::InvalidArgument, "unknown parameter " + parameter);
  if (!(hi > lo) || opts.grid_points < 5) throw Error(Code::InvalidArgument, "bad search window");

  FssResult out;
  double half = 0.5 * (hi - lo), center = 0.5 * (hi + lo);
  const int workers = effective_workers(opts.workers);
  for (int L : sizes) {
    ModelSpec m = model;
    set_parameter(m, "L", L);
    validate(m);
    const MatrixFamily f = matrix_family(m, parameter);
    MetricOptions mo;
    mo.step = opts.metric_step;

    const int n = opts.grid_points;
    std::vector<double> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
    std::vector<Warnings> ws(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = center - half + 2.0 * half * i / (n - 1);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (int i = 0; i < n; ++i) {
      const MetricValue v = metric_ground_state(f, xs[static_cast<std::size_t>(i)], mo);
      ys[static_cast<std::size_t>(i)] = v.xi;
      ws[static_cast<std::size_t>(i)] = v.warnings;
    }
    const auto peaks = detect_peaks(xs, ys, opts.prominence);
    if (peaks.empty())
      throw PeakNotFound("no peak with prominence >= " + format_double(opts.prominence) + " at L = " +
                             std::to_string(L),
                         out.peaks);
    const auto top = std::max_element(peaks.begin(), peaks.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
      return a.height < b.height;
    });
    // Bracket the grid sample nearest the detected peak.
    std::size_t k = 0;
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (std::abs(xs[i] - top->x) < std::abs(xs[k] - top->x)) k = i;
    const double dx = xs[1] - xs[0];
    SizePeak sp = refine_peak(m, parameter, xs[k] - dx, xs[k] + dx, opts.refine_iterations, opts.metric_step);
    if (ys[k] > sp.xi) {
      sp.xi = ys[k];
      sp.x = xs[k];
    }
    sp.L = L;
    for (const auto& w : ws) sp.warnings.merge(w);
    out.peaks.push_back(sp);
    if (opts.narrow > 0.0) {
      center = sp.x;
      half *= opts.narrow;
    }
  }
  std::vector<double> lx, ly;
  for (const auto& p : out.peaks) {
    lx.push_back(std::log10(static_cast<double>(p.L)));
    ly.push_back(p.xi);
  }
  out.fit = fit_linear(lx, ly);
  return out;
}

}  // namespace nhqm
