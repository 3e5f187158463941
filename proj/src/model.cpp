// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0

#include "nhqm/model.hpp"

#include <algorithm>
#include <cmath>

namespace nhqm {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Pointer to the named double field, or nullptr.
double* real_field(ModelSpec& m, const std::string& n) {
  return std::visit(overloaded{
                        [&](Gaa1Spec& s) -> double* {
                          if (n == "t") return &s.t;
                          if (n == "V1") return &s.V1;
                          if (n == "V2") return &s.V2;
                          if (n == "g") return &s.g;
                          if (n == "h") return &s.h;
                          if (n == "zeta") return &s.zeta;
                          return nullptr;
                        },
                        [&](Gaa2Spec& s) -> double* {
                          if (n == "t") return &s.t;
                          if (n == "Delta") return &s.Delta;
                          if (n == "alpha") return &s.alpha;
                          if (n == "g") return &s.g;
                          if (n == "zeta") return &s.zeta;
                          return nullptr;
                        },
                        [&](ClusterSpec& s) -> double* {
                          if (n == "J") return &s.J;
                          if (n == "lambda") return &s.lambda;
                          if (n == "Gamma") return &s.Gamma;
                          return nullptr;
                        },
                        [&](MixedSpec& s) -> double* {
                          if (n == "J") return &s.J;
                          if (n == "h_x") return &s.h_x;
                          if (n == "h_z") return &s.h_z;
                          return nullptr;
                        },
                    },
                    m);
}

int* int_field(ModelSpec& m, const std::string& n) {
  return std::visit(overloaded{
                        [&](Gaa1Spec& s) -> int* { return n == "L" ? &s.L : nullptr; },
                        [&](Gaa2Spec& s) -> int* { return n == "L" ? &s.L : nullptr; },
                        [&](ClusterSpec& s) -> int* {
                          if (n == "n_modes") return &s.n_modes;
                          if (n == "r_eval") return &s.r_eval;
                          return nullptr;
                        },
                        [&](MixedSpec& s) -> int* { return n == "N" ? &s.N : nullptr; },
                    },
                    m);
}

}  // namespace

std::string model_name(const ModelSpec& m) {
  static const char* names[] = {"gaa1", "gaa2", "cluster", "mixed"};
  return names[m.index()];
}

ModelSpec default_model(const std::string& name) {
  if (name == "gaa1") return Gaa1Spec{};
  if (name == "gaa2") return Gaa2Spec{};
  if (name == "cluster") return ClusterSpec{};
  if (name == "mixed") return MixedSpec{};
  throw Error(Code::InvalidArgument, "unknown model " + name);
}

std::vector<std::string> real_parameters(const ModelSpec& m) {
  switch (m.index()) {
    case 0: return {"t", "V1", "V2", "g", "h", "zeta"};
    case 1: return {"t", "Delta", "alpha", "g", "zeta"};
    case 2: return {"J", "lambda", "Gamma"};
    default: return {"J", "h_x", "h_z"};
  }
}

std::vector<std::string> integer_parameters(const ModelSpec& m) {
  switch (m.index()) {
    case 0:
    case 1: return {"L"};
    case 2: return {"n_modes", "r_eval"};
    default: return {"N"};
  }
}

bool has_real_parameter(const ModelSpec& m, const std::string& name) {
  const auto names = real_parameters(m);
  return std::find(names.begin(), names.end(), name) != names.end();
}

double get_parameter(const ModelSpec& m, const std::string& name) {
  ModelSpec copy = m;
  if (double* p = real_field(copy, name)) return *p;
  if (int* p = int_field(copy, name)) return *p;
  throw Error(Code::InvalidArgument, "model " + model_name(m) + " has no parameter " + name);
}

void set_parameter(ModelSpec& m, const std::string& name, double value) {
  if (double* p = real_field(m, name)) {
    *p = value;
    return;
  }
  if (int* p = int_field(m, name)) {
    if (value != std::floor(value)) throw Error(Code::InvalidArgument, name + " must be an integer");
    *p = static_cast<int>(value);
    return;
  }
  throw Error(Code::InvalidArgument, "model " + model_name(m) + " has no parameter " + name);
}

void validate(const ModelSpec& m) {
  std::visit([](const auto& s) { validate(s); }, m);
}

ComplexMatrix build_matrix(const ModelSpec& m) {
  return std::visit(overloaded{
                        [](const Gaa1Spec& s) { return build_gaa1(s); },
                        [](const Gaa2Spec& s) { return build_gaa2(s); },
                        [](const ClusterSpec&) -> ComplexMatrix {
                          throw Error(Code::InvalidArgument, "the cluster model has no dense matrix; use ed_oracle");
                        },
                        [](const MixedSpec& s) { return to_complex(mixed_real_form(s)); },
                    },
                    m);
}

MatrixFamily matrix_family(const ModelSpec& m, const std::string& param) {
  if (m.index() == 2) throw Error(Code::InvalidArgument, "the cluster metric is evaluated per mode");
  if (!has_real_parameter(m, param))
    throw Error(Code::InvalidArgument, "model " + model_name(m) + " has no real parameter " + param);
  return [m, param](double mu) {
    ModelSpec c = m;
    set_parameter(c, param, mu);
    return build_matrix(c);
  };
}

std::vector<MetricValue> evaluate_metric(const MetricRequest& req) {
  if (!(req.step > 0.0)) throw Error(Code::InvalidArgument, "metric step must be positive");
  const double mu = get_parameter(req.model, req.parameter);
  if (const auto* c = std::get_if<ClusterSpec>(&req.model)) {
    if (req.state_index != 1) throw Error(Code::InvalidArgument, "cluster metric is defined for the ground state only");
    return {ground_state_metric(*c, cluster_param(req.parameter), req.step)};
  }
  if (const auto* s = std::get_if<MixedSpec>(&req.model); s && s->h_x == 0.0 && s->h_z != 0.0)
    throw Error(Code::DegenerateGroundState, "h_x = 0 with h_z != 0");
  const MatrixFamily f = matrix_family(req.model, req.parameter);
  MetricOptions opts;
  opts.step = req.step;
  if (req.state_index == kAllStates) return metric_spectrum(f, mu, opts);
  return {metric_diagonal(f, mu, req.state_index, opts)};
}

}  // namespace nhqm
