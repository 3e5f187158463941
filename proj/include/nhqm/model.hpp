// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Tagged model description and the by-name parameter access used by sweeps,
// metric requests and the command line.

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "nhqm/cluster.hpp"
#include "nhqm/metric.hpp"
#include "nhqm/mixed.hpp"
#include "nhqm/quasiperiodic.hpp"

namespace nhqm {

using ModelSpec = std::variant<Gaa1Spec, Gaa2Spec, ClusterSpec, MixedSpec>;

std::string model_name(const ModelSpec& m);  // "gaa1", "gaa2", "cluster", "mixed"
ModelSpec default_model(const std::string& name);

// Names of real-valued fields usable as metric parameters or sweep axes.
std::vector<std::string> real_parameters(const ModelSpec& m);
// Names of integer fields (sizes, mode counts).
std::vector<std::string> integer_parameters(const ModelSpec& m);

bool has_real_parameter(const ModelSpec& m, const std::string& name);
double get_parameter(const ModelSpec& m, const std::string& name);
// Sets a real or integer field; integers must be given as whole numbers.
// Throws InvalidArgument for unknown names.
void set_parameter(ModelSpec& m, const std::string& name, double value);
void validate(const ModelSpec& m);

// H(mu) with `param` replaced by mu. For the mixed model this is the real
// similar form, which has identical fidelities. Not defined for the cluster
// model, whose metric is evaluated mode by mode.
MatrixFamily matrix_family(const ModelSpec& m, const std::string& param);
ComplexMatrix build_matrix(const ModelSpec& m);

inline constexpr std::size_t kAllStates = 0;

struct MetricRequest {
  ModelSpec model;
  std::string parameter;
  std::size_t state_index = 1;  // 1-based; kAllStates for the whole spectrum
  double step = 1e-4;
};

std::vector<MetricValue> evaluate_metric(const MetricRequest& req);

}  // namespace nhqm
