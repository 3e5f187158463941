// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Config-driven parameter sweeps, peak detection, finite-size scaling and
// CSV/JSON export.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nhqm/model.hpp"

namespace nhqm {

struct Axis {
  std::string parameter;
  double start = 0.0;
  double stop = 1.0;
  int count = 2;

  double value(int i) const;
  double step() const { return (stop - start) / (count - 1); }
};

enum class Format { CSV, JSON };

struct SweepConfig {
  ModelSpec model = Gaa1Spec{};
  Axis axis1;
  std::optional<Axis> axis2;
  std::vector<std::string> observables;
  double metric_step = 1e-4;
  int workers = 1;
  std::string output;  // empty: no file written
  Format format = Format::CSV;
  // Parameter whose metric is computed; empty means axis1.parameter.
  std::string metric_parameter;
  // 1-based eigenstate for the metric, eta and pr observables.
  int state = 1;
  double prominence = 0.5;
};

// Throws ConfigInvalid describing the first violated rule.
void validate(const SweepConfig& c);

// Column of a sweep table. Complex columns serialize as <name>_re, <name>_im.
struct Column {
  std::string name;
  bool complex = false;
};

std::vector<Column> observable_columns(const std::string& observable);

struct SweepRecord {
  std::vector<double> params;  // one per axis
  std::vector<cplx> values;    // one per column; NaN marks a failed point
  Warnings warnings;
  std::string error;  // empty unless the point threw
};

struct SweepResult {
  std::vector<std::string> axes;
  std::vector<Column> columns;
  std::vector<SweepRecord> records;  // row-major over (axis1, axis2)
};

// Worker count after applying the NHQM_MAX_WORKERS cap.
int effective_workers(int requested);

SweepResult run_sweep(const SweepConfig& c);
SweepRecord evaluate_point(const SweepConfig& c, const std::vector<Column>& columns, const ModelSpec& m);

enum class Detection { metricPeak, derivativeSingularity, orderOnset };
const char* detection_name(Detection d);

struct CriticalPoint {
  double x = 0.0;
  double height = 0.0;
  double prominence = 0.0;
  Detection method = Detection::metricPeak;
};

// Interior local maxima whose topographic prominence reaches `threshold`,
// refined by a parabola through the three samples around each maximum.
// Throws SeriesTooShort below five points.
std::vector<CriticalPoint> detect_peaks(const std::vector<double>& x, const std::vector<double>& y,
                                        double threshold = 0.5, Detection method = Detection::metricPeak);

// Index of the maximum of the running median of y over `width` samples (odd).
// A spike narrower than width / 2 + 1 samples, such as an unresolved avoided
// crossing, cannot win. Ties on the median go to the larger raw sample, then
// to the first index.
std::size_t resolved_argmax(const std::vector<double>& y, std::size_t width = 3);

struct SizePeak {
  int L = 0;
  double x = 0.0;   // peak position
  double xi = 0.0;  // log10 of the metric at the peak
  Warnings warnings;
};

struct FssResult {
  FitResult fit;  // xi_peak against log10 L
  std::vector<SizePeak> peaks;
};

struct FssOptions {
  int grid_points = 13;
  int refine_iterations = 16;  // golden-section steps around the grid maximum
  double prominence = 0.5;
  double metric_step = 1e-4;
  int workers = 1;
  // Shrink later windows around the previous size's peak (half width in
  // units of the original window); 0 disables.
  double narrow = 0.0;
};

// Thrown by finite_size_scaling when a size has no qualifying peak; carries
// the sizes completed so far.
class PeakNotFound : public Error {
 public:
  PeakNotFound(const std::string& what, std::vector<SizePeak> partial)
      : Error(Code::PeakNotFound, what), partial_(std::move(partial)) {}
  const std::vector<SizePeak>& partial() const { return partial_; }

 private:
  std::vector<SizePeak> partial_;
};

FssResult finite_size_scaling(const ModelSpec& model, const std::vector<int>& sizes, const std::string& parameter,
                              double lo, double hi, const FssOptions& opts = {});

// Ground-state metric xi maximized by golden section on [a, b].
SizePeak refine_peak(const ModelSpec& model, const std::string& parameter, double a, double b, int iterations,
                     double metric_step);

// Export and import. CSV writes a sidecar <path>.meta.json.
void export_records(const SweepResult& r, const SweepConfig& c, Format f, const std::string& path);
SweepResult import_json(const std::string& path);
// Reads a CSV written by export_records (header plus rows).
SweepResult import_csv(const std::string& path);
std::string format_double(double v);
// Header plus one line per record, as written by export_records.
std::string csv_body(const SweepResult& r);
std::string config_to_json(const SweepConfig& c);
SweepConfig config_from_json(const std::string& text);
SweepConfig load_config(const std::string& path);

}  // namespace nhqm
