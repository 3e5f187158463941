// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0
//
// nhqm: parameter sweeps, finite-size scaling and peak extraction.
//
//   nhqm gaa1 --config sweep.json --V2 0.7 --output out.csv
//   nhqm fss --model gaa1 --set V2=0.5 --set g=0.5 --parameter V1 \
//       --sizes 34,144,610 --window 2.5,3.7
//   nhqm peaks out.csv --column xi

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "nhqm/sweep.hpp"

namespace {

using namespace nhqm;

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct SweepFlags {
  std::string name;
  std::string config;
  std::map<std::string, std::optional<double>> overrides;
  std::string bc;
  std::string axis1, axis2;
  std::vector<std::string> observables;
  std::optional<double> metric_step;
  std::optional<int> workers;
  std::optional<int> state;
  std::optional<double> prominence;
  std::string metric_parameter;
  std::string output;
  std::string format;
};

Axis parse_axis_flag(const std::string& s) {
  // parameter:start:stop:count
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 4) throw Error(Code::ConfigInvalid, "axis must be parameter:start:stop:count, got " + s);
  try {
    Axis a;
    a.parameter = parts[0];
    a.start = std::stod(parts[1]);
    a.stop = std::stod(parts[2]);
    a.count = std::stoi(parts[3]);
    return a;
  } catch (const std::exception&) {
    throw Error(Code::ConfigInvalid, "malformed axis " + s);
  }
}

void add_sweep_command(CLI::App& app, const std::string& name, SweepFlags& f) {
  f.name = name;
  CLI::App* sub = app.add_subcommand(name, "sweep the " + name + " model");
  sub->add_option("--config", f.config, "JSON sweep config")->check(CLI::ExistingFile);
  const ModelSpec m = default_model(name);
  std::vector<std::string> fields = integer_parameters(m);
  for (const auto& p : real_parameters(m)) fields.push_back(p);
  for (const auto& p : fields) {
    f.overrides[p];
    sub->add_option("--" + p, f.overrides[p], "override model field " + p);
  }
  if (name == "mixed") sub->add_option("--bc", f.bc, "boundary condition")->check(CLI::IsMember({"PBC", "OBC"}));
  sub->add_option("--axis1", f.axis1, "parameter:start:stop:count");
  sub->add_option("--axis2", f.axis2, "parameter:start:stop:count");
  sub->add_option("--observables", f.observables, "observables to record")->delimiter(',');
  sub->add_option("--metric-step", f.metric_step, "finite-difference step");
  sub->add_option("--workers", f.workers, "worker threads");
  sub->add_option("--state", f.state, "1-based eigenstate index");
  sub->add_option("--prominence", f.prominence, "peak prominence threshold (xi units)");
  sub->add_option("--metric-parameter", f.metric_parameter, "parameter differentiated by the metric");
  sub->add_option("--output", f.output, "output file");
  sub->add_option("--format", f.format, "CSV or JSON")->check(CLI::IsMember({"CSV", "JSON"}));
}

SweepConfig assemble(const SweepFlags& f) {
  SweepConfig c;
  if (!f.config.empty()) {
    c = load_config(f.config);
    if (model_name(c.model) != f.name)
      throw Error(Code::ConfigInvalid, "config describes model " + model_name(c.model) + ", not " + f.name);
  } else {
    c.model = default_model(f.name);
  }
  try {
    for (const auto& [k, v] : f.overrides)
      if (v) set_parameter(c.model, k, *v);
  } catch (const Error& e) {
    throw Error(Code::ConfigInvalid, e.what());
  }
  if (!f.bc.empty()) std::get<MixedSpec>(c.model).bc = f.bc == "PBC" ? Boundary::PBC : Boundary::OBC;
  if (!f.axis1.empty()) c.axis1 = parse_axis_flag(f.axis1);
  if (!f.axis2.empty()) c.axis2 = parse_axis_flag(f.axis2);
  if (!f.observables.empty()) c.observables = f.observables;
  if (f.metric_step) c.metric_step = *f.metric_step;
  if (f.workers) c.workers = *f.workers;
  if (f.state) c.state = *f.state;
  if (f.prominence) c.prominence = *f.prominence;
  if (!f.metric_parameter.empty()) c.metric_parameter = f.metric_parameter;
  if (!f.output.empty()) c.output = f.output;
  if (!f.format.empty()) c.format = f.format == "CSV" ? Format::CSV : Format::JSON;
  if (f.config.empty() && f.axis1.empty()) throw Error(Code::ConfigInvalid, "either --config or --axis1 is required");
  validate(c);
  return c;
}

int run_sweep_command(const SweepFlags& f) {
  const SweepConfig c = assemble(f);
  const SweepResult r = run_sweep(c);
  int failed = 0;
  for (const auto& rec : r.records) failed += rec.error.empty() ? 0 : 1;
  if (!c.output.empty()) {
    export_records(r, c, c.format, c.output);
    std::fprintf(stderr, "wrote %zu records to %s\n", r.records.size(), c.output.c_str());
  } else {
    std::cout << csv_body(r);
  }
  if (failed) std::fprintf(stderr, "%d of %zu points recorded errors\n", failed, r.records.size());
  return 0;
}

struct FssFlags {
  std::string model = "gaa1";
  std::vector<std::string> sets;
  std::string parameter = "V1";
  std::vector<int> sizes{34, 144, 610, 2584};
  std::vector<double> window{2.5, 3.7};
  FssOptions opts;
  std::string output;
};

void write_fss(const std::vector<SizePeak>& peaks, const std::string& path) {
  std::ostringstream os;
  os << "L,x,xi,warnings\n";
  for (const auto& p : peaks)
    os << p.L << "," << format_double(p.x) << "," << format_double(p.xi) << "," << p.warnings.joined() << "\n";
  if (path.empty()) {
    std::cout << os.str();
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(Code::IoError, "cannot open " + path + " for writing");
  out << os.str();
}

int run_fss_command(const FssFlags& f) {
  ModelSpec m;
  try {
    m = default_model(f.model);
    for (const auto& s : f.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw Error(Code::ConfigInvalid, "--set expects key=value, got " + s);
      set_parameter(m, s.substr(0, eq), std::stod(s.substr(eq + 1)));
    }
  } catch (const Error& e) {
    throw Error(Code::ConfigInvalid, e.what());
  } catch (const std::invalid_argument&) {
    throw Error(Code::ConfigInvalid, "non-numeric --set value");
  }
  if (f.window.size() != 2 || !(f.window[1] > f.window[0]))
    throw Error(Code::ConfigInvalid, "--window needs lo,hi with hi > lo");
  try {
    const FssResult r = finite_size_scaling(m, f.sizes, f.parameter, f.window[0], f.window[1], f.opts);
    write_fss(r.peaks, f.output);
    std::fprintf(stderr, "kappa = %.6f  intercept = %.6f  rms = %.3g\n", r.fit.slope, r.fit.intercept,
                 r.fit.rms_residual);
    return 0;
  } catch (const PeakNotFound& e) {
    write_fss(e.partial(), f.output);
    throw;
  }
}

struct PeaksFlags {
  std::string input;
  std::string column = "xi";
  double prominence = 0.5;
};

int run_peaks_command(const PeaksFlags& f) {
  const bool json = f.input.size() >= 5 && f.input.compare(f.input.size() - 5, 5, ".json") == 0;
  const SweepResult r = json ? import_json(f.input) : import_csv(f.input);
  if (r.axes.size() != 1) throw Error(Code::InvalidArgument, "peaks needs a one-axis sweep");
  std::size_t col = r.columns.size();
  for (std::size_t k = 0; k < r.columns.size(); ++k)
    if (r.columns[k].name == f.column) col = k;
  if (col == r.columns.size()) throw Error(Code::InvalidArgument, "no column named " + f.column);
  std::vector<double> x, y;
  for (const auto& rec : r.records) {
    x.push_back(rec.params[0]);
    y.push_back(rec.values[col].real());
  }
  const auto peaks = detect_peaks(x, y, f.prominence);
  std::cout << r.axes[0] << ",height,prominence,method\n";
  for (const auto& p : peaks)
    std::cout << format_double(p.x) << "," << format_double(p.height) << "," << format_double(p.prominence) << ","
              << detection_name(p.method) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"non-Hermitian quantum metric sweeps"};
  app.require_subcommand(1);
  // GAA1 has a field named h, so help stays long-form only.
  app.set_help_flag("--help", "print help and exit");
  app.set_version_flag("--version", std::string("nhqm ") + NHQM_VERSION);

  std::map<std::string, SweepFlags> sweeps;
  for (const char* name : {"gaa1", "gaa2", "cluster", "mixed"}) add_sweep_command(app, name, sweeps[name]);

  FssFlags fss;
  CLI::App* fc = app.add_subcommand("fss", "finite-size scaling of the ground-state metric peak");
  fc->add_option("--model", fss.model)->check(CLI::IsMember({"gaa1", "gaa2", "mixed"}));
  fc->add_option("--set", fss.sets, "model field override key=value (repeatable)");
  fc->add_option("--parameter", fss.parameter);
  fc->add_option("--sizes", fss.sizes)->delimiter(',');
  fc->add_option("--window", fss.window, "lo,hi")->delimiter(',');
  fc->add_option("--grid", fss.opts.grid_points);
  fc->add_option("--refine", fss.opts.refine_iterations);
  fc->add_option("--prominence", fss.opts.prominence);
  fc->add_option("--metric-step", fss.opts.metric_step);
  fc->add_option("--workers", fss.opts.workers);
  fc->add_option("--narrow", fss.opts.narrow, "shrink later windows around the previous peak");
  fc->add_option("--output", fss.output, "CSV of per-size peaks");

  PeaksFlags pk;
  CLI::App* pc = app.add_subcommand("peaks", "detect peaks in an exported one-axis sweep");
  pc->add_option("input", pk.input)->required()->check(CLI::ExistingFile);
  pc->add_option("--column", pk.column);
  pc->add_option("--prominence", pk.prominence);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    for (auto& [name, flags] : sweeps)
      if (app.got_subcommand(name)) return run_sweep_command(flags);
    if (app.got_subcommand("fss")) return run_fss_command(fss);
    return run_peaks_command(pk);
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", code_name(e.code()), e.what());
    return e.code() == Code::ConfigInvalid ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
