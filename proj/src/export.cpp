// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "nhqm/sweep.hpp"

#ifndef NHQM_VERSION
#define NHQM_VERSION "dev"
#endif

namespace nhqm {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& why) { throw Error(Code::ConfigInvalid, why); }

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) invalid(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) invalid("unknown key '" + it.key() + "' in " + where);
  }
}

double num(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_number()) invalid(where + "." + key + " must be a number");
  return j.get<double>();
}

Axis parse_axis(const json& j, const std::string& where) {
  reject_unknown(j, {"parameter", "start", "stop", "count"}, where);
  for (const char* k : {"parameter", "start", "stop", "count"})
    if (!j.contains(k)) invalid(where + " is missing '" + k + "'");
  Axis a;
  if (!j["parameter"].is_string()) invalid(where + ".parameter must be a string");
  a.parameter = j["parameter"].get<std::string>();
  a.start = num(j["start"], "start", where);
  a.stop = num(j["stop"], "stop", where);
  if (!j["count"].is_number_integer()) invalid(where + ".count must be an integer");
  a.count = j["count"].get<int>();
  return a;
}

ModelSpec parse_model(const json& j) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string()) invalid("model.name is required");
  const std::string name = j["name"].get<std::string>();
  ModelSpec m;
  try {
    m = default_model(name);
  } catch (const Error&) {
    invalid("unknown model '" + name + "'");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "name") continue;
    if (k == "bc" && m.index() == 3) {
      const std::string bc = it.value().is_string() ? it.value().get<std::string>() : "";
      if (bc == "PBC") std::get<MixedSpec>(m).bc = Boundary::PBC;
      else if (bc == "OBC") std::get<MixedSpec>(m).bc = Boundary::OBC;
      else invalid("model.bc must be \"PBC\" or \"OBC\"");
      continue;
    }
    if (!it.value().is_number()) invalid("unknown key '" + k + "' in model " + name);
    try {
      set_parameter(m, k, it.value().get<double>());
    } catch (const Error&) {
      invalid("unknown key '" + k + "' in model " + name);
    }
  }
  return m;
}

json model_to_json(const ModelSpec& m) {
  json j;
  j["name"] = model_name(m);
  for (const auto& p : integer_parameters(m)) j[p] = static_cast<int>(get_parameter(m, p));
  for (const auto& p : real_parameters(m)) j[p] = get_parameter(m, p);
  if (const auto* s = std::get_if<MixedSpec>(&m)) j["bc"] = s->bc == Boundary::PBC ? "PBC" : "OBC";
  return j;
}

json axis_to_json(const Axis& a) {
  return json{{"parameter", a.parameter}, {"start", a.start}, {"stop", a.stop}, {"count", a.count}};
}

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json meta_json(const SweepResult& r, const SweepConfig& c) {
  json cols = json::array();
  for (const auto& col : r.columns) cols.push_back({{"name", col.name}, {"complex", col.complex}});
  return json{{"config", json::parse(config_to_json(c))},
              {"build", std::string("nhqm ") + NHQM_VERSION},
              {"timestamp", timestamp_utc()},
              {"axes", r.axes},
              {"columns", cols}};
}

// JSON has no non-finite numbers; they are written as the strings "nan",
// "inf" and "-inf".
json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

double from_json_num(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) return std::stod(j.get<std::string>());
  return j.get<double>();
}

json warnings_json(const Warnings& w) {
  json o = json::object();
  for (std::size_t i = 0; i < kCodeCount; ++i)
    if (w.count[i]) o[code_name(static_cast<Code>(i))] = w.count[i];
  return o;
}

Warnings warnings_from(const json& j) {
  Warnings w;
  for (auto it = j.begin(); it != j.end(); ++it)
    for (std::size_t i = 0; i < kCodeCount; ++i)
      if (it.key() == code_name(static_cast<Code>(i))) w.count[i] = it.value().get<int>();
  return w;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Code::IoError, "cannot open " + path + " for writing");
  return f;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_body(const SweepResult& r) {
  std::string out;
  for (const auto& a : r.axes) out += a + ",";
  for (const auto& col : r.columns) out += col.complex ? col.name + "_re," + col.name + "_im," : col.name + ",";
  out += "warnings\n";
  for (const auto& rec : r.records) {
    for (double p : rec.params) out += format_double(p) + ",";
    for (std::size_t k = 0; k < r.columns.size(); ++k) {
      out += format_double(rec.values[k].real()) + ",";
      if (r.columns[k].complex) out += format_double(rec.values[k].imag()) + ",";
    }
    out += rec.warnings.joined() + "\n";
  }
  return out;
}

std::string config_to_json(const SweepConfig& c) {
  json j;
  j["model"] = model_to_json(c.model);
  j["axis1"] = axis_to_json(c.axis1);
  if (c.axis2) j["axis2"] = axis_to_json(*c.axis2);
  j["observables"] = c.observables;
  j["metric_step"] = c.metric_step;
  j["workers"] = c.workers;
  j["output"] = {{"path", c.output}, {"format", c.format == Format::CSV ? "CSV" : "JSON"}};
  if (!c.metric_parameter.empty()) j["metric_parameter"] = c.metric_parameter;
  j["state"] = c.state;
  j["prominence"] = c.prominence;
  return j.dump(2);
}

SweepConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"model", "axis1", "axis2", "observables", "metric_step", "workers", "output", "metric_parameter",
                  "state", "prominence"},
                 "config");
  for (const char* k : {"model", "axis1", "observables"})
    if (!j.contains(k)) invalid(std::string("config is missing '") + k + "'");
  SweepConfig c;
  c.model = parse_model(j["model"]);
  c.axis1 = parse_axis(j["axis1"], "axis1");
  if (j.contains("axis2") && !j["axis2"].is_null()) c.axis2 = parse_axis(j["axis2"], "axis2");
  if (!j["observables"].is_array()) invalid("observables must be an array of strings");
  for (const auto& o : j["observables"]) {
    if (!o.is_string()) invalid("observables must be an array of strings");
    c.observables.push_back(o.get<std::string>());
  }
  if (j.contains("metric_step")) c.metric_step = num(j["metric_step"], "metric_step", "config");
  if (j.contains("workers")) {
    if (!j["workers"].is_number_integer()) invalid("workers must be an integer");
    c.workers = j["workers"].get<int>();
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    reject_unknown(o, {"path", "format"}, "output");
    if (o.contains("path")) {
      if (!o["path"].is_string()) invalid("output.path must be a string");
      c.output = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      const std::string f = o["format"].is_string() ? o["format"].get<std::string>() : "";
      if (f == "CSV") c.format = Format::CSV;
      else if (f == "JSON") c.format = Format::JSON;
      else invalid("output.format must be \"CSV\" or \"JSON\"");
    }
  }
  if (j.contains("metric_parameter")) {
    if (!j["metric_parameter"].is_string()) invalid("metric_parameter must be a string");
    c.metric_parameter = j["metric_parameter"].get<std::string>();
  }
  if (j.contains("state")) {
    if (!j["state"].is_number_integer()) invalid("state must be an integer");
    c.state = j["state"].get<int>();
  }
  if (j.contains("prominence")) c.prominence = num(j["prominence"], "prominence", "config");
  return c;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Code::IoError, "cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return config_from_json(ss.str());
}

void export_records(const SweepResult& r, const SweepConfig& c, Format fmt, const std::string& path) {
  if (r.records.empty()) throw Error(Code::InvalidArgument, "nothing to export");
  if (fmt == Format::CSV) {
    std::ofstream f = open_out(path);
    f << csv_body(r);
    if (!f) throw Error(Code::IoError, "write failed for " + path);
    std::ofstream m = open_out(path + ".meta.json");
    m << meta_json(r, c).dump(2) << "\n";
    if (!m) throw Error(Code::IoError, "write failed for " + path + ".meta.json");
    return;
  }
  json j;
  j["meta"] = meta_json(r, c);
  json recs = json::array();
  for (const auto& rec : r.records) {
    json vals = json::array();
    for (std::size_t k = 0; k < r.columns.size(); ++k) {
      if (r.columns[k].complex)
        vals.push_back(json::array({num_or_null(rec.values[k].real()), num_or_null(rec.values[k].imag())}));
      else
        vals.push_back(num_or_null(rec.values[k].real()));
    }
    json pj = json::array();
    for (double p : rec.params) pj.push_back(p);
    json rj{{"params", pj}, {"values", vals}, {"warnings", warnings_json(rec.warnings)}};
    if (!rec.error.empty()) rj["error"] = rec.error;
    recs.push_back(rj);
  }
  j["records"] = recs;
  std::ofstream f = open_out(path);
  f << j.dump(1) << "\n";
  if (!f) throw Error(Code::IoError, "write failed for " + path);
}

SweepResult import_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Code::IoError, "cannot read " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw Error(Code::IoError, path + ": " + e.what());
  }
  SweepResult r;
  r.axes = j.at("meta").at("axes").get<std::vector<std::string>>();
  for (const auto& col : j.at("meta").at("columns"))
    r.columns.push_back({col.at("name").get<std::string>(), col.at("complex").get<bool>()});
  for (const auto& rj : j.at("records")) {
    SweepRecord rec;
    for (const auto& p : rj.at("params")) rec.params.push_back(p.get<double>());
    const auto& vals = rj.at("values");
    for (std::size_t k = 0; k < r.columns.size(); ++k) {
      if (r.columns[k].complex)
        rec.values.emplace_back(from_json_num(vals[k][0]), from_json_num(vals[k][1]));
      else
        rec.values.emplace_back(from_json_num(vals[k]), 0.0);
    }
    rec.warnings = warnings_from(rj.at("warnings"));
    if (rj.contains("error")) rec.error = rj["error"].get<std::string>();
    r.records.push_back(std::move(rec));
  }
  return r;
}

SweepResult import_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Code::IoError, "cannot read " + path);
  std::string line;
  if (!std::getline(f, line)) throw Error(Code::IoError, path + " is empty");
  const auto head = split(line, ',');
  if (head.empty() || head.back() != "warnings") throw Error(Code::IoError, path + " lacks a warnings column");
  // Axes are the leading columns up to the first observable; the sidecar
  // records them, otherwise assume one axis.
  std::size_t naxes = 1;
  std::ifstream meta(path + ".meta.json");
  if (meta) {
    try {
      naxes = json::parse(meta).at("axes").size();
    } catch (const std::exception&) {
    }
  }
  SweepResult r;
  for (std::size_t i = 0; i < naxes; ++i) r.axes.push_back(head[i]);
  std::vector<int> kind;  // 0 real, 1 re part, 2 im part
  for (std::size_t i = naxes; i + 1 < head.size(); ++i) {
    const std::string& h = head[i];
    if (h.size() > 3 && h.compare(h.size() - 3, 3, "_re") == 0 && i + 2 < head.size() &&
        head[i + 1] == h.substr(0, h.size() - 3) + "_im") {
      r.columns.push_back({h.substr(0, h.size() - 3), true});
      ++i;
    } else {
      r.columns.push_back({h, false});
    }
  }
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != head.size()) throw Error(Code::IoError, path + ": ragged row");
    SweepRecord rec;
    std::size_t p = 0;
    for (; p < naxes; ++p) rec.params.push_back(std::stod(cells[p]));
    for (const auto& col : r.columns) {
      const double re = std::stod(cells[p++]);
      const double im = col.complex ? std::stod(cells[p++]) : 0.0;
      rec.values.emplace_back(re, im);
    }
    for (const auto& code : split(cells.back(), ';'))
      for (std::size_t i = 0; i < kCodeCount; ++i)
        if (code == code_name(static_cast<Code>(i))) rec.warnings.count[i] = 1;
    r.records.push_back(std::move(rec));
  }
  return r;
}

}  // namespace nhqm
