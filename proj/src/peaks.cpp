// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include "nhqm/sweep.hpp"

namespace nhqm {
namespace {

// Vertex of the parabola through three points; falls back to the middle
// sample when the points are collinear or the vertex leaves the bracket.
std::pair<double, double> parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double d0 = (x0 - x1) * (x0 - x2), d1 = (x1 - x0) * (x1 - x2), d2 = (x2 - x0) * (x2 - x1);
  const double a = y0 / d0 + y1 / d1 + y2 / d2;
  const double b = -(y0 * (x1 + x2) / d0 + y1 * (x0 + x2) / d1 + y2 * (x0 + x1) / d2);
  const double c = y0 * x1 * x2 / d0 + y1 * x0 * x2 / d1 + y2 * x0 * x1 / d2;
  if (!(a < 0.0)) return {x1, y1};
  const double xv = -b / (2.0 * a);
  if (xv < x0 || xv > x2) return {x1, y1};
  return {xv, c - b * b / (4.0 * a)};
}

}  // namespace

const char* detection_name(Detection d) {
  switch (d) {
    case Detection::metricPeak: return "metricPeak";
    case Detection::derivativeSingularity: return "derivativeSingularity";
    case Detection::orderOnset: return "orderOnset";
  }
  return "metricPeak";
}

std::vector<CriticalPoint> detect_peaks(const std::vector<double>& x, const std::vector<double>& y, double threshold,
                                        Detection method) {
  const std::size_t n = x.size();
  if (y.size() != n) throw Error(Code::InvalidArgument, "detect_peaks needs equal-length series");
  if (n < 5) throw Error(Code::SeriesTooShort, "detect_peaks needs at least five samples");

  std::vector<CriticalPoint> out;
  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(y[i] > y[i - 1]) || std::isnan(y[i])) {
      ++i;
      continue;
    }
    // Walk across a flat top.
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;
    if (j + 1 >= n || !(y[j + 1] < y[i])) {
      i = j + 1;
      continue;
    }
    const std::size_t top = (i + j) / 2;
    const double h = y[top];

    double left_min = h;
    for (std::size_t k = i; k-- > 0;) {
      if (y[k] > h) break;
      left_min = std::min(left_min, y[k]);
    }
    double right_min = h;
    for (std::size_t k = j + 1; k < n; ++k) {
      if (y[k] > h) break;
      right_min = std::min(right_min, y[k]);
    }
    const double prom = h - std::max(left_min, right_min);
    if (prom >= threshold) {
      CriticalPoint cp;
      cp.prominence = prom;
      cp.method = method;
      if (i == j) {
        const auto [xv, yv] = parabola_vertex(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]);
        cp.x = xv;
        cp.height = yv;
      } else {
        cp.x = 0.5 * (x[i] + x[j]);
        cp.height = h;
      }
      out.push_back(cp);
    }
    i = j + 1;
  }
  return out;
}

std::size_t resolved_argmax(const std::vector<double>& y, std::size_t width) {
  const std::size_t n = y.size();
  if (n == 0) throw Error(Code::InvalidArgument, "resolved_argmax needs a nonempty series");
  if (width == 0 || width % 2 == 0) throw Error(Code::InvalidArgument, "resolved_argmax needs an odd window");
  const std::size_t half = width / 2;
  std::vector<double> win;
  std::size_t best = 0;
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    // Windows are clipped at the ends; an even count takes the lower middle.
    const std::size_t lo = i >= half ? i - half : 0, hi = std::min(n, i + half + 1);
    win.assign(y.begin() + static_cast<std::ptrdiff_t>(lo), y.begin() + static_cast<std::ptrdiff_t>(hi));
    const auto mid = win.begin() + static_cast<std::ptrdiff_t>((win.size() - 1) / 2);
    std::nth_element(win.begin(), mid, win.end());
    if (*mid > top || (*mid == top && y[i] > y[best])) {
      top = *mid;
      best = i;
    }
  }
  return best;
}

}  // namespace nhqm
