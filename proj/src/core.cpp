// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0

#include "nhqm/core.hpp"

#include <cmath>

namespace nhqm {

const char* code_name(Code c) {
  switch (c) {
    case Code::NonConvergence: return "NonConvergence";
    case Code::DefectiveMatrix: return "DefectiveMatrix";
    case Code::AmbiguousMatch: return "AmbiguousMatch";
    case Code::NotSkewSymmetric: return "NotSkewSymmetric";
    case Code::DegenerateAbscissa: return "DegenerateAbscissa";
    case Code::NotNormalized: return "NotNormalized";
    case Code::StepTooLarge: return "StepTooLarge";
    case Code::PotentialSingular: return "PotentialSingular";
    case Code::AlphaZero: return "AlphaZero";
    case Code::ModeSingular: return "ModeSingular";
    case Code::DegenerateGroundState: return "DegenerateGroundState";
    case Code::ConfigInvalid: return "ConfigInvalid";
    case Code::SeriesTooShort: return "SeriesTooShort";
    case Code::PeakNotFound: return "PeakNotFound";
    case Code::IoError: return "IoError";
    case Code::InvalidArgument: return "InvalidArgument";
    case Code::kCount: break;
  }
  return "Unknown";
}

Error::Error(Code code, const std::string& what)
    : std::runtime_error(std::string(code_name(code)) + ": " + what), code_(code) {}

bool Warnings::empty() const {
  for (int n : count)
    if (n != 0) return false;
  return true;
}

void Warnings::merge(const Warnings& other) {
  for (std::size_t i = 0; i < kCodeCount; ++i) count[i] += other.count[i];
}

std::string Warnings::joined() const {
  std::string out;
  for (std::size_t i = 0; i < kCodeCount; ++i) {
    if (count[i] == 0) continue;
    if (!out.empty()) out += ';';
    out += code_name(static_cast<Code>(i));
  }
  return out;
}

void require_finite(const ComplexMatrix& h) {
  if (h.dim() == 0) throw Error(Code::InvalidArgument, "matrix dimension must be >= 1");
  for (const cplx& z : h.storage())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(Code::InvalidArgument, "matrix has non-finite entries");
}

double frobenius_norm(const ComplexMatrix& h) {
  double s = 0.0;
  for (const cplx& z : h.storage()) s += std::norm(z);
  return std::sqrt(s);
}

bool is_real(const ComplexMatrix& h) {
  for (const cplx& z : h.storage())
    if (z.imag() != 0.0) return false;
  return true;
}

bool is_hermitian(const ComplexMatrix& h, double tol) {
  const std::size_t n = h.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (std::abs(h(i, j) - std::conj(h(j, i))) > tol) return false;
  return true;
}

ComplexMatrix to_complex(const RealMatrix& a) {
  ComplexMatrix out(a.dim());
  for (std::size_t k = 0; k < a.storage().size(); ++k) out.storage()[k] = a.storage()[k];
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& h) {
  const std::size_t n = h.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(j, i) = std::conj(h(i, j));
  return out;
}

std::vector<cplx> matvec(const ComplexMatrix& h, std::span<const cplx> x) {
  const std::size_t n = h.dim();
  std::vector<cplx> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = 0.0;
    const cplx* row = h.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

double norm2(std::span<const cplx> x) {
  double s = 0.0;
  for (const cplx& z : x) s += std::norm(z);
  return std::sqrt(s);
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

FitResult fit_linear(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(Code::InvalidArgument, "fit_linear needs two equal-length arrays of size >= 2");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(Code::DegenerateAbscissa, "all abscissae are equal");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace nhqm
