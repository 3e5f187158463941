// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Basic value types shared by every module: dense matrices, error codes,
// warning counters and the least-squares line fit.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nhqm {

using cplx = std::complex<double>;

enum class Code : int {
  NonConvergence = 0,
  DefectiveMatrix,
  AmbiguousMatch,
  NotSkewSymmetric,
  DegenerateAbscissa,
  NotNormalized,
  StepTooLarge,
  PotentialSingular,
  AlphaZero,
  ModeSingular,
  DegenerateGroundState,
  ConfigInvalid,
  SeriesTooShort,
  PeakNotFound,
  IoError,
  InvalidArgument,
  kCount
};

inline constexpr std::size_t kCodeCount = static_cast<std::size_t>(Code::kCount);

const char* code_name(Code c);

class Error : public std::runtime_error {
 public:
  Error(Code code, const std::string& what);
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

// Per-code occurrence counts. Merging is order independent, which keeps
// sweep output deterministic.
struct Warnings {
  std::array<int, kCodeCount> count{};

  void add(Code c, int n = 1) { count[static_cast<std::size_t>(c)] += n; }
  bool has(Code c) const { return count[static_cast<std::size_t>(c)] > 0; }
  int get(Code c) const { return count[static_cast<std::size_t>(c)]; }
  bool empty() const;
  void merge(const Warnings& other);
  // Semicolon-joined code names, e.g. "StepTooLarge;AmbiguousMatch".
  std::string joined() const;
};

// Dense square matrix, row-major.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim, T{}) {}

  std::size_t dim() const { return dim_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = T{1};
    return m;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = Matrix<cplx>;
using RealMatrix = Matrix<double>;

// Throws InvalidArgument when any entry is NaN or infinite.
void require_finite(const ComplexMatrix& h);
double frobenius_norm(const ComplexMatrix& h);
bool is_real(const ComplexMatrix& h);
bool is_hermitian(const ComplexMatrix& h, double tol = 0.0);
ComplexMatrix to_complex(const RealMatrix& a);
ComplexMatrix adjoint(const ComplexMatrix& h);
std::vector<cplx> matvec(const ComplexMatrix& h, std::span<const cplx> x);
double norm2(std::span<const cplx> x);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);  // <a|b>

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

FitResult fit_linear(std::span<const double> x, std::span<const double> y);

}  // namespace nhqm
