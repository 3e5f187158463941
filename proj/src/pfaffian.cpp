// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0

#include "nhqm/pfaffian.hpp"

#include <cmath>
#include <vector>

#include "lapack_shim.hpp"

namespace nhqm {
namespace {

template <typename T>
void check_skew(const Matrix<T>& a, double tol) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(a(i, i)) > tol) throw Error(Code::NotSkewSymmetric, "nonzero diagonal entry");
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) + a(j, i)) > tol) throw Error(Code::NotSkewSymmetric, "A + A^T exceeds tolerance");
  }
}

// row[j] += ti c[j] - ci tau[j]. The complex form is spelled out because
// std::complex multiplication goes through the NaN-recovering libgcc path.
inline void update_row(double* row, double ti, const double* c, double ci, const double* tau, std::size_t m) {
  for (std::size_t j = 0; j < m; ++j) row[j] += ti * c[j] - ci * tau[j];
}

inline void update_row(cplx* row, cplx ti, const cplx* c, cplx ci, const cplx* tau, std::size_t m) {
  double* r = reinterpret_cast<double*>(row);
  const double* cc = reinterpret_cast<const double*>(c);
  const double* tt = reinterpret_cast<const double*>(tau);
  const double tr = ti.real(), tim = ti.imag(), cr = ci.real(), cim = ci.imag();
  for (std::size_t j = 0; j < m; ++j) {
    const double xr = cc[2 * j], xi = cc[2 * j + 1], yr = tt[2 * j], yi = tt[2 * j + 1];
    r[2 * j] += (tr * xr - tim * xi) - (cr * yr - cim * yi);
    r[2 * j + 1] += (tr * xi + tim * xr) - (cr * yi + cim * yr);
  }
}

// A[k+2:, k+2:] += tau c^T - c tau^T, with c = A[k+2:, k+1].
template <typename T>
void rank2_update(Matrix<T>& a, std::size_t k, const std::vector<T>& tau, const std::vector<T>& c, Exec exec) {
  const std::size_t n = a.dim();
  const std::size_t m = n - (k + 2);
  const std::ptrdiff_t sm = static_cast<std::ptrdiff_t>(m);
  if (exec == Exec::parallel && m >= 64) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < sm; ++ii) {
      const std::size_t i = static_cast<std::size_t>(ii);
      update_row(a.data() + (k + 2 + i) * n + (k + 2), tau[i], c.data(), c[i], tau.data(), m);
    }
  } else {
    for (std::size_t i = 0; i < m; ++i)
      update_row(a.data() + (k + 2 + i) * n + (k + 2), tau[i], c.data(), c[i], tau.data(), m);
  }
}

template <typename T>
T parlett_reid(Matrix<T> a, Exec exec) {
  const std::size_t n = a.dim();
  if (n % 2 == 1) return T{0};
  T pf{1};
  std::vector<T> tau, c;
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    std::size_t kp = k + 1;
    double best = std::abs(a(k + 1, k));
    for (std::size_t i = k + 2; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        kp = i;
      }
    }
    if (kp != k + 1) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k + 1, j), a(kp, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k + 1), a(i, kp));
      pf = -pf;
    }
    if (a(k + 1, k) == T{0}) return T{0};
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const std::size_t m = n - (k + 2);
      tau.resize(m);
      c.resize(m);
      const T piv = a(k, k + 1);
      for (std::size_t j = 0; j < m; ++j) {
        tau[j] = a(k, k + 2 + j) / piv;
        c[j] = a(k + 2 + j, k + 1);
      }
      rank2_update(a, k, tau, c, exec);
    }
  }
  return pf;
}

}  // namespace

cplx pfaffian(const ComplexMatrix& a, double skew_tol, Exec exec) {
  check_skew(a, skew_tol);
  return parlett_reid(a, exec);
}

double pfaffian(const RealMatrix& a, double skew_tol, Exec exec) {
  check_skew(a, skew_tol);
  return parlett_reid(a, exec);
}

cplx determinant(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix lu = a;
  std::vector<lapack_int> piv(n);
  const lapack_int ln = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_zgetrf(LAPACK_ROW_MAJOR, ln, ln, lu.data(), ln, piv.data());
  if (info > 0) return 0.0;
  cplx det = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    det *= lu(i, i);
    if (piv[i] != static_cast<lapack_int>(i + 1)) det = -det;
  }
  return det;
}

}  // namespace nhqm
