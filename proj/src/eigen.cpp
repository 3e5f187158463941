// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0

#include "nhqm/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lapack_shim.hpp"

namespace nhqm {
namespace {

enum class Kind { realSymmetric, hermitian, realGeneral, complexGeneral };

Kind classify(const ComplexMatrix& h) {
  const bool real = is_real(h);
  const bool herm = is_hermitian(h);
  if (herm) return real ? Kind::realSymmetric : Kind::hermitian;
  return real ? Kind::realGeneral : Kind::complexGeneral;
}

RealMatrix real_part(const ComplexMatrix& h) {
  RealMatrix a(h.dim());
  for (std::size_t k = 0; k < h.storage().size(); ++k) a.storage()[k] = h.storage()[k].real();
  return a;
}

void check_info(lapack_int info, const char* routine) {
  if (info > 0) throw Error(Code::NonConvergence, std::string(routine) + " failed to converge");
  if (info < 0) throw Error(Code::InvalidArgument, std::string(routine) + " rejected an argument");
}

// Unpacks dgeev output: a complex pair occupies columns j, j+1 as re, im.
void unpack_real_vectors(std::size_t n, const std::vector<double>& wi, const std::vector<double>& vr,
                         ComplexMatrix& v) {
  for (std::size_t j = 0; j < n; ++j) {
    if (wi[j] != 0.0 && j + 1 < n) {
      for (std::size_t i = 0; i < n; ++i) {
        const double re = vr[i * n + j], im = vr[i * n + j + 1];
        v(i, j) = cplx(re, im);
        v(i, j + 1) = cplx(re, -im);
      }
      ++j;
    } else {
      for (std::size_t i = 0; i < n; ++i) v(i, j) = vr[i * n + j];
    }
  }
}

void normalize_columns(ComplexMatrix& v) {
  const std::size_t n = v.dim();
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(v(i, j));
    const double inv = 1.0 / std::sqrt(s);
    for (std::size_t i = 0; i < n; ++i) v(i, j) *= inv;
  }
}

double eigen_scale(const std::vector<cplx>& ev) {
  double s = 1.0;
  for (const cplx& e : ev) s = std::max(s, std::abs(e));
  return s;
}

}  // namespace

std::vector<cplx> EigenSystem::vector(std::size_t n) const {
  const std::size_t d = dim();
  std::vector<cplx> out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = vectors(i, n);
  return out;
}

std::vector<std::size_t> real_ascending_order(const std::vector<cplx>& ev) {
  std::vector<std::size_t> idx(ev.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return ev[a].real() < ev[b].real(); });
  // Conjugate pairs of real matrices come back with real parts differing in
  // the last bits; without a tolerance their order flips between nearby
  // parameter values.
  const double tol = kRealTieTol * eigen_scale(ev);
  std::size_t s = 0;
  while (s < idx.size()) {
    std::size_t e = s + 1;
    while (e < idx.size() && ev[idx[e]].real() - ev[idx[s]].real() <= tol) ++e;
    std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(s), idx.begin() + static_cast<std::ptrdiff_t>(e),
                     [&](std::size_t a, std::size_t b) { return ev[a].imag() < ev[b].imag(); });
    s = e;
  }
  return idx;
}

EigenSystem eig_right(const ComplexMatrix& h) {
  require_finite(h);
  const std::size_t n = h.dim();
  const lapack_int ln = static_cast<lapack_int>(n);
  std::vector<cplx> w(n);
  ComplexMatrix v(n);
  const Kind kind = classify(h);

  if (kind == Kind::realSymmetric) {
    RealMatrix a = real_part(h);
    std::vector<double> wr(n);
    check_info(LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'U', ln, a.data(), ln, wr.data()), "dsyevd");
    for (std::size_t j = 0; j < n; ++j) w[j] = wr[j];
    for (std::size_t k = 0; k < a.storage().size(); ++k) v.storage()[k] = a.storage()[k];
  } else if (kind == Kind::hermitian) {
    ComplexMatrix a = h;
    std::vector<double> wr(n);
    check_info(LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'V', 'U', ln, a.data(), ln, wr.data()), "zheevd");
    for (std::size_t j = 0; j < n; ++j) w[j] = wr[j];
    v = std::move(a);
  } else if (kind == Kind::realGeneral) {
    RealMatrix a = real_part(h);
    std::vector<double> wr(n), wi(n), vr(n * n);
    double dummy = 0.0;
    check_info(LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'V', ln, a.data(), ln, wr.data(), wi.data(), &dummy, ln,
                             vr.data(), ln),
               "dgeev");
    for (std::size_t j = 0; j < n; ++j) w[j] = cplx(wr[j], wi[j]);
    unpack_real_vectors(n, wi, vr, v);
  } else {
    ComplexMatrix a = h;
    cplx dummy = 0.0;
    check_info(LAPACKE_zgeev(LAPACK_ROW_MAJOR, 'N', 'V', ln, a.data(), ln, w.data(), &dummy, ln, v.data(), ln),
               "zgeev");
  }
  normalize_columns(v);

  EigenSystem es;
  const std::vector<std::size_t> order = real_ascending_order(w);
  es.eigenvalues.resize(n);
  es.vectors = ComplexMatrix(n);
  for (std::size_t c = 0; c < n; ++c) {
    es.eigenvalues[c] = w[order[c]];
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, c) = v(i, order[c]);
  }

  // Residual |H V - V E| column by column.
  std::vector<cplx> hv(n * n);
  const cplx one = 1.0, zero = 0.0;
  cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, ln, ln, ln, &one, h.data(), ln, es.vectors.data(), ln,
              &zero, hv.data(), ln);
  std::vector<double> res(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < n; ++c) res[c] += std::norm(hv[i * n + c] - es.eigenvalues[c] * es.vectors(i, c));
  for (double r : res) es.max_residual = std::max(es.max_residual, std::sqrt(r));
  const double hnorm = frobenius_norm(h);
  if (es.max_residual > 1e-8 * std::max(hnorm, 1e-300) && hnorm > 0.0)
    throw Error(Code::NonConvergence, "eigenvector residual above 1e-8 |H|");

  if (kind == Kind::realGeneral || kind == Kind::complexGeneral) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (es.eigenvalues[b].real() - es.eigenvalues[a].real() > 1e-10) break;
        if (std::abs(es.eigenvalues[b] - es.eigenvalues[a]) > 1e-10) continue;
        cplx ov = 0.0;
        for (std::size_t i = 0; i < n; ++i) ov += std::conj(es.vectors(i, a)) * es.vectors(i, b);
        if (std::abs(ov) > 1.0 - 1e-8) es.warnings.add(Code::DefectiveMatrix);
      }
    }
  }
  return es;
}

std::vector<cplx> eigenvalues(const ComplexMatrix& h) {
  require_finite(h);
  const std::size_t n = h.dim();
  const lapack_int ln = static_cast<lapack_int>(n);
  std::vector<cplx> w(n);
  switch (classify(h)) {
    case Kind::realSymmetric: {
      RealMatrix a = real_part(h);
      std::vector<double> wr(n);
      check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', ln, a.data(), ln, wr.data()), "dsyevd");
      for (std::size_t j = 0; j < n; ++j) w[j] = wr[j];
      break;
    }
    case Kind::hermitian: {
      ComplexMatrix a = h;
      std::vector<double> wr(n);
      check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', ln, a.data(), ln, wr.data()), "zheevd");
      for (std::size_t j = 0; j < n; ++j) w[j] = wr[j];
      break;
    }
    case Kind::realGeneral: {
      RealMatrix a = real_part(h);
      std::vector<double> wr(n), wi(n);
      double dummy = 0.0;
      // The transpose has the same spectrum, so skip LAPACKE's row-major copy.
      check_info(LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', ln, a.data(), ln, wr.data(), wi.data(), &dummy, 1,
                               &dummy, 1),
                 "dgeev");
      for (std::size_t j = 0; j < n; ++j) w[j] = cplx(wr[j], wi[j]);
      break;
    }
    case Kind::complexGeneral: {
      ComplexMatrix a = h;
      cplx dummy = 0.0;
      check_info(LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', ln, a.data(), ln, w.data(), &dummy, 1, &dummy, 1),
                 "zgeev");
      break;
    }
  }
  const std::vector<std::size_t> order = real_ascending_order(w);
  std::vector<cplx> out(n);
  for (std::size_t c = 0; c < n; ++c) out[c] = w[order[c]];
  return out;
}

bool inverse_iteration(const ComplexMatrix& h, cplx shift, std::vector<cplx>& psi, cplx& energy) {
  const std::size_t n = h.dim();
  const lapack_int ln = static_cast<lapack_int>(n);
  const double hnorm = std::max(frobenius_norm(h), 1e-300);
  const bool real_path = is_real(h) && shift.imag() == 0.0;

  std::vector<lapack_int> piv(n);
  RealMatrix ar;
  ComplexMatrix ac;
  for (int attempt = 0; attempt < 3; ++attempt) {
    lapack_int info = 0;
    if (real_path) {
      ar = real_part(h);
      for (std::size_t i = 0; i < n; ++i) ar(i, i) -= shift.real();
      info = LAPACKE_dgetrf(LAPACK_ROW_MAJOR, ln, ln, ar.data(), ln, piv.data());
    } else {
      ac = h;
      for (std::size_t i = 0; i < n; ++i) ac(i, i) -= shift;
      info = LAPACKE_zgetrf(LAPACK_ROW_MAJOR, ln, ln, ac.data(), ln, piv.data());
    }
    if (info < 0) return false;
    if (info == 0) break;
    // Exactly singular: nudge the shift off the eigenvalue.
    shift += cplx(1e-13 * hnorm, 0.0);
    if (attempt == 2) return false;
  }

  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  std::vector<double> xr(n);
  for (int it = 0; it < 12; ++it) {
    if (real_path) {
      for (std::size_t i = 0; i < n; ++i) xr[i] = x[i].real();
      LAPACKE_dgetrs(LAPACK_ROW_MAJOR, 'N', ln, 1, ar.data(), ln, piv.data(), xr.data(), 1);
      for (std::size_t i = 0; i < n; ++i) x[i] = xr[i];
    } else {
      LAPACKE_zgetrs(LAPACK_ROW_MAJOR, 'N', ln, 1, ac.data(), ln, piv.data(), x.data(), 1);
    }
    const double nx = norm2(x);
    if (!std::isfinite(nx) || nx == 0.0) return false;
    for (cplx& z : x) z /= nx;
    if (it < 1) continue;
    const std::vector<cplx> hx = matvec(h, x);
    energy = inner(x, hx);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) r += std::norm(hx[i] - energy * x[i]);
    if (std::sqrt(r) <= 1e-12 * hnorm) {
      psi = std::move(x);
      return true;
    }
  }
  return false;
}

namespace {

GroundState ground_state_full(const ComplexMatrix& h) {
  EigenSystem es = eig_right(h);
  GroundState gs;
  gs.energy = es.eigenvalues[0];
  gs.psi = es.vector(0);
  gs.warnings = es.warnings;
  return gs;
}

GroundState ground_state_hermitian(const ComplexMatrix& h, bool real) {
  const std::size_t n = h.dim();
  const lapack_int ln = static_cast<lapack_int>(n);
  lapack_int m = 0;
  std::vector<lapack_int> isuppz(2);
  std::vector<double> wall(n);
  GroundState gs;
  gs.psi.resize(n);
  if (real) {
    RealMatrix a = real_part(h);
    std::vector<double> z(n);
    check_info(LAPACKE_dsyevr(LAPACK_ROW_MAJOR, 'V', 'I', 'U', ln, a.data(), ln, 0.0, 0.0, 1, 1, 0.0, &m,
                              wall.data(), z.data(), 1, isuppz.data()),
               "dsyevr");
    for (std::size_t i = 0; i < n; ++i) gs.psi[i] = z[i];
  } else {
    ComplexMatrix a = h;
    std::vector<cplx> z(n);
    check_info(LAPACKE_zheevr(LAPACK_ROW_MAJOR, 'V', 'I', 'U', ln, a.data(), ln, 0.0, 0.0, 1, 1, 0.0, &m,
                              wall.data(), z.data(), 1, isuppz.data()),
               "zheevr");
    gs.psi = std::move(z);
  }
  gs.energy = wall[0];
  const double nx = norm2(gs.psi);
  for (cplx& z : gs.psi) z /= nx;
  return gs;
}

}  // namespace

GroundState ground_state(const ComplexMatrix& h, std::vector<cplx>* spectrum) {
  require_finite(h);
  if (spectrum) spectrum->clear();
  const Kind kind = classify(h);
  if (kind == Kind::realSymmetric || kind == Kind::hermitian)
    return ground_state_hermitian(h, kind == Kind::realSymmetric);

  const std::vector<cplx> ev = eigenvalues(h);
  if (spectrum) *spectrum = ev;
  const cplx e1 = ev[0];
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < ev.size(); ++j) sep = std::min(sep, std::abs(ev[j] - e1));
  if (sep <= 1e-8 * eigen_scale(ev)) return ground_state_full(h);

  GroundState gs;
  cplx e;
  if (!inverse_iteration(h, e1, gs.psi, e) || std::abs(e - e1) > 0.25 * sep) return ground_state_full(h);
  gs.energy = e1;
  return gs;
}

std::vector<std::size_t> match_states(const EigenSystem& prev, const EigenSystem& next, Warnings* warnings) {
  const std::size_t n = prev.dim();
  if (next.dim() != n) throw Error(Code::InvalidArgument, "match_states needs equal dimensions");
  const lapack_int ln = static_cast<lapack_int>(n);
  std::vector<cplx> p(n * n);
  const cplx one = 1.0, zero = 0.0;
  cblas_zgemm(CblasRowMajor, CblasConjTrans, CblasNoTrans, ln, ln, ln, &one, prev.vectors.data(), ln,
              next.vectors.data(), ln, &zero, p.data(), ln);

  std::vector<double> mag(n * n);
  for (std::size_t k = 0; k < n * n; ++k) mag[k] = std::abs(p[k]);
  std::vector<std::size_t> idx(n * n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });

  std::vector<std::size_t> perm(n, n);
  std::vector<char> taken(n, 0);
  std::size_t assigned = 0;
  for (std::size_t k : idx) {
    const std::size_t i = k / n, j = k % n;
    if (perm[i] != n || taken[j]) continue;
    perm[i] = j;
    taken[j] = 1;
    if (warnings && mag[k] < 0.5) warnings->add(Code::AmbiguousMatch);
    if (++assigned == n) break;
  }
  return perm;
}

}  // namespace nhqm
