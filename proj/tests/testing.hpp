// Shared helpers for the unit tests.

#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "nhqm/core.hpp"

namespace nhqm::testing {

inline ComplexMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  ComplexMatrix a(n);
  for (auto& x : a.storage()) x = cplx(d(rng), d(rng));
  return a;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  ComplexMatrix a = random_matrix(n, rng), h(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return h;
}

inline ComplexMatrix random_skew(std::size_t n, std::mt19937_64& rng) {
  ComplexMatrix a = random_matrix(n, rng), s(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      s(i, j) = a(i, j);
      s(j, i) = -a(i, j);
    }
  return s;
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace nhqm::testing
