#include <algorithm>
#include <numeric>

#include "nhqm/eigen.hpp"
#include "nhqm/pfaffian.hpp"
#include "testing.hpp"

using namespace nhqm;
using nhqm::testing::random_matrix;
using nhqm::testing::random_skew;

TEST_SUITE("eig_right") {
  TEST_CASE("diagonal input is sorted by real part then imaginary part") {
    ComplexMatrix h(3);
    h(0, 0) = 3.0;
    h(1, 1) = cplx(1.0, 2.0);
    h(2, 2) = 1.0;
    const EigenSystem es = eig_right(h);
    CHECK(std::abs(es.eigenvalues[0] - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(es.eigenvalues[1] - cplx(1.0, 2.0)) < 1e-14);
    CHECK(std::abs(es.eigenvalues[2] - cplx(3.0, 0.0)) < 1e-14);
    const std::size_t expect_row[3] = {2, 1, 0};
    for (std::size_t n = 0; n < 3; ++n)
      for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::abs(std::abs(es.vectors(i, n)) - (i == expect_row[n] ? 1.0 : 0.0)) < 1e-14);
    CHECK(es.ordering == Ordering::byRealAscending);
  }

  TEST_CASE("nonreciprocal two-site cell") {
    ComplexMatrix h(2);
    h(0, 1) = std::exp(0.5);
    h(1, 0) = std::exp(-0.5);
    const EigenSystem es = eig_right(h);
    CHECK(std::abs(es.eigenvalues[0] + 1.0) < 1e-13);
    CHECK(std::abs(es.eigenvalues[1] - 1.0) < 1e-13);
    const double a = std::exp(0.25), b = std::exp(-0.25), nrm = std::hypot(a, b);
    const auto v = es.vector(1);
    const cplx phase = v[0] / std::abs(v[0]);
    CHECK(std::abs(v[0] / phase - a / nrm) < 1e-13);
    CHECK(std::abs(v[1] / phase - b / nrm) < 1e-13);
  }

  TEST_CASE("Jordan block is flagged defective") {
    ComplexMatrix h(2);
    h(0, 1) = 1.0;
    const EigenSystem es = eig_right(h);
    CHECK(es.warnings.has(Code::DefectiveMatrix));
  }

  TEST_CASE("non-finite input is rejected") {
    ComplexMatrix h(2);
    h(0, 0) = std::nan("");
    CHECK_THROWS_AS(eig_right(h), Error);
  }

  TEST_CASE("trace, residual, normalization and ordering on random matrices") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {1u, 2u, 5u, 17u, 40u, 64u}) {
      for (int kind = 0; kind < 4; ++kind) {
        ComplexMatrix h = random_matrix(n, rng);
        if (kind == 1) {
          for (auto& x : h.storage()) x = x.real();  // real general
        } else if (kind == 2) {
          h = nhqm::testing::random_hermitian(n, rng);
        } else if (kind == 3) {
          h = nhqm::testing::random_hermitian(n, rng);
          for (auto& x : h.storage()) x = x.real();  // real symmetric
        }
        const EigenSystem es = eig_right(h);
        cplx tr = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += h(i, i);
        for (const auto& e : es.eigenvalues) sum += e;
        CHECK(std::abs(sum - tr) <= 1e-8 * std::max(1.0, std::abs(tr)) + 1e-10 * frobenius_norm(h));
        const double hn = frobenius_norm(h);
        for (std::size_t k = 0; k < n; ++k) {
          const auto v = es.vector(k);
          CHECK(std::abs(norm2(v) - 1.0) < 1e-10);
          auto hv = matvec(h, v);
          for (std::size_t i = 0; i < n; ++i) hv[i] -= es.eigenvalues[k] * v[i];
          CHECK(norm2(hv) <= 1e-8 * hn);
        }
        for (std::size_t k = 1; k < n; ++k) CHECK(es.eigenvalues[k - 1].real() <= es.eigenvalues[k].real() + 1e-9 * hn);
      }
    }
  }

  TEST_CASE("conjugate pairs are ordered by imaginary part") {
    // Rotation generator: eigenvalues +-i share real part 0.
    ComplexMatrix h(2);
    h(0, 1) = 1.0;
    h(1, 0) = -1.0;
    const EigenSystem es = eig_right(h);
    CHECK(es.eigenvalues[0].imag() < 0.0);
    CHECK(es.eigenvalues[1].imag() > 0.0);
    const auto ev = eigenvalues(h);
    CHECK(std::abs(ev[0] - es.eigenvalues[0]) < 1e-14);
  }

  TEST_CASE("ground state picks minimum real part, then minimum imaginary part") {
    ComplexMatrix h(2);
    h(0, 0) = cplx(1.0, 5.0);
    h(1, 1) = cplx(2.0, -1.0);
    const GroundState gs = ground_state(h);
    CHECK(std::abs(gs.energy - cplx(1.0, 5.0)) < 1e-14);
    CHECK(std::abs(std::abs(gs.psi[0]) - 1.0) < 1e-12);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix a = random_matrix(30, rng);
      const GroundState g = ground_state(a);
      const EigenSystem es = eig_right(a);
      CHECK(std::abs(g.energy - es.eigenvalues[0]) < 1e-9);
      CHECK(std::abs(std::abs(inner(g.psi, es.vector(0))) - 1.0) < 1e-8);
    }
  }
}

TEST_SUITE("match_states") {
  TEST_CASE("identical systems map to the identity") {
    std::mt19937_64 rng(3);
    const EigenSystem es = eig_right(random_matrix(6, rng));
    Warnings w;
    const auto p = match_states(es, es, &w);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == i);
    CHECK(!w.has(Code::AmbiguousMatch));
  }

  TEST_CASE("swapped columns are recovered") {
    std::mt19937_64 rng(4);
    const EigenSystem a = eig_right(random_matrix(5, rng));
    EigenSystem b = a;
    for (std::size_t i = 0; i < 5; ++i) std::swap(b.vectors(i, 0), b.vectors(i, 1));
    std::swap(b.eigenvalues[0], b.eigenvalues[1]);
    const auto p = match_states(a, b);
    CHECK(p[0] == 1);
    CHECK(p[1] == 0);
    for (std::size_t i = 2; i < 5; ++i) CHECK(p[i] == i);
  }

  TEST_CASE("rotated pair follows the greedy largest-overlap rule") {
    EigenSystem a, b;
    a.eigenvalues = {0.0, 1.0};
    a.vectors = ComplexMatrix::identity(2);
    b.eigenvalues = {0.0, 1.0};
    b.vectors = ComplexMatrix(2);
    b.vectors(0, 0) = 0.6;
    b.vectors(1, 0) = 0.8;
    b.vectors(0, 1) = -0.8;
    b.vectors(1, 1) = 0.6;
    Warnings w;
    const auto p = match_states(a, b, &w);
    // |<a_1|b_2>| = |<a_2|b_1>| = 0.8 beat the diagonal 0.6 overlaps.
    CHECK(p[0] == 1);
    CHECK(p[1] == 0);
    CHECK(!w.has(Code::AmbiguousMatch));
  }

  TEST_CASE("weak overlaps raise AmbiguousMatch") {
    EigenSystem a, b;
    a.eigenvalues = b.eigenvalues = {0.0, 1.0, 2.0, 3.0, 4.0};
    a.vectors = ComplexMatrix::identity(5);
    b.vectors = ComplexMatrix(5);
    const double s = 1.0 / std::sqrt(5.0);
    // Columns of a unitary DFT matrix: every overlap is 1/sqrt(5).
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) b.vectors(i, j) = s * std::polar(1.0, 2.0 * M_PI * i * j / 5.0);
    Warnings w;
    match_states(a, b, &w);
    CHECK(w.has(Code::AmbiguousMatch));
  }

  TEST_CASE("result is always a bijection") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 2 + trial % 9;
      const EigenSystem a = eig_right(random_matrix(n, rng));
      const EigenSystem b = eig_right(random_matrix(n, rng));
      auto p = match_states(a, b);
      std::sort(p.begin(), p.end());
      for (std::size_t i = 0; i < n; ++i) CHECK(p[i] == i);
    }
  }
}

TEST_SUITE("pfaffian") {
  TEST_CASE("2x2 definition") {
    ComplexMatrix a(2);
    a(0, 1) = cplx(2.0, -3.0);
    a(1, 0) = -a(0, 1);
    CHECK(std::abs(pfaffian(a) - cplx(2.0, -3.0)) < 1e-15);
  }

  TEST_CASE("odd dimension is zero") {
    std::mt19937_64 rng(1);
    CHECK(pfaffian(random_skew(3, rng)) == cplx(0.0));
    CHECK(pfaffian(random_skew(7, rng)) == cplx(0.0));
  }

  TEST_CASE("4x4 expansion") {
    RealMatrix a(4);
    const double up[4][4] = {{0, 1, 2, 3}, {0, 0, 4, 5}, {0, 0, 0, 6}, {0, 0, 0, 0}};
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        a(i, j) = up[i][j];
        a(j, i) = -up[i][j];
      }
    CHECK(pfaffian(a) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(std::abs(pfaffian(to_complex(a)) - 8.0) < 1e-13);
  }

  TEST_CASE("non-skew input is rejected") {
    ComplexMatrix a(2);
    a(0, 1) = 1.0;
    a(1, 0) = -0.5;
    try {
      pfaffian(a);
      FAIL("expected NotSkewSymmetric");
    } catch (const Error& e) {
      CHECK(e.code() == Code::NotSkewSymmetric);
    }
  }

  TEST_CASE("pf^2 = det on random complex skew matrices up to dim 20") {
    std::mt19937_64 rng(2024);
    for (std::size_t n = 2; n <= 20; n += 2) {
      for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix a = random_skew(n, rng);
        const cplx pf = pfaffian(a);
        const cplx det = determinant(a);
        CHECK(nhqm::testing::rel_err(pf * pf, det) < 1e-8);
      }
    }
  }

  TEST_CASE("pf(P^T A P) = det(P) pf(A)") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 2 * (1 + trial % 8);
      const ComplexMatrix a = random_skew(n, rng);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      // (P^T A P)_{ij} = A_{perm i, perm j}; det P is the permutation sign.
      ComplexMatrix b(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = a(perm[i], perm[j]);
      int sign = 1;
      std::vector<bool> seen(n, false);
      for (std::size_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = perm[j]) {
          seen[j] = true;
          ++len;
        }
        if (len % 2 == 0) sign = -sign;
      }
      CHECK(nhqm::testing::rel_err(pfaffian(b), static_cast<double>(sign) * pfaffian(a)) < 1e-10);
    }
  }

  TEST_CASE("serial and parallel kernels agree") {
    std::mt19937_64 rng(77);
    const ComplexMatrix a = random_skew(160, rng);
    const cplx s = pfaffian(a, 1e-10, Exec::serial);
    const cplx p = pfaffian(a, 1e-10, Exec::parallel);
    CHECK(s == p);
    RealMatrix r(130);
    std::normal_distribution<double> d;
    for (std::size_t i = 0; i < 130; ++i)
      for (std::size_t j = i + 1; j < 130; ++j) {
        r(i, j) = d(rng);
        r(j, i) = -r(i, j);
      }
    CHECK(pfaffian(r, 1e-10, Exec::serial) == pfaffian(r, 1e-10, Exec::parallel));
  }

  TEST_CASE("real overload matches the complex one") {
    std::mt19937_64 rng(12);
    RealMatrix r(12);
    std::normal_distribution<double> d;
    for (std::size_t i = 0; i < 12; ++i)
      for (std::size_t j = i + 1; j < 12; ++j) {
        r(i, j) = d(rng);
        r(j, i) = -r(i, j);
      }
    CHECK(std::abs(pfaffian(r) - pfaffian(to_complex(r))) < 1e-12 * std::abs(pfaffian(r)));
  }
}

TEST_SUITE("fit_linear") {
  TEST_CASE("exact line") {
    const std::vector<double> x{0, 1, 2}, y{1, 3, 5};
    const FitResult f = fit_linear(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.rms_residual < 1e-14);
  }

  TEST_CASE("constant data") {
    const std::vector<double> x{0, 1}, y{4.5, 4.5};
    const FitResult f = fit_linear(x, y);
    CHECK(std::abs(f.slope) < 1e-15);
    CHECK(f.intercept == doctest::Approx(4.5));
  }

  TEST_CASE("normal equations") {
    const std::vector<double> x{0, 1, 2}, y{0, 1, 1};
    const FitResult f = fit_linear(x, y);
    CHECK(f.slope == doctest::Approx(0.5));
    CHECK(f.intercept == doctest::Approx(1.0 / 6.0));
    CHECK(f.rms_residual >= 0.0);
  }

  TEST_CASE("degenerate abscissa and short input") {
    const std::vector<double> x{1, 1, 1}, y{0, 1, 2};
    try {
      fit_linear(x, y);
      FAIL("expected DegenerateAbscissa");
    } catch (const Error& e) {
      CHECK(e.code() == Code::DegenerateAbscissa);
    }
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(fit_linear(one, one), Error);
  }
}

TEST_CASE("warnings join in code order") {
  Warnings w;
  w.add(Code::AmbiguousMatch);
  w.add(Code::StepTooLarge, 2);
  CHECK(w.joined() == "AmbiguousMatch;StepTooLarge");
  Warnings v;
  v.add(Code::StepTooLarge);
  w.merge(v);
  CHECK(w.get(Code::StepTooLarge) == 3);
  CHECK(Warnings{}.empty());
}
