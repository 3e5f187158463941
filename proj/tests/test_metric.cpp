#include <algorithm>
#include <map>

#include "nhqm/eigen.hpp"
#include "nhqm/metric.hpp"
#include "nhqm/model.hpp"
#include "testing.hpp"

using namespace nhqm;

namespace {

ComplexMatrix two_level(double mu) {
  ComplexMatrix h(2);
  h(0, 1) = h(1, 0) = 1.0;
  h(0, 0) = mu;
  h(1, 1) = -mu;
  return h;
}

// H(theta) = cos(theta) sigma_z + sin(theta) sigma_x, ground-state metric 1/4.
MatrixFamily rotating(double rate) {
  return [rate](double mu) {
    ComplexMatrix h(2);
    h(0, 0) = std::cos(rate * mu);
    h(1, 1) = -std::cos(rate * mu);
    h(0, 1) = h(1, 0) = std::sin(rate * mu);
    return h;
  };
}

}  // namespace

TEST_SUITE("fidelity") {
  TEST_CASE("identical, orthogonal and rotated vectors") {
    const std::vector<cplx> a{1.0, 0.0}, b{0.0, 1.0};
    CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fidelity(a, b) < 1e-15);
    const std::vector<cplx> c{std::cos(0.3), std::sin(0.3)};
    CHECK(fidelity(a, c) == doctest::Approx(0.955336489125606).epsilon(1e-12));
  }

  TEST_CASE("unnormalized input is rejected") {
    const std::vector<cplx> a{1.0, 1.0}, b{1.0, 0.0};
    try {
      fidelity(a, b);
      FAIL("expected NotNormalized");
    } catch (const Error& e) {
      CHECK(e.code() == Code::NotNormalized);
    }
  }

  TEST_CASE("global phases drop out") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> d;
    std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<cplx> a(8), b(8);
      for (auto& x : a) x = cplx(d(rng), d(rng));
      for (std::size_t i = 0; i < 8; ++i) b[i] = a[i] + 1e-3 * cplx(d(rng), d(rng));
      const double na = norm2(a), nb = norm2(b);
      for (auto& x : a) x /= na;
      for (auto& x : b) x /= nb;
      const MetricValue m0 = metric_from_pair(a, b, 1e-3);
      const cplx pa = std::polar(1.0, ph(rng)), pb = std::polar(1.0, ph(rng));
      for (auto& x : a) x *= pa;
      for (auto& x : b) x *= pb;
      const MetricValue m1 = metric_from_pair(a, b, 1e-3);
      CHECK(std::abs(m1.g - m0.g) <= 1e-12 * std::max(1.0, m0.g));
      CHECK(std::abs(m1.fidelity - m0.fidelity) <= 1e-12);
    }
  }
}

TEST_SUITE("metric_diagonal") {
  TEST_CASE("two-level Bloch model against the closed form") {
    const MatrixFamily f = two_level;
    for (double step : {1e-3, 1e-4}) {
      MetricOptions o;
      o.step = step;
      CHECK(metric_diagonal(f, 0.0, 1, o).g == doctest::Approx(0.25).epsilon(4e-5));
      CHECK(metric_diagonal(f, 1.0, 1, o).g == doctest::Approx(1.0 / 16.0).epsilon(1.6e-4));
      // The excited state rotates by the same angle.
      CHECK(metric_diagonal(f, 0.0, 2, o).g == doctest::Approx(0.25).epsilon(4e-5));
    }
  }

  TEST_CASE("parameter-independent Hamiltonian has zero metric") {
    std::mt19937_64 rng(6);
    const ComplexMatrix h = nhqm::testing::random_matrix(10, rng);
    const MatrixFamily f = [h](double) { return h; };
    for (std::size_t n : {1u, 4u}) {
      const MetricValue m = metric_diagonal(f, 0.3, n);
      CHECK(std::abs(m.g) < 1e-10);
      CHECK(m.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("fast rotation triggers step halving") {
    const MatrixFamily f = rotating(100.0);
    MetricOptions o;
    o.step = 3e-2;
    const MetricValue m = metric_ground_state(f, 0.1, o);
    CHECK(m.warnings.has(Code::StepTooLarge));
    CHECK(m.step == doctest::Approx(1.5e-2));
    CHECK(m.fidelity >= 0.5);
    // g = (rate / 2)^2 up to the O((rate dmu)^2) stencil error.
    CHECK(m.g == doctest::Approx(2500.0).epsilon(0.15));
  }

  TEST_CASE("continuation and plain ground-state paths agree") {
    Gaa1Spec s;
    s.L = 89;
    s.V1 = 2.0;
    s.V2 = 0.5;
    s.g = 0.5;
    const MatrixFamily f = matrix_family(s, "V1");
    MetricOptions a, b;
    b.continuation = false;
    const double g1 = metric_ground_state(f, 2.7, a).g, g2 = metric_ground_state(f, 2.7, b).g;
    CHECK(g1 == doctest::Approx(g2).epsilon(1e-6));
  }

  TEST_CASE("step robustness in the extended phase") {
    Gaa1Spec s;
    s.L = 144;
    s.V1 = 0.5;
    s.g = 0.5;
    const MatrixFamily f = matrix_family(s, "V1");
    MetricOptions a, b;
    a.step = 1e-3;
    b.step = 5e-4;
    const double g1 = metric_ground_state(f, 0.5, a).g, g2 = metric_ground_state(f, 0.5, b).g;
    CHECK(g1 == doctest::Approx(g2).epsilon(0.01));
  }

  TEST_CASE("Hermitian perturbation-sum oracle") {
    std::mt19937_64 rng(31);
    for (std::size_t dim : {6u, 24u, 64u}) {
      const ComplexMatrix h0 = nhqm::testing::random_hermitian(dim, rng);
      const ComplexMatrix h1 = nhqm::testing::random_hermitian(dim, rng);
      const double mu = 0.2;
      const MatrixFamily f = [&](double m) {
        ComplexMatrix h(dim);
        for (std::size_t i = 0; i < dim * dim; ++i) h.storage()[i] = h0.storage()[i] + m * h1.storage()[i];
        return h;
      };
      const EigenSystem es = eig_right(f(mu));
      for (std::size_t n : {std::size_t{0}, dim / 2, dim - 1}) {
        const auto vn = es.vector(n);
        const auto dv = matvec(h1, vn);
        double sum = 0.0;
        for (std::size_t m = 0; m < dim; ++m) {
          if (m == n) continue;
          const double de = (es.eigenvalues[m] - es.eigenvalues[n]).real();
          sum += std::norm(inner(es.vector(m), dv)) / (de * de);
        }
        MetricOptions o;
        o.step = 1e-4;
        const MetricValue g = metric_diagonal(f, mu, n + 1, o);
        CHECK(g.g == doctest::Approx(sum).epsilon(1e-4));
      }
    }
  }
}

TEST_SUITE("metric_spectrum") {
  TEST_CASE("diagonal model has constant eigenvectors") {
    const MatrixFamily f = [](double mu) {
      ComplexMatrix h(2);
      h(0, 0) = mu;
      h(1, 1) = -mu;
      return h;
    };
    for (double mu : {-0.7, 0.4}) {
      const auto gs = metric_spectrum(f, mu);
      REQUIRE(gs.size() == 2);
      CHECK(gs[0].g == 0.0);
      CHECK(gs[1].g == 0.0);
    }
  }

  TEST_CASE("matches per-state evaluation on a non-Hermitian chain") {
    Gaa1Spec s;
    s.L = 34;
    s.V1 = 1.5;
    s.V2 = 0.3;
    s.g = 0.2;
    const MatrixFamily f = matrix_family(s, "V1");
    const auto all = metric_spectrum(f, 1.5);
    for (std::size_t n : {1u, 7u, 20u}) {
      MetricOptions o;
      o.continuation = false;
      const double single = metric_diagonal(f, 1.5, n, o).g;
      CHECK(all[n - 1].g == doctest::Approx(single).epsilon(1e-6));
    }
  }

  TEST_CASE("all values are non-negative") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 6; ++trial) {
      const ComplexMatrix a = nhqm::testing::random_matrix(12, rng), b = nhqm::testing::random_matrix(12, rng);
      const MatrixFamily f = [&](double m) {
        ComplexMatrix h(12);
        for (std::size_t i = 0; i < 144; ++i) h.storage()[i] = a.storage()[i] + m * b.storage()[i];
        return h;
      };
      for (const auto& v : metric_spectrum(f, 0.1 * trial)) {
        CHECK(v.g >= -1e-12);
        CHECK(v.fidelity <= 1.0 + 1e-12);
      }
    }
  }

  TEST_CASE("GAA2 states on either side of the mobility edge peak at different Delta") {
    // L = 89, alpha = -0.5: the edge at Delta = 1.8 sits at E_c = -0.4.
    Gaa2Spec s;
    s.L = 89;
    s.alpha = -0.5;
    s.Delta = 1.8;
    const MatrixFamily f = matrix_family(s, "Delta");
    std::vector<cplx> e18;
    metric_spectrum(f, 1.8, {}, &e18);
    std::vector<double> deltas;
    for (double d = 1.0; d <= 2.6 + 1e-9; d += 0.02) deltas.push_back(d);
    std::vector<std::vector<double>> g(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i)
      for (const auto& v : metric_spectrum(f, deltas[i])) g[i].push_back(v.g);
    std::vector<double> below, above;
    for (std::size_t n = 0; n < static_cast<std::size_t>(s.L); ++n) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < deltas.size(); ++i)
        if (g[i][n] > g[best][n]) best = i;
      (e18[n].real() < -0.4 ? below : above).push_back(deltas[best]);
    }
    REQUIRE(!below.empty());
    REQUIRE(!above.empty());
    auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return v[v.size() / 2];
    };
    CHECK(median(below) < median(above) - 0.1);
  }
}

TEST_SUITE("evaluate_metric") {
  TEST_CASE("requests dispatch by model and state") {
    MetricRequest r;
    Gaa1Spec s;
    s.L = 34;
    s.V1 = 2.0;
    r.model = s;
    r.parameter = "V1";
    CHECK(evaluate_metric(r).size() == 1);
    r.state_index = kAllStates;
    CHECK(evaluate_metric(r).size() == 34);
    r.parameter = "L";
    CHECK_THROWS_AS(evaluate_metric(r), Error);
    r.parameter = "V1";
    r.step = 0.0;
    CHECK_THROWS_AS(evaluate_metric(r), Error);
  }

  TEST_CASE("xi floor") {
    CHECK(xi_of(0.0) == doctest::Approx(-300.0));
    CHECK(xi_of(-1e-14) == doctest::Approx(-300.0));
    CHECK(xi_of(100.0) == doctest::Approx(2.0));
  }
}
