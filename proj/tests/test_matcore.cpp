#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "entroplane/error.hpp"
#include "entroplane/matcore.hpp"
#include "oracles.hpp"

using namespace entroplane;
using oracle::C;

TEST_CASE("hermitian_eigen: identity and diagonal inputs") {
  const auto id = hermitian_eigen(CMatrix4::identity());
  for (double l : id.eigenvalues) CHECK(l == doctest::Approx(1.0).epsilon(1e-15));

  const auto d = hermitian_eigen(CMatrix4::diagonal({0.2, 0.5, 0.0, 0.3}));
  CHECK(d.eigenvalues[0] == doctest::Approx(0.5));
  CHECK(d.eigenvalues[1] == doctest::Approx(0.3));
  CHECK(d.eigenvalues[2] == doctest::Approx(0.2));
  CHECK(std::abs(d.eigenvalues[3]) < 1e-15);
}

TEST_CASE("hermitian_eigen: MEMS I at c = 0.7 against the characteristic polynomial") {
  // diag(0, 0.35, 0.35, 0.3) with 0.35 at (1, 2) and (2, 1)
  CMatrix4 m = CMatrix4::diagonal({0.0, 0.35, 0.35, 0.3});
  m(1, 2) = m(2, 1) = 0.35;
  const auto e = hermitian_eigen(m);
  const auto rows = oracle::rows_of(m);
  for (double l : e.eigenvalues) CHECK(std::abs(oracle::char_poly(rows, l)) < 1e-14);
  const auto expected = oracle::power_sums(rows);
  const auto got = oracle::power_sums(e.eigenvalues);
  for (int k = 0; k < 4; ++k) CHECK(got[k] == doctest::Approx(expected[k]).epsilon(1e-13));
  CHECK(e.eigenvalues[0] == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(e.eigenvalues[1] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(std::abs(e.eigenvalues[2]) < 1e-15);
  CHECK(std::abs(e.eigenvalues[3]) < 1e-15);
}

TEST_CASE("hermitian_eigen: random Hermitian matrices") {
  std::mt19937_64 g(1234);
  for (int trial = 0; trial < 2000; ++trial) {
    const CMatrix4 m = oracle::random_hermitian(g, trial % 3 == 0 ? 1e-3 : 1.0);
    const auto e = hermitian_eigen(m);
    CHECK(std::is_sorted(e.eigenvalues.rbegin(), e.eigenvalues.rend()));
    CHECK(e.reconstruct().max_abs_diff(m) < 1e-10);
    const CMatrix4 vv = e.eigenvectors.adjoint() * e.eigenvectors;
    CHECK(vv.max_abs_diff(CMatrix4::identity()) < 1e-10);
    double sum = 0.0, sq = 0.0;
    for (double l : e.eigenvalues) {
      sum += l;
      sq += l * l;
    }
    CHECK(std::abs(sum - m.trace().real()) < 1e-10);
    CHECK(std::abs(sq - m.frobenius_norm() * m.frobenius_norm()) < 1e-10);
    const auto expected = oracle::power_sums(oracle::rows_of(m));
    const auto got = oracle::power_sums(e.eigenvalues);
    for (int k = 0; k < 4; ++k)
      CHECK(std::abs(got[k] - expected[k]) < 1e-9 * std::max(1.0, std::abs(expected[k])));
  }
}

TEST_CASE("hermitian_eigen: degenerate and complex-phase inputs") {
  // Two-fold degenerate spectrum {2, 2, -1, -1} rotated by a unitary with phases.
  const double h = 1.0 / std::sqrt(2.0);
  const std::array<C, 4> u{h, C{0.0, h}, 0.0, 0.0};
  const std::array<C, 4> v{C{0.0, h}, h, 0.0, 0.0};
  CMatrix4 m = CMatrix4::outer(u, u) * C{2.0} + CMatrix4::outer(v, v) * C{2.0};
  m(2, 2) = -1.0;
  m(3, 3) = -1.0;
  m(2, 3) = C{0.0, 1e-17};
  m(3, 2) = C{0.0, -1e-17};
  const auto e = hermitian_eigen(m);
  CHECK(e.eigenvalues[0] == doctest::Approx(2.0));
  CHECK(e.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(e.eigenvalues[2] == doctest::Approx(-1.0));
  CHECK(e.eigenvalues[3] == doctest::Approx(-1.0));
  CHECK(e.reconstruct().max_abs_diff(m) < 1e-12);
}

TEST_CASE("hermitian_eigen: 2x2 and 3x3") {
  CMatrix2 m2 = CMatrix2::from_rows({{{1.0, C{0.0, 1.0}}, {C{0.0, -1.0}, 1.0}}});
  const auto e2 = hermitian_eigen(m2);
  CHECK(e2.eigenvalues[0] == doctest::Approx(2.0));
  CHECK(std::abs(e2.eigenvalues[1]) < 1e-15);

  CMatrix<3> m3 = CMatrix<3>::diagonal({1.0, 3.0, 2.0});
  m3(0, 1) = m3(1, 0) = 0.5;
  const auto e3 = hermitian_eigen(m3);
  const auto ref = oracle::sym3_eigenvalues({{{1.0, 0.5, 0.0}, {0.5, 3.0, 0.0}, {0.0, 0.0, 2.0}}});
  CHECK(e3.eigenvalues[0] == doctest::Approx(ref[0]));
  CHECK(e3.eigenvalues[1] == doctest::Approx(ref[1]));
  CHECK(e3.eigenvalues[2] == doctest::Approx(ref[2]));
}

TEST_CASE("hermitian_eigen: rejects non-Hermitian input") {
  CMatrix4 m = CMatrix4::identity();
  m(0, 1) = 1e-9;
  CHECK_THROWS_AS(hermitian_eigen(m), NotHermitian);
}

TEST_CASE("from_rows rejects non-finite entries") {
  CMatrix2::Rows rows{};
  rows[1][0] = std::nan("");
  CHECK_THROWS_AS(CMatrix2::from_rows(rows), NonFinite);
}

TEST_CASE("matrix_sqrt_psd") {
  CHECK(matrix_sqrt_psd(CMatrix4::identity()).max_abs_diff(CMatrix4::identity()) < 1e-15);
  CHECK(matrix_sqrt_psd(CMatrix4::diagonal({4.0, 1.0, 0.0, 0.25}))
            .max_abs_diff(CMatrix4::diagonal({2.0, 1.0, 0.0, 0.5})) < 1e-15);

  const CMatrix4 bell = oracle::bell_phi_plus().matrix();
  CHECK(matrix_sqrt_psd(bell).max_abs_diff(bell) < 1e-12);

  // Tiny negative eigenvalue from rounding is clamped; a real one is rejected.
  CHECK_NOTHROW(matrix_sqrt_psd(CMatrix4::diagonal({1.0, 0.0, -5e-11, 0.0})));
  CHECK_THROWS_AS(matrix_sqrt_psd(CMatrix4::diagonal({1.0, 0.0, -1e-6, 0.0})), NotPSD);

  std::mt19937_64 g(99);
  for (int trial = 0; trial < 10'000; ++trial) {
    const CMatrix4 m = oracle::random_density_rows(g, trial % 4);
    const CMatrix4 r = matrix_sqrt_psd(m);
    CHECK(r.hermiticity_defect() < 1e-12);
    CHECK((r * r).max_abs_diff(m) < 1e-9);
  }
}

TEST_CASE("integrate_adaptive: exact and closed-form references") {
  CHECK(integrate_adaptive([](double x) { return x; }, 0.0, 1.0, {}, 1e-12) ==
        doctest::Approx(0.5).epsilon(1e-14));

  // Cubics are integrated exactly on every panel.
  auto cubic = [](double x) { return 2.0 * x * x * x - 3.0 * x * x + x - 7.0; };
  auto antider = [](double x) { return 0.5 * x * x * x * x - x * x * x + 0.5 * x * x - 7.0 * x; };
  CHECK(std::abs(integrate_adaptive(cubic, -1.5, 2.0, {0.1, 0.7}, 1e-12) -
                 (antider(2.0) - antider(-1.5))) < 1e-12);

  // int_0^{1/sqrt2} sqrt(1 - 2c^2) dc = pi / (4 sqrt2)
  const double r = 1.0 / std::sqrt(2.0);
  const double q = integrate_adaptive(
      [](double c) { return std::sqrt(std::max(0.0, 1.0 - 2.0 * c * c)); }, 0.0, r, {}, 1e-12);
  CHECK(std::abs(q - std::numbers::pi / (4.0 * std::sqrt(2.0))) < 1e-10);
  CHECK(q == doctest::Approx(0.5553604).epsilon(1e-7));

  // Piecewise frontier: 8/9 - (2/3)c^2 below 2/3, (8/3)c(1 - c) above; area 52/81.
  auto frontier = [](double c) {
    return c < 2.0 / 3.0 ? 8.0 / 9.0 - 2.0 / 3.0 * c * c : 8.0 / 3.0 * c * (1.0 - c);
  };
  CHECK(std::abs(integrate_adaptive(frontier, 0.0, 1.0, {2.0 / 3.0}, 1e-13) - 52.0 / 81.0) <
        1e-12);
}

TEST_CASE("integrate_adaptive: errors") {
  auto one = [](double) { return 1.0; };
  CHECK_THROWS_AS(integrate_adaptive(one, 1.0, 0.0, {}, 1e-9), DomainError);
  CHECK_THROWS_AS(integrate_adaptive(one, 0.0, 1.0, {0.7, 0.3}, 1e-9), DomainError);
  CHECK_THROWS_AS(integrate_adaptive(one, 0.0, 1.0, {1.5}, 1e-9), DomainError);
  CHECK_THROWS_AS(integrate_adaptive(one, 0.0, 1.0, {}, 0.0), DomainError);
  // The 1/sqrt(x) singularity needs panels far narrower than 2^-60 at 1e-12.
  auto singular = [](double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; };
  CHECK_THROWS_AS(integrate_adaptive(singular, 0.0, 1.0, {}, 1e-12), MaxDepth);
  CHECK(integrate_adaptive(singular, 0.25, 1.0, {}, 1e-12) == doctest::Approx(1.0));
  auto step = [](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; };
  CHECK(integrate_adaptive(step, 0.0, 1.0, {1.0 / 3.0}, 1e-12) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(integrate_adaptive(one, 0.5, 0.5, {}, 1e-9) == 0.0);
}
