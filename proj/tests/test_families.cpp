#include <doctest.h>

#include <cmath>
#include <set>

#include "entroplane/error.hpp"
#include "entroplane/families.hpp"
#include "entroplane/measures.hpp"
#include "entroplane/plane.hpp"
#include "oracles.hpp"

using namespace entroplane;
using oracle::C;

TEST_CASE("e0_state layout and validation") {
  const auto rho = e0_state({0.35, 0.35, 0.7, 0.0});
  CHECK(rho.matrix() == mems1(0.7).matrix());
  CHECK(e0_state({1.0 / 3, 1.0 / 3, 0.5, 0.0}).matrix() == mems2(0.5).matrix());

  const auto phased = e0_state({0.2, 0.5, 0.4, 1.25});
  CHECK(std::abs(phased(1, 2) - std::polar(0.2, 1.25)) < 1e-16);
  CHECK(phased(2, 1) == std::conj(phased(1, 2)));
  CHECK(phased(0, 0) == C{0.0});
  CHECK(phased(3, 3).real() == doctest::Approx(0.3));

  CHECK_THROWS_AS(e0_state({0.2, 0.1, 0.4, 0.0}), InvalidParams);
  CHECK_THROWS_AS(e0_state({0.7, 0.5, 0.1, 0.0}), InvalidParams);
  CHECK_THROWS_AS(e0_state({-0.1, 0.5, 0.0, 0.0}), InvalidParams);
  CHECK_THROWS_AS(e0_state({0.5, 0.5, 1.2, 0.0}), InvalidParams);
  CHECK_THROWS_AS(e0_state({0.5, 0.5, 0.5, -0.1}), InvalidParams);
  CHECK_THROWS_AS(e0_state({0.5, 0.5, 0.5, 7.0}), InvalidParams);
  try {
    e0_state({0.2, 0.1, 0.4, 0.0});
  } catch (const InvalidParams& e) {
    CHECK(std::string(e.what()).find("c^2/4") != std::string::npos);
  }
}

TEST_CASE("e1_state") {
  const auto diag = e1_state({0.1, 0.2, 0.3, 0.0, 0.0, 0.0, 0.0});
  CHECK(concurrence(diag).concurrence == 0.0);
  CHECK(diag.matrix().max_abs_diff(CMatrix4::diagonal({0.3, 0.1, 0.2, 0.4})) < 1e-16);

  const E0Params p0{0.3, 0.25, 0.4, 2.0};
  CHECK(e1_state({p0.a, p0.b, 0.0, p0.c, 0.0, p0.theta, 1.0}).matrix() == e0_state(p0).matrix());

  CHECK(concurrence(e1_state({0.04, 0.04, 0.46, 0.0, 0.5, 0.0, 0.0})).concurrence ==
        doctest::Approx(0.42).epsilon(1e-10));

  CHECK_THROWS_AS(e1_state({0.04, 0.04, 0.46, 0.0, 0.95, 0.0, 0.0}), InvalidParams);
  CHECK_THROWS_AS(e1_state({0.4, 0.4, 0.3, 0.0, 0.0, 0.0, 0.0}), InvalidParams);

  // S_L = (4/3)(1 - a^2 - b^2 - f^2 - g^2 - c^2/2 - d^2/2).
  RngStream rng(31, 2);
  for (int trial = 0; trial < 20'000; ++trial) {
    const E1Params p = sample_e1(rng);
    const double g = 1.0 - p.a - p.b - p.f;
    const double expected = 4.0 / 3.0 *
                            (1.0 - p.a * p.a - p.b * p.b - p.f * p.f - g * g -
                             p.c * p.c / 2.0 - p.d * p.d / 2.0);
    CHECK(std::abs(linear_entropy(e1_state(p)) - expected) < 1e-12);
  }
}

TEST_CASE("MEMS families") {
  CHECK(mems1(2.0 / 3.0).matrix().max_abs_diff(mems2(2.0 / 3.0).matrix()) < 1e-16);
  const auto bell_like = mems1(1.0);
  CHECK(std::abs(linear_entropy(bell_like)) < 1e-15);
  CHECK(concurrence(bell_like).concurrence == doctest::Approx(1.0));
  CHECK(linear_entropy(mems2(0.5)) == doctest::Approx(8.0 / 9.0 - 1.0 / 6.0).epsilon(1e-14));

  for (int k = 0; k <= 100; ++k) {
    const double c1 = 2.0 / 3.0 + k * (1.0 / 3.0) / 100.0;
    CHECK(std::abs(linear_entropy(mems1(std::min(c1, 1.0))) - s_l1(std::min(c1, 1.0))) < 1e-12);
    const double c2 = std::max(1e-3, k * (2.0 / 3.0) / 100.0);
    CHECK(std::abs(linear_entropy(mems2(c2)) - s_l2(c2)) < 1e-12);
  }

  CHECK_THROWS_AS(mems1(0.6), DomainError);
  CHECK_THROWS_AS(mems1(1.01), DomainError);
  CHECK_THROWS_AS(mems2(0.0), DomainError);
  CHECK_THROWS_AS(mems2(0.7), DomainError);
}

TEST_CASE("RngStream determinism and independence") {
  RngStream a(42, 0), b(42, 0), other_stream(42, 1), other_seed(43, 0);
  const E0Params pa = sample_e0(a);
  const E0Params pb = sample_e0(b);
  CHECK(pa.a == pb.a);
  CHECK(pa.b == pb.b);
  CHECK(pa.c == pb.c);
  CHECK(pa.theta == pb.theta);
  CHECK(sample_e0(other_stream).a != pa.a);
  CHECK(sample_e0(other_seed).a != pa.a);

  // Large stream indices use the upper half of the seed material.
  RngStream hi1(1, std::uint64_t{1} << 32), hi2(1, 0);
  CHECK(hi1.next_u64() != hi2.next_u64());

  RngStream u(9, 9);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100'000; ++i) {
    const double x = u.uniform();
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    sum += x;
    seen.insert(u.index(8));
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / 100'000 == doctest::Approx(0.5).epsilon(0.01));
  CHECK(seen == std::set<std::uint64_t>{0, 1, 2, 3, 4, 5, 6, 7});

  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < 200'000; ++i) {
    const double z = u.normal();
    m1 += z;
    m2 += z * z;
  }
  CHECK(std::abs(m1 / 200'000) < 0.01);
  CHECK(m2 / 200'000 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("E0 and E1 samplers") {
  RngStream rng(2024, 0);
  double mean_a = 0.0, mean_sum = 0.0;
  constexpr int kN = 200'000;
  for (int i = 0; i < kN; ++i) {
    const E0Params p = sample_e0(rng);
    CHECK_NOTHROW(validate(p));
    mean_a += p.a;
    mean_sum += p.a + p.b;
    const auto rho = e0_state(p);
    CHECK(linear_entropy(rho) <= frontier_mems(std::max(p.c, 1e-300)) + 1e-9);
  }
  // Uniform on the triangle: E[a] = 1/3, E[a + b] = 2/3.
  CHECK(mean_a / kN == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  CHECK(mean_sum / kN == doctest::Approx(2.0 / 3.0).epsilon(0.01));

  RngStream rng1(2024, 1);
  double mean_f = 0.0;
  for (int i = 0; i < kN; ++i) {
    const E1Params p = sample_e1(rng1);
    CHECK_NOTHROW(validate(p));
    mean_f += p.f;
    const auto rho = e1_state(p);
    const double c = concurrence(rho).concurrence;
    if (c > 0.0) CHECK(linear_entropy(rho) <= frontier_mems(c) + 1e-9);
  }
  // Uniform on the 3-simplex: each coordinate has mean 1/4.
  CHECK(mean_f / kN == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("separable and full-rank samplers") {
  RngStream rng(8, 3);
  int ppt = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto sep = sample_separable(rng);
    CHECK(concurrence(sep).concurrence < 1e-7);
    CHECK_FALSE(entropic_violation(sep).violates_any);

    const auto full = sample_full_rank(rng);
    CHECK(full.spectrum()[3] > 0.0);
    if (hermitian_eigen(partial_transpose(full)).eigenvalues[3] >= -1e-10) ++ppt;
  }
  // Both PPT and entangled states occur in the Ginibre ensemble.
  CHECK(ppt > 500);
  CHECK(ppt < 4500);
}
