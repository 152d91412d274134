#include <doctest.h>

#include <cmath>
#include <numbers>

#include "entroplane/error.hpp"
#include "entroplane/measures.hpp"
#include "entroplane/plane.hpp"
#include "oracles.hpp"

using namespace entroplane;

namespace {

const double kR = kInvSqrt2;

// int_0^x sqrt(1 - 2c^2) dc
double radical_integral(double x) {
  const double u = std::sqrt(2.0) * x;
  return (u * std::sqrt(std::max(0.0, 1.0 - u * u)) + std::asin(std::min(u, 1.0))) /
         (2.0 * std::sqrt(2.0));
}

// Antiderivatives of (8/3)c(1 - c) and (1/3)(1 + c^2).
double s_l1_integral(double c) { return 4.0 / 3.0 * c * c - 8.0 / 9.0 * c * c * c; }
double base_integral(double c) { return (c + c * c * c / 3.0) / 3.0; }

double exact_v_area() {
  const double below = base_integral(kR) - radical_integral(kR) / 3.0;
  const double wedge = (s_l1_integral(kR) - s_l1_integral(2.0 / 3.0)) -
                       (base_integral(kR) - base_integral(2.0 / 3.0)) -
                       (radical_integral(kR) - radical_integral(2.0 / 3.0)) / 3.0;
  const double right = s_l1_integral(1.0) - s_l1_integral(kR);
  return below + wedge + right;
}

}  // namespace

TEST_CASE("boundary curves") {
  CHECK(frontier_mems(1.0) == 0.0);
  CHECK(std::abs(frontier_mems(2.0 / 3.0) - 16.0 / 27.0) < 1e-15);
  CHECK(std::abs(s_l2(2.0 / 3.0) - 16.0 / 27.0) < 1e-15);
  CHECK(frontier_mems(0.3) == doctest::Approx(0.82889).epsilon(1e-5));
  CHECK_THROWS_AS(frontier_mems(0.0), DomainError);
  CHECK_THROWS_AS(frontier_mems(1.0 + 1e-12), DomainError);

  CHECK(s_l_minus(0.0) == 0.0);
  CHECK(s_l_plus(0.0) == doctest::Approx(2.0 / 3.0));
  CHECK(std::abs(s_l_minus(kR) - 0.5) < 1e-15);
  CHECK(std::abs(s_l_plus(kR) - 0.5) < 1e-15);
  CHECK(s_l_minus(0.5) == doctest::Approx((1.25 - std::sqrt(0.5)) / 3.0));
  CHECK(s_l_minus(0.5) == doctest::Approx(0.18096).epsilon(1e-5));
  CHECK_THROWS_AS(s_l_minus(0.71), DomainError);
  CHECK_THROWS_AS(s_l_plus(-0.1), DomainError);
  for (int k = 0; k <= 100; ++k) CHECK(s_l_minus(k * kR / 100) <= s_l_plus(k * kR / 100));
}

TEST_CASE("rotated coordinates") {
  const XYPoint centre = to_xy(1.0 / 3.0, 1.0 / 3.0);
  CHECK(std::abs(centre.x) < 1e-16);
  CHECK(std::abs(centre.y) < 1e-16);
  CHECK(in_x_plus(centre, 2.0 / 3.0));
  CHECK_FALSE(in_x_plus(centre, 0.67));

  const double c = 0.8;
  const XYPoint m1 = to_xy(c / 2, c / 2);
  CHECK(m1.x == 0.0);
  CHECK(m1.y == doctest::Approx((c - 2.0 / 3.0) / std::sqrt(2.0)));

  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100'000; ++trial) {
    const double a = u(g), b = u(g) * (1.0 - a);
    const double cc = u(g) * std::min(1.0, 2.0 * std::sqrt(a * b));
    const XYPoint p = to_xy(a, b);
    const auto [a2, b2] = from_xy(p);
    CHECK(std::abs(a2 - a) < 1e-15);
    CHECK(std::abs(b2 - b) < 1e-15);
    CHECK(in_x_plus(p, cc * (1.0 - 1e-9)));
    CHECK(std::abs(linear_entropy_xy(p, cc) - oracle::e0_linear_entropy(a, b, cc)) < 1e-12);
    // The inequality in (x, y) is half the purity gap.
    CHECK(std::abs(2.0 * eineq_lhs(p, cc) - oracle::e0_gap_a(a, b, cc)) < 1e-12);
  }
}

TEST_CASE("eineq_lhs examples") {
  for (double c : {0.68, 0.7, 0.8, 1.0}) {
    const XYPoint p = to_xy(c / 2, c / 2);
    CHECK(eineq_lhs(p, c) == doctest::Approx((1.5 * c * c - c) / 2.0));
  }
  CHECK(eineq_lhs(to_xy(1.0 / 3, 1.0 / 3), 0.0) < 0.0);
  CHECK(eineq_lhs(to_xy(1.0 / 3, 1.0 / 3), 0.0) ==
        doctest::Approx(entropic_violation(e0_state({1.0 / 3, 1.0 / 3, 0.0, 0.0})).gap_a / 2));
  CHECK(eineq_lhs(to_xy(0.5, 0.5), 1.0) > 0.0);
}

TEST_CASE("level-set ellipse") {
  const EllipseSpec e = ellipse_axes(0.0, 1.0);
  CHECK(e.A == doctest::Approx(std::sqrt(6.0 / 36.0)));
  CHECK(e.A == doctest::Approx(0.40825).epsilon(1e-5));
  CHECK(e.A == doctest::Approx(std::sqrt(3.0) * e.B));

  // At the MEMS II level the ellipse collapses onto the point (0, 0).
  const double c = 0.5;
  const EllipseSpec m2 = ellipse_axes(s_l2(c), c);
  CHECK(m2.A < 1e-7);
  CHECK(m2.B < 1e-7);
  CHECK(std::abs(linear_entropy_xy({0.0, 0.0}, c) - s_l2(c)) < 1e-15);

  std::mt19937_64 g(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10'000; ++trial) {
    const double cc = u(g);
    const double s = u(g) * (8.0 / 9.0 - 2.0 / 3.0 * cc * cc);
    const EllipseSpec axes = ellipse_axes(s, cc);
    const double t = 2.0 * std::numbers::pi * u(g);
    const XYPoint p{axes.A * std::cos(t), axes.B * std::sin(t)};
    CHECK(std::abs(linear_entropy_xy(p, cc) - s) < 1e-12);
  }
  CHECK_THROWS_AS(ellipse_axes(0.95, 0.1), NoLevelSet);
}

TEST_CASE("classify_entropic examples") {
  CHECK(classify_entropic({0.75, 0.3}) == RegionLabel::V_E);
  CHECK(classify_entropic({0.3, 0.7}) == RegionLabel::NV_E);
  CHECK(classify_entropic({0.3, 0.2}) == RegionLabel::Zero_E);
  CHECK(classify_entropic({0.5, 0.9}) == RegionLabel::NonPhysical);
  CHECK(classify_entropic({0.5, 0.72222}) == RegionLabel::NV_E);
  CHECK(classify_entropic({0.0, 0.95}) == RegionLabel::NV_E);
  CHECK(classify_entropic({0.0, 0.0}) == RegionLabel::NV_E);
  CHECK(classify_entropic({1.0, 0.0}) == RegionLabel::V_E);
  CHECK(classify_entropic({1.0, 0.01}) == RegionLabel::NonPhysical);
  CHECK(classify_entropic({-0.1, 0.2}) == RegionLabel::NonPhysical);
  CHECK(classify_entropic({0.2, 1.1}) == RegionLabel::NonPhysical);
  CHECK(classify_entropic({std::nan(""), 0.2}) == RegionLabel::NonPhysical);

  // Boundaries follow the strict / non-strict inequalities as written.
  CHECK(classify_entropic({0.3, s_l_minus(0.3)}) == RegionLabel::Zero_E);
  CHECK(classify_entropic({0.3, 2.0 / 3.0}) == RegionLabel::Zero_E);
  CHECK(classify_entropic({0.55, s_l1(0.55)}) == RegionLabel::NV_E);
  CHECK(classify_entropic({0.7, s_l_plus(0.7)}) == RegionLabel::Zero_E);
  CHECK(classify_entropic({0.7, s_l1(0.7)}) == RegionLabel::V_E);
}

TEST_CASE("snap and boundary band") {
  const double f = frontier_mems(0.4);
  CHECK(snap_to_physical({0.4, f + 5e-10}).s == f);
  CHECK(snap_to_physical({0.4, f + 5e-9}).s == f + 5e-9);
  CHECK(snap_to_physical({-1e-12, 0.3}).c == 0.0);
  CHECK(snap_to_physical({1.0 + 1e-12, 0.0}).c == 1.0);
  CHECK(snap_to_physical({0.5, -1e-12}).s == 0.0);

  CHECK(near_entropic_boundary({0.3, s_l_minus(0.3) + 1e-10}, 1e-9));
  CHECK_FALSE(near_entropic_boundary({0.3, s_l_minus(0.3) + 1e-6}, 1e-9));
  CHECK(near_entropic_boundary({kR + 1e-10, 0.3}, 1e-9) == false);
  CHECK(near_entropic_boundary({kR, 0.1}, 1e-9));
  CHECK(near_entropic_boundary({1e-10, 0.3}, 1e-9));
  CHECK_FALSE(near_entropic_boundary({0.0, 0.3}, 1e-9));
}

TEST_CASE("entropic areas against closed forms") {
  const AreaReport r = entropic_region_areas(1e-10);
  CHECK(std::abs(r.total_area - 52.0 / 81.0) < 1e-10);
  CHECK(std::abs(r.nv_area - 7.0 / 81.0) < 1e-10);
  CHECK(std::abs(r.v_area - exact_v_area()) < 1e-10);
  CHECK(std::abs(r.nv_percent - 700.0 / 52.0) < 1e-8);
  CHECK(std::abs(r.v_percent + r.zero_percent + r.nv_percent - 100.0) < 1e-8);
  CHECK(std::abs(r.v_area + r.zero_area + r.nv_area - r.total_area) < 1e-10);
  CHECK(r.v_percent == doctest::Approx(28.38694).epsilon(1e-6));
  CHECK(r.zero_percent == doctest::Approx(58.15153).epsilon(1e-6));
  CHECK(std::abs(r.v_percent - 28.390) < 0.05);
  CHECK(std::abs(r.zero_percent - 58.155) < 0.05);
  CHECK(std::abs(r.nv_percent - 13.455) < 0.05);
  CHECK_THROWS_AS(entropic_region_areas(0.0), DomainError);
}

TEST_CASE("slice lengths agree with pointwise classification") {
  constexpr int kS = 200'000;
  for (int k = 1; k < 100; ++k) {
    const double c = k / 100.0 + 0.0037;
    const SliceLengths len = entropic_slice(c);
    double v = 0, z = 0, nv = 0;
    for (int j = 0; j < kS; ++j) {
      const double s = (j + 0.5) / kS;
      switch (classify_entropic({c, s})) {
        case RegionLabel::V_E: v += 1.0 / kS; break;
        case RegionLabel::Zero_E: z += 1.0 / kS; break;
        case RegionLabel::NV_E: nv += 1.0 / kS; break;
        case RegionLabel::NonPhysical: break;
      }
    }
    CHECK(std::abs(v - len.v) < 2e-5);
    CHECK(std::abs(z - len.zero) < 2e-5);
    CHECK(std::abs(nv - len.nv) < 2e-5);
  }
}

TEST_CASE("2-D label grid reproduces the areas") {
  constexpr int kN = 1500;
  double v = 0, z = 0, nv = 0;
  for (int i = 0; i < kN; ++i)
    for (int j = 0; j < kN; ++j) {
      switch (classify_entropic({(i + 0.5) / kN, (j + 0.5) / kN})) {
        case RegionLabel::V_E: ++v; break;
        case RegionLabel::Zero_E: ++z; break;
        case RegionLabel::NV_E: ++nv; break;
        case RegionLabel::NonPhysical: break;
      }
    }
  const double cell = 1.0 / (double(kN) * kN);
  const AreaReport r = entropic_region_areas(1e-10);
  CHECK(std::abs(v * cell - r.v_area) < 2e-3);
  CHECK(std::abs(z * cell - r.zero_area) < 2e-3);
  CHECK(std::abs(nv * cell - r.nv_area) < 2e-3);
}

TEST_CASE("classifier against the exact gap on an E0 parameter grid") {
  int v_checked = 0, nv_checked = 0, bad = 0;
  constexpr int kA = 300, kC = 40;
  for (int i = 0; i <= kA; ++i)
    for (int j = 0; j <= kA - i; ++j) {
      const double a = double(i) / kA, b = double(j) / kA;
      const double c_max = std::min(1.0, 2.0 * std::sqrt(a * b));
      for (int k = 0; k <= kC; ++k) {
        const double c = c_max * k / kC;
        const PlanePoint p{c, oracle::e0_linear_entropy(a, b, c)};
        const PlanePoint q = snap_to_physical(p);
        if (near_entropic_boundary(q, 1e-9)) continue;
        const double gap = oracle::e0_gap_a(a, b, c);
        switch (classify_entropic(q)) {
          case RegionLabel::V_E:
            ++v_checked;
            if (!(gap > 1e-12)) ++bad;
            break;
          case RegionLabel::NV_E:
            ++nv_checked;
            if (gap > 1e-12) ++bad;
            break;
          case RegionLabel::Zero_E: break;
          case RegionLabel::NonPhysical: ++bad; break;
        }
      }
    }
  CHECK(bad == 0);
  CHECK(v_checked > 1000);
  CHECK(nv_checked > 1000);
}

TEST_CASE("Zero_E points host both verdicts on their level set") {
  int checked = 0;
  for (int k = 1; k <= 34; ++k) {
    const double c = 0.02 * k + 0.003;
    if (c >= kR) break;
    const double lo = s_l_minus(c);
    const double hi = c < 0.5 ? 2.0 / 3.0 : (c < 2.0 / 3.0 ? s_l1(c) : s_l_plus(c));
    for (double frac : {0.15, 0.5, 0.85}) {
      const double s = lo + frac * (hi - lo);
      REQUIRE(classify_entropic({c, s}) == RegionLabel::Zero_E);
      bool pos = false, neg = false;
      for (const E0Params& p : e0_level_set({c, s}, 8192)) {
        CHECK(std::abs(oracle::e0_linear_entropy(p.a, p.b, p.c) - s) < 1e-9);
        const double gap = oracle::e0_gap_a(p.a, p.b, p.c);
        pos = pos || gap > 1e-12;
        neg = neg || gap <= 0.0;
      }
      CHECK_MESSAGE(pos, "c=" << c << " s=" << s);
      CHECK_MESSAGE(neg, "c=" << c << " s=" << s);
      ++checked;
    }
  }
  CHECK(checked > 60);
}

TEST_CASE("inequality boundary meets the X+ hyperbola at S_L-/+") {
  for (int k = 1; k < 100; ++k) {
    const double c = kR * k / 100.0;
    // a = 1 - a - b on ab = c^2/4: 2a^2 - a + c^2/4 = 0.
    const double r = std::sqrt(1.0 - 2.0 * c * c);
    const double a_lo = (1.0 - r) / 4.0, a_hi = (1.0 + r) / 4.0;
    const double s1 = oracle::e0_linear_entropy(a_lo, 1.0 - 2.0 * a_lo, c);
    const double s2 = oracle::e0_linear_entropy(a_hi, 1.0 - 2.0 * a_hi, c);
    CHECK(std::abs(std::min(s1, s2) - s_l_minus(c)) < 1e-12);
    CHECK(std::abs(std::max(s1, s2) - s_l_plus(c)) < 1e-12);
    CHECK(std::abs(oracle::e0_gap_a(a_lo, 1.0 - 2.0 * a_lo, c)) < 1e-14);

    // Along the physical hyperbola branch the sign of the inequality changes
    // at most twice.
    const double x_max = std::sqrt(0.5 - c * c / 2.0);
    int changes = 0;
    double prev = 0.0;
    constexpr int kX = 20'000;
    for (int i = 0; i <= kX; ++i) {
      const double x = -x_max + 2.0 * x_max * i / kX;
      const double y = -std::sqrt(2.0) / 3.0 + std::sqrt(x * x + c * c / 2.0);
      const double v = eineq_lhs({x, y}, c);
      if (i > 0 && (v > 0) != (prev > 0)) ++changes;
      prev = v;
    }
    CHECK(changes <= 2);
    CHECK(changes >= 1);
  }
}

TEST_CASE("CHSH classifier") {
  CHECK(classify_chsh({0.75, 0.3}) == RegionLabel::V_E);
  CHECK(classify_chsh({0.5, 0.9}) == RegionLabel::NonPhysical);
  CHECK(classify_chsh({0.05, 0.85}) == RegionLabel::NV_E);
  // a + b = 1 is reachable at s = 0.5, where |T_zz| = 1.
  CHECK(classify_chsh({0.05, 0.5}) == RegionLabel::Zero_E);
  for (int k = 1; k <= 100; ++k) {
    const double c = 2.0 / 3.0 + (kR - 2.0 / 3.0) * k / 100.0;
    CHECK(classify_entropic({c, s_l1(c)}) == RegionLabel::V_E);
    CHECK(classify_chsh({c, s_l1(c)}) != RegionLabel::V_E);
  }
}

TEST_CASE("CHSH range matches explicit level-set states") {
  std::mt19937_64 g(66);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 200) {
    const double c = 0.02 + 0.97 * u(g);
    const double s = u(g) * frontier_mems(c);
    ChshRange range;
    try {
      range = chsh_range_on_level_set({c, s});
    } catch (const NoLevelSet&) {
      CHECK(e0_level_set({c, s}, 4096).empty());
      continue;
    }
    const auto states = e0_level_set({c, s}, 20'000, 0.3);
    if (states.size() < 20) continue;
    double lo = INFINITY, hi = 0.0;
    for (const auto& p : states) {
      const double v = oracle::chsh(e0_state(p));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(lo >= range.min - 1e-7);
    CHECK(hi <= range.max + 1e-7);
    CHECK(lo - range.min < 2e-3);
    CHECK(range.max - hi < 2e-3);
    ++checked;
  }
}

TEST_CASE("CHSH areas") {
  const AreaReport r = chsh_region_areas(400);
  CHECK(std::abs(r.v_percent + r.zero_percent + r.nv_percent - 100.0) < 1e-9);
  CHECK(std::abs(r.v_percent - 26.577) < 0.3);
  CHECK(std::abs(r.zero_percent - 54.788) < 0.3);
  CHECK(std::abs(r.nv_percent - 18.635) < 0.3);
  CHECK(r.tolerance < 1e-3);
  // The entropic criterion detects a larger region.
  CHECK(entropic_region_areas(1e-10).v_area > r.v_area);

  const auto slices = chsh_slices(8, 256);
  REQUIRE(slices.size() == 8);
  for (const auto& slice : slices) {
    CHECK(slice.runs.front().s_lo == 0.0);
    CHECK(slice.runs.back().s_hi == slice.frontier);
    for (std::size_t k = 1; k < slice.runs.size(); ++k)
      CHECK(slice.runs[k].s_lo == slice.runs[k - 1].s_hi);
  }
}
