#include "entroplane/plane.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "entroplane/parallel.hpp"

namespace entroplane {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
// y <= 1/(3 sqrt2) encodes a + b <= 1.
constexpr double kYMax = 1.0 / (3.0 * kSqrt2);
// Level-set radicand 1/9 - c^2/12 - s/8 may undershoot zero by rounding.
constexpr double kRadicandSlack = 1e-15;
// Widening of the X+ interval in y, so that a level set touching the
// hyperbola tangentially (the MEMS I frontier) keeps its single point.
constexpr double kXPlusSlack = 1e-9;

double level_set_radicand(double s, double c) {
  return 1.0 / 9.0 - c * c / 12.0 - s / 8.0;
}

bool physical_range(const PlanePoint& p) {
  return std::isfinite(p.c) && std::isfinite(p.s) && p.c >= 0.0 && p.c <= 1.0 &&
         p.s >= 0.0 && p.s <= 1.0;
}

double chsh_value(double c, double tz) {
  return 2.0 * std::sqrt(c * c + std::max(c * c, tz * tz));
}

}  // namespace

std::string_view to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::V_E: return "V_E";
    case RegionLabel::Zero_E: return "Zero_E";
    case RegionLabel::NV_E: return "NV_E";
    case RegionLabel::NonPhysical: return "NonPhysical";
  }
  return "NonPhysical";
}

RegionLabel region_from_string(std::string_view name) {
  if (name == "V_E") return RegionLabel::V_E;
  if (name == "Zero_E") return RegionLabel::Zero_E;
  if (name == "NV_E") return RegionLabel::NV_E;
  if (name == "NonPhysical") return RegionLabel::NonPhysical;
  throw DomainError(fmt::format("unknown region label '{}'", name));
}

double s_l1(double c) { return 8.0 / 3.0 * c * (1.0 - c); }

double s_l2(double c) { return 8.0 / 9.0 - 2.0 / 3.0 * c * c; }

double frontier_mems(double c) {
  if (!(c > 0.0 && c <= 1.0))
    throw DomainError(fmt::format("frontier needs c in (0, 1], got {:.17g}", c));
  return c >= kTwoThirds ? s_l1(c) : s_l2(c);
}

namespace {

double curve_radical(double c) {
  if (!(c >= 0.0 && c <= kInvSqrt2))
    throw DomainError(fmt::format("S_L+/- need c in [0, 1/sqrt2], got {:.17g}", c));
  return std::sqrt(std::max(0.0, 1.0 - 2.0 * c * c));
}

}  // namespace

double s_l_minus(double c) {
  const double r = curve_radical(c);
  return (1.0 + c * c - r) / 3.0;
}

double s_l_plus(double c) {
  const double r = curve_radical(c);
  return (1.0 + c * c + r) / 3.0;
}

XYPoint to_xy(double a, double b) {
  return {(a - b) / kSqrt2, (a + b - kTwoThirds) / kSqrt2};
}

std::pair<double, double> from_xy(const XYPoint& p) {
  return {1.0 / 3.0 + (p.x + p.y) / kSqrt2, 1.0 / 3.0 + (p.y - p.x) / kSqrt2};
}

bool in_x_plus(const XYPoint& p, double c) {
  const double hyperbola =
      p.y * p.y + 2.0 * kSqrt2 / 3.0 * p.y - p.x * p.x - c * c / 2.0 + 2.0 / 9.0;
  return hyperbola >= 0.0 && p.y <= kYMax;
}

double linear_entropy_xy(const XYPoint& p, double c) {
  return -8.0 / 3.0 *
         (p.x * p.x / 2.0 + 1.5 * p.y * p.y + c * c / 4.0 - 1.0 / 3.0);
}

EllipseSpec ellipse_axes(double s, double c) {
  const double k = level_set_radicand(s, c);
  if (!(k >= -kRadicandSlack)) {
    throw NoLevelSet(fmt::format(
        "no E0 state has c = {:.17g}, s = {:.17g} (radicand {:.3e})", c, s, k));
  }
  const double kk = std::max(k, 0.0);
  return {std::sqrt(6.0 * kk), std::sqrt(2.0 * kk)};
}

double eineq_lhs(const XYPoint& p, double c) {
  return p.y * p.y - p.x * p.y + (p.x + p.y) / (3.0 * kSqrt2) + c * c / 4.0 -
         1.0 / 9.0;
}

RegionLabel classify_entropic(const PlanePoint& point) {
  if (!physical_range(point)) return RegionLabel::NonPhysical;
  const double c = point.c;
  const double s = point.s;
  if (c == 0.0) return RegionLabel::NV_E;
  if (s > frontier_mems(c)) return RegionLabel::NonPhysical;

  if (c < 0.5 && s > kTwoThirds && s <= s_l2(c)) return RegionLabel::NV_E;
  if (c >= 0.5 && c < kTwoThirds && s >= s_l1(c) && s <= s_l2(c))
    return RegionLabel::NV_E;

  if (c < kInvSqrt2 && s < s_l_minus(c)) return RegionLabel::V_E;
  if (c >= kTwoThirds && c <= kInvSqrt2 && s > s_l_plus(c) && s <= s_l1(c))
    return RegionLabel::V_E;
  if (c > kInvSqrt2 && s <= s_l1(c)) return RegionLabel::V_E;

  return RegionLabel::Zero_E;
}

PlanePoint snap_to_physical(const PlanePoint& point, double slack) {
  PlanePoint p = point;
  if (p.c < 0.0 && p.c >= -slack) p.c = 0.0;
  if (p.c > 1.0 && p.c <= 1.0 + slack) p.c = 1.0;
  if (p.s < 0.0 && p.s >= -slack) p.s = 0.0;
  if (p.c > 0.0 && p.c <= 1.0) {
    const double f = frontier_mems(p.c);
    if (p.s > f && p.s <= f + slack) p.s = f;
  } else if (p.c == 0.0 && p.s > 1.0 && p.s <= 1.0 + slack) {
    p.s = 1.0;
  }
  return p;
}

bool near_entropic_boundary(const PlanePoint& point, double band) {
  const RegionLabel centre = classify_entropic(point);
  if (point.c == 0.0) {
    // The c = 0 column is labelled by convention; only s-neighbours count.
    return classify_entropic({0.0, point.s - band}) != centre ||
           classify_entropic({0.0, point.s + band}) != centre;
  }
  const std::array<PlanePoint, 4> stencil{
      PlanePoint{point.c - band, point.s}, PlanePoint{point.c + band, point.s},
      PlanePoint{point.c, point.s - band}, PlanePoint{point.c, point.s + band}};
  for (const auto& q : stencil)
    if (classify_entropic(q) != centre) return true;
  return false;
}

SliceLengths entropic_slice(double c, const BoundaryCurves& curves) {
  if (!(c >= 0.0 && c <= 1.0))
    throw DomainError(fmt::format("slice needs c in [0, 1], got {:.17g}", c));
  SliceLengths out;
  out.total = c >= kTwoThirds ? curves.s_l1(c) : curves.s_l2(c);
  if (c < 0.5) {
    out.nv = curves.s_l2(c) - kTwoThirds;
  } else if (c < kTwoThirds) {
    out.nv = curves.s_l2(c) - curves.s_l1(c);
  }
  if (c < kInvSqrt2) out.v += curves.s_l_minus(c);
  if (c >= kTwoThirds && c <= kInvSqrt2) out.v += curves.s_l1(c) - curves.s_l_plus(c);
  if (c > kInvSqrt2) out.v += curves.s_l1(c);
  out.zero = out.total - out.v - out.nv;
  return out;
}

AreaReport entropic_region_areas(double tol, const BoundaryCurves& curves) {
  if (!(tol > 0.0)) throw DomainError("area tolerance must be positive");
  const std::array<double, 3> breaks{0.5, kTwoThirds, kInvSqrt2};
  auto integrate = [&](double SliceLengths::*field) {
    return integrate_adaptive(
        [&](double c) { return entropic_slice(c, curves).*field; }, 0.0, 1.0,
        std::span<const double>(breaks), tol);
  };
  AreaReport r;
  r.criterion = "entropic";
  r.total_area = integrate(&SliceLengths::total);
  r.v_area = integrate(&SliceLengths::v);
  r.zero_area = integrate(&SliceLengths::zero);
  r.nv_area = integrate(&SliceLengths::nv);
  r.v_percent = 100.0 * r.v_area / r.total_area;
  r.zero_percent = 100.0 * r.zero_area / r.total_area;
  r.nv_percent = 100.0 * r.nv_area / r.total_area;
  r.method = "adaptive-simpson(breakpoints=1/2,2/3,1/sqrt2)";
  r.tolerance = tol;
  return r;
}

ChshRange chsh_range_on_level_set(const PlanePoint& point) {
  const double c = point.c;
  const double s = point.s;
  const EllipseSpec axes = ellipse_axes(s, c);
  const double a2 = axes.A * axes.A;

  const double y_lo = -axes.B;
  const double y_hi = std::min(axes.B, kYMax);
  if (y_lo > y_hi) throw NoLevelSet("level set lies above a + b = 1");

  // On the ellipse x^2 = A^2 - 3 y^2, so the hyperbola condition becomes
  // 4 y^2 + (2 sqrt2/3) y - A^2 - c^2/2 + 2/9 >= 0.
  const double qb = 2.0 * kSqrt2 / 3.0;
  const double qc = -a2 - c * c / 2.0 + 2.0 / 9.0;
  const double disc = qb * qb - 16.0 * qc;

  std::array<std::pair<double, double>, 2> pieces{};
  std::size_t count = 0;
  if (disc <= 0.0) {
    pieces[count++] = {y_lo, y_hi};
  } else {
    const double root = std::sqrt(disc);
    const double r_lo = (-qb - root) / 8.0 + kXPlusSlack;
    const double r_hi = (-qb + root) / 8.0 - kXPlusSlack;
    if (y_lo <= std::min(y_hi, r_lo)) pieces[count++] = {y_lo, std::min(y_hi, r_lo)};
    if (std::max(y_lo, r_hi) <= y_hi) pieces[count++] = {std::max(y_lo, r_hi), y_hi};
  }
  if (count == 0) {
    throw NoLevelSet(fmt::format(
        "level set c = {:.17g}, s = {:.17g} does not meet X+", c, s));
  }

  // |T_zz| = |1/3 + 2 sqrt2 y| vanishes at y0 = -1/(6 sqrt2).
  const double y0 = -1.0 / (6.0 * kSqrt2);
  auto tz = [](double y) { return std::abs(1.0 / 3.0 + 2.0 * kSqrt2 * y); };
  double tz_min = INFINITY;
  double tz_max = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const auto [lo, hi] = pieces[k];
    const double at_lo = tz(lo);
    const double at_hi = tz(hi);
    tz_min = std::min(tz_min, (lo <= y0 && y0 <= hi) ? 0.0 : std::min(at_lo, at_hi));
    tz_max = std::max({tz_max, at_lo, at_hi});
  }
  return {chsh_value(c, tz_min), chsh_value(c, tz_max)};
}

RegionLabel classify_chsh(const PlanePoint& point, double tol) {
  if (!physical_range(point)) return RegionLabel::NonPhysical;
  if (point.c > 0.0 && point.s > frontier_mems(point.c))
    return RegionLabel::NonPhysical;
  const ChshRange range = chsh_range_on_level_set(point);
  if (range.min > 2.0 + tol) return RegionLabel::V_E;
  if (range.max < 2.0 - tol) return RegionLabel::NV_E;
  return RegionLabel::Zero_E;
}

ChshSlice chsh_slice(double c, int samples) {
  if (samples < 2) throw DomainError("CHSH slice needs at least 2 samples");
  ChshSlice slice;
  slice.c = c;
  slice.frontier = frontier_mems(c);
  const double f = slice.frontier;
  auto label_at = [c](double s) {
    try {
      return classify_chsh({c, s});
    } catch (const NoLevelSet&) {
      return RegionLabel::NonPhysical;
    }
  };

  std::vector<RegionLabel> labels(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j)
    labels[static_cast<std::size_t>(j)] = label_at((j + 0.5) * f / samples);

  double run_start = 0.0;
  for (int j = 0; j + 1 < samples; ++j) {
    const RegionLabel left = labels[static_cast<std::size_t>(j)];
    const RegionLabel right = labels[static_cast<std::size_t>(j) + 1];
    if (left == right) continue;
    double lo = (j + 0.5) * f / samples;
    double hi = (j + 1.5) * f / samples;
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (label_at(mid) == left ? lo : hi) = mid;
    }
    const double edge = 0.5 * (lo + hi);
    slice.runs.push_back({run_start, edge, left});
    run_start = edge;
  }
  slice.runs.push_back({run_start, f, labels.back()});
  return slice;
}

std::vector<ChshSlice> chsh_slices(int resolution, int samples) {
  if (resolution < 1) throw DomainError("CHSH scan resolution must be >= 1");
  const auto n = static_cast<std::size_t>(resolution);
  std::vector<ChshSlice> slices(n);
  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t chunk) {
    const std::size_t end = std::min(n, (chunk + 1) * kChunk);
    for (std::size_t i = chunk * kChunk; i < end; ++i) {
      const double c = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      slices[i] = chsh_slice(c, samples);
    }
  });
  return slices;
}

namespace {

AreaReport integrate_slices(const std::vector<ChshSlice>& slices) {
  AreaReport r;
  r.criterion = "chsh";
  const double dc = 1.0 / static_cast<double>(slices.size());
  for (const auto& slice : slices) {
    r.total_area += slice.frontier * dc;
    for (const auto& run : slice.runs) {
      const double area = (run.s_hi - run.s_lo) * dc;
      switch (run.label) {
        case RegionLabel::V_E: r.v_area += area; break;
        case RegionLabel::Zero_E: r.zero_area += area; break;
        case RegionLabel::NV_E: r.nv_area += area; break;
        case RegionLabel::NonPhysical: break;
      }
    }
  }
  r.v_percent = 100.0 * r.v_area / r.total_area;
  r.zero_percent = 100.0 * r.zero_area / r.total_area;
  r.nv_percent = 100.0 * r.nv_area / r.total_area;
  return r;
}

}  // namespace

AreaReport chsh_region_areas(int resolution, int samples) {
  AreaReport fine = integrate_slices(chsh_slices(resolution, samples));
  if (resolution >= 2) {
    // Error estimate from the scan at half the resolution.
    const AreaReport coarse =
        integrate_slices(chsh_slices(resolution / 2, samples));
    fine.tolerance = std::max({std::abs(fine.v_area - coarse.v_area),
                               std::abs(fine.zero_area - coarse.zero_area),
                               std::abs(fine.nv_area - coarse.nv_area)});
  }
  fine.method = fmt::format("level-set extremisation, midpoint c-scan "
                            "(resolution={}, s-samples={})",
                            resolution, samples);
  return fine;
}

std::vector<E0Params> e0_level_set(const PlanePoint& point, int samples,
                                   double theta) {
  const EllipseSpec axes = ellipse_axes(point.s, point.c);
  std::vector<E0Params> out;
  for (int k = 0; k < samples; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / samples;
    const XYPoint xy{axes.A * std::cos(phi), axes.B * std::sin(phi)};
    if (!in_x_plus(xy, point.c)) continue;
    auto [a, b] = from_xy(xy);
    E0Params p{std::max(a, 0.0), std::max(b, 0.0), point.c, theta};
    try {
      validate(p);
    } catch (const InvalidParams&) {
      continue;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace entroplane
