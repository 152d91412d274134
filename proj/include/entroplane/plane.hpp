#pragma once

// Geometry of the concurrence / linear-entropy plane: boundary curves, the
// per-point region classifiers for the quadratic entropic inequality and for
// CHSH, and region areas.

#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entroplane/families.hpp"

namespace entroplane {

inline constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;
inline constexpr double kTwoThirds = 2.0 / 3.0;

/// (concurrence, normalised linear entropy).
struct PlanePoint {
  double c = 0.0;
  double s = 0.0;
};

/// Rotated E0 coordinates x = (a - b)/sqrt2, y = (a + b - 2/3)/sqrt2.
struct XYPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Semi-axes of the E0 level set S_L = s at fixed c, an origin-centred
/// ellipse x^2/A^2 + y^2/B^2 = 1 with A = sqrt3 B.
struct EllipseSpec {
  double A = 0.0;
  double B = 0.0;
};

/// V_E: every state with this (C, S_L) is detected. NV_E: none is.
/// Zero_E: both kinds exist. The CHSH classifier reuses the same labels.
enum class RegionLabel { V_E, Zero_E, NV_E, NonPhysical };

std::string_view to_string(RegionLabel label);
RegionLabel region_from_string(std::string_view name);

/// Upper MEMS branch (8/3) c (1 - c).
double s_l1(double c);
/// Lower MEMS branch 8/9 - (2/3) c^2.
double s_l2(double c);

/// Largest linear entropy at concurrence c: s_l1 on [2/3, 1], s_l2 on
/// (0, 2/3). DomainError outside (0, 1].
double frontier_mems(double c);

/// (1/3)(1 + c^2 -/+ sqrt(1 - 2c^2)) for c in [0, 1/sqrt2].
double s_l_minus(double c);
double s_l_plus(double c);

XYPoint to_xy(double a, double b);
/// Inverse of to_xy.
std::pair<double, double> from_xy(const XYPoint& p);

/// Admissible E0 region at concurrence c: ab >= c^2/4 and a + b <= 1.
bool in_x_plus(const XYPoint& p, double c);

/// Linear entropy of the E0 state at (x, y, c):
/// -(8/3)(x^2/2 + 3y^2/2 + c^2/4 - 1/3).
double linear_entropy_xy(const XYPoint& p, double c);

/// Throws NoLevelSet when 1/9 - c^2/12 - s/8 < 0.
EllipseSpec ellipse_axes(double s, double c);

/// Half the entropic gap Tr(rho^2) - Tr(rho_A^2) of the E0 state at (x, y, c):
///   y^2 - xy + (x + y)/(3 sqrt2) + c^2/4 - 1/9.
/// The state violates the quadratic inequality iff this is positive.
double eineq_lhs(const XYPoint& p, double c);

/// Exact region membership for the entropic criterion, with strict and
/// non-strict inequalities taken verbatim from the region definitions.
/// c = 0 is NV_E for every s in [0, 1].
RegionLabel classify_entropic(const PlanePoint& point);

/// Clamps a computed (C, S_L) pair onto the physical set when it overshoots
/// the MEMS frontier or [0, 1] by at most `slack`, absorbing rounding in
/// values obtained from density matrices.
PlanePoint snap_to_physical(const PlanePoint& point, double slack = 1e-9);

/// True when the entropic label is not constant on the stencil
/// {(c, s), (c +/- band, s), (c, s +/- band)}.
bool near_entropic_boundary(const PlanePoint& point, double band);

/// Lengths of the s-intervals of each entropic region at fixed c.
struct SliceLengths {
  double v = 0.0;
  double zero = 0.0;
  double nv = 0.0;
  double total = 0.0;
};

/// The boundary curves used by the area computation. Replaceable so that
/// acceptance checks can be exercised against a corrupted model.
struct BoundaryCurves {
  std::function<double(double)> s_l1 = entroplane::s_l1;
  std::function<double(double)> s_l2 = entroplane::s_l2;
  std::function<double(double)> s_l_minus = entroplane::s_l_minus;
  std::function<double(double)> s_l_plus = entroplane::s_l_plus;
};

/// Closed-form slice lengths for c in [0, 1] (c = 0 by continuity).
SliceLengths entropic_slice(double c, const BoundaryCurves& curves = {});

struct AreaReport {
  std::string criterion;  // "entropic" or "chsh"
  double total_area = 0.0;
  double v_area = 0.0;
  double zero_area = 0.0;
  double nv_area = 0.0;
  double v_percent = 0.0;
  double zero_percent = 0.0;
  double nv_percent = 0.0;
  std::string method;
  /// Absolute area tolerance of the method.
  double tolerance = 0.0;
};

/// Region areas by adaptive quadrature in c of the closed-form slice lengths,
/// breakpoints at 1/2, 2/3 and 1/sqrt2.
AreaReport entropic_region_areas(double tol, const BoundaryCurves& curves = {});

/// CHSH region of (c, s) over the E0 level set. For E0 states T^T T has
/// spectrum {c^2, c^2, (1/3 + 2 sqrt2 y)^2}, so the CHSH value only depends
/// on c and y; the classifier extremises it over the attainable y-set of the
/// ellipse intersected with X+. Throws NoLevelSet when that set is empty.
RegionLabel classify_chsh(const PlanePoint& point, double tol = 1e-12);

/// Range of the CHSH value over the E0 level set at (c, s).
struct ChshRange {
  double min = 0.0;
  double max = 0.0;
};
ChshRange chsh_range_on_level_set(const PlanePoint& point);

/// Maximal run of one label along s at fixed c.
struct LabelRun {
  double s_lo = 0.0;
  double s_hi = 0.0;
  RegionLabel label = RegionLabel::NonPhysical;
};

struct ChshSlice {
  double c = 0.0;
  double frontier = 0.0;
  std::vector<LabelRun> runs;
};

/// CHSH labels along s in [0, frontier(c)], located by sampling `samples`
/// midpoints and bisecting each label change.
ChshSlice chsh_slice(double c, int samples = 1024);

/// Midpoint scan over `resolution` cells in c. Chunks of the c-grid are
/// processed in parallel and reduced in fixed order.
std::vector<ChshSlice> chsh_slices(int resolution, int samples = 1024);
AreaReport chsh_region_areas(int resolution, int samples = 1024);

/// Points of the E0 level set (c, s) inside X+, sampled uniformly in the
/// ellipse angle; returned as E0 parameters with the given phase.
std::vector<E0Params> e0_level_set(const PlanePoint& point, int samples,
                                   double theta = 0.0);

}  // namespace entroplane
