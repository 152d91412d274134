#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "entroplane/qstate.hpp"

namespace entroplane {

/// Parameters of the single-coherence X-state family
///   diag(0, a, b, 1 - a - b) with (c/2) e^{+i theta} at (1, 2).
/// Valid when a, b >= 0, a + b <= 1, c in [0, 1], ab >= c^2/4 and
/// theta in [0, 2 pi].
struct E0Params {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double theta = 0.0;
};

/// Two-coherence extension: f at (0, 0), 1 - a - b - f at (3, 3) and
/// (d/2) e^{+i phi} at (0, 3). Requires f (1 - a - b - f) >= d^2/4 on top
/// of the E0 conditions.
struct E1Params {
  double a = 0.0;
  double b = 0.0;
  double f = 0.0;
  double c = 0.0;
  double d = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

/// Throws InvalidParams naming the first violated condition.
void validate(const E0Params& p);
void validate(const E1Params& p);

DensityMatrix e0_state(const E0Params& p);
DensityMatrix e1_state(const E1Params& p);

/// MEMS I: a = b = c/2, defined for c in [2/3, 1].
DensityMatrix mems1(double c, double theta = 0.0);
/// MEMS II: a = b = 1/3, defined for c in (0, 2/3].
DensityMatrix mems2(double c, double theta = 0.0);

/// Deterministic random stream. The engine is std::mt19937_64 seeded through
/// std::seed_seq with the 32-bit halves of (seed, stream_index); variates
/// are derived from raw 64-bit outputs without std distributions, so a
/// given (seed, stream_index) yields the same sequence on every conforming
/// standard library.
class RngStream {
 public:
  static constexpr std::string_view kAlgorithm =
      "mt19937_64/seed_seq(seed_lo,seed_hi,stream_lo,stream_hi)";

  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n).
  std::uint64_t index(std::uint64_t n);
  /// Standard normal via Box-Muller (one variate per call).
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// (a, b) uniform on the triangle a + b <= 1, c uniform on
/// [0, min(1, 2 sqrt(ab))], theta uniform on [0, 2 pi).
E0Params sample_e0(RngStream& rng);
/// (a, b, f, 1 - a - b - f) uniform on the 3-simplex, c uniform on
/// [0, min(1, 2 sqrt(ab))], d uniform on [0, min(1, 2 sqrt(f g))], phases
/// uniform.
E1Params sample_e1(RngStream& rng);
/// Mixture of k in {1..8} Haar-random product pure states with weights
/// uniform on the simplex.
DensityMatrix sample_separable(RngStream& rng);
/// G G^dagger / Tr(G G^dagger) for a complex Ginibre 4x4 matrix G.
DensityMatrix sample_full_rank(RngStream& rng);

}  // namespace entroplane
