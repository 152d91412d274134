#include "entroplane/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <fmt/format.h>

namespace entroplane {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Slack for parameter conditions evaluated in floating point.
constexpr double kParamSlack = 1e-14;

void check(bool ok, const char* what, double value) {
  if (!ok) throw InvalidParams(fmt::format("{} (got {:.17g})", what, value));
}

void check_phase(double phase, const char* name) {
  check(std::isfinite(phase) && phase >= 0.0 && phase <= kTwoPi,
        fmt::format("{} must lie in [0, 2pi]", name).c_str(), phase);
}

Complex polar_half(double magnitude, double phase) {
  return std::polar(0.5 * magnitude, phase);
}

}  // namespace

void validate(const E0Params& p) {
  check(std::isfinite(p.a) && p.a >= 0.0, "a must be >= 0", p.a);
  check(std::isfinite(p.b) && p.b >= 0.0, "b must be >= 0", p.b);
  check(p.a + p.b <= 1.0 + kParamSlack, "a + b must be <= 1", p.a + p.b);
  check(std::isfinite(p.c) && p.c >= 0.0 && p.c <= 1.0, "c must lie in [0, 1]", p.c);
  check(p.a * p.b - p.c * p.c / 4.0 >= -kParamSlack, "ab must be >= c^2/4",
        p.a * p.b - p.c * p.c / 4.0);
  check_phase(p.theta, "theta");
}

void validate(const E1Params& p) {
  check(std::isfinite(p.a) && p.a >= 0.0, "a must be >= 0", p.a);
  check(std::isfinite(p.b) && p.b >= 0.0, "b must be >= 0", p.b);
  check(std::isfinite(p.f) && p.f >= 0.0, "f must be >= 0", p.f);
  const double g = 1.0 - p.a - p.b - p.f;
  check(g >= -kParamSlack, "a + b + f must be <= 1", p.a + p.b + p.f);
  check(std::isfinite(p.c) && p.c >= 0.0 && p.c <= 1.0, "c must lie in [0, 1]", p.c);
  check(std::isfinite(p.d) && p.d >= 0.0 && p.d <= 1.0, "d must lie in [0, 1]", p.d);
  check(p.a * p.b - p.c * p.c / 4.0 >= -kParamSlack, "ab must be >= c^2/4",
        p.a * p.b - p.c * p.c / 4.0);
  check(p.f * std::max(g, 0.0) - p.d * p.d / 4.0 >= -kParamSlack,
        "f(1 - a - b - f) must be >= d^2/4", p.f * g - p.d * p.d / 4.0);
  check_phase(p.theta, "theta");
  check_phase(p.phi, "phi");
}

DensityMatrix e0_state(const E0Params& p) {
  validate(p);
  CMatrix4 m;
  m(1, 1) = p.a;
  m(2, 2) = p.b;
  m(3, 3) = 1.0 - p.a - p.b;
  m(1, 2) = polar_half(p.c, p.theta);
  m(2, 1) = std::conj(m(1, 2));
  return make_density(m);
}

DensityMatrix e1_state(const E1Params& p) {
  validate(p);
  CMatrix4 m;
  m(0, 0) = p.f;
  m(1, 1) = p.a;
  m(2, 2) = p.b;
  m(3, 3) = 1.0 - p.a - p.b - p.f;
  m(1, 2) = polar_half(p.c, p.theta);
  m(2, 1) = std::conj(m(1, 2));
  m(0, 3) = polar_half(p.d, p.phi);
  m(3, 0) = std::conj(m(0, 3));
  return make_density(m);
}

DensityMatrix mems1(double c, double theta) {
  if (!(c >= 2.0 / 3.0 && c <= 1.0))
    throw DomainError(fmt::format("MEMS I needs c in [2/3, 1], got {:.17g}", c));
  return e0_state({c / 2.0, c / 2.0, c, theta});
}

DensityMatrix mems2(double c, double theta) {
  if (!(c > 0.0 && c <= 2.0 / 3.0))
    throw DomainError(fmt::format("MEMS II needs c in (0, 2/3], got {:.17g}", c));
  return e0_state({1.0 / 3.0, 1.0 / 3.0, c, theta});
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_(stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::index(std::uint64_t n) {
  __extension__ using u128 = unsigned __int128;
  const u128 product = static_cast<u128>(engine_()) * static_cast<u128>(n);
  return static_cast<std::uint64_t>(product >> 64);
}

double RngStream::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

E0Params sample_e0(RngStream& rng) {
  double a = rng.uniform();
  double b = rng.uniform();
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  const double c_max = std::min(1.0, 2.0 * std::sqrt(a * b));
  const double c = c_max * rng.uniform();
  return {a, b, c, kTwoPi * rng.uniform()};
}

E1Params sample_e1(RngStream& rng) {
  std::array<double, 3> cuts{rng.uniform(), rng.uniform(), rng.uniform()};
  std::sort(cuts.begin(), cuts.end());
  const double a = cuts[0];
  const double b = cuts[1] - cuts[0];
  const double f = cuts[2] - cuts[1];
  const double g = 1.0 - a - b - f;
  const double c = std::min(1.0, 2.0 * std::sqrt(a * b)) * rng.uniform();
  const double d = std::min(1.0, 2.0 * std::sqrt(f * std::max(g, 0.0))) * rng.uniform();
  const double theta = kTwoPi * rng.uniform();
  const double phi = kTwoPi * rng.uniform();
  return {a, b, f, c, d, theta, phi};
}

namespace {

std::array<Complex, 2> random_qubit(RngStream& rng) {
  std::array<Complex, 2> v;
  double norm = 0.0;
  do {
    for (auto& z : v) z = Complex{rng.normal(), rng.normal()};
    norm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  } while (norm == 0.0);
  for (auto& z : v) z /= norm;
  return v;
}

}  // namespace

DensityMatrix sample_separable(RngStream& rng) {
  const std::size_t k = 1 + rng.index(8);
  std::vector<double> weights(k);
  double total = 0.0;
  for (double& w : weights) {
    w = -std::log(1.0 - rng.uniform());
    total += w;
  }
  if (total == 0.0) {
    std::fill(weights.begin(), weights.end(), 1.0);
    total = static_cast<double>(k);
  }
  CMatrix4 m;
  for (std::size_t n = 0; n < k; ++n) {
    const auto qa = random_qubit(rng);
    const auto qb = random_qubit(rng);
    const std::array<Complex, 4> psi{qa[0] * qb[0], qa[0] * qb[1], qa[1] * qb[0],
                                     qa[1] * qb[1]};
    m += CMatrix4::outer(psi, psi) * Complex{weights[n] / total};
  }
  return make_density((m + m.adjoint()) * Complex{0.5});
}

DensityMatrix sample_full_rank(RngStream& rng) {
  CMatrix4 g;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) g(i, j) = Complex{rng.normal(), rng.normal()};
  CMatrix4 m = g * g.adjoint();
  m = (m + m.adjoint()) * Complex{0.5 / m.trace().real()};
  return make_density(m);
}

}  // namespace entroplane
