#include "entroplane/measures.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace entroplane {

namespace {

void require_order(double alpha, bool allow_one) {
  if (!std::isfinite(alpha) || alpha < 0.0)
    throw DomainError(fmt::format("entropy order {} must be non-negative", alpha));
  if (!allow_one && (alpha == 0.0 || alpha == 1.0))
    throw DomainError(fmt::format("entropy order {} must be positive and != 1", alpha));
}

// Sign of sigma_y x sigma_y on its anti-diagonal: (Y x Y)(i, 3 - i).
constexpr std::array<double, 4> kSpinFlipSign{-1.0, 1.0, 1.0, -1.0};

CMatrix4 spin_flip(const CMatrix4& rho) {
  CMatrix4 r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      r(i, j) = kSpinFlipSign[i] * kSpinFlipSign[j] * std::conj(rho(3 - i, 3 - j));
  return r;
}

}  // namespace

template <std::size_t N>
double trace_power(const State<N>& rho, double alpha) {
  double sum = 0.0;
  for (double lambda : rho.spectrum()) {
    if (lambda <= 0.0) continue;
    sum += std::pow(lambda, alpha);
  }
  return sum;
}

template <std::size_t N>
double von_neumann(const State<N>& rho) {
  double h = 0.0;
  for (double lambda : rho.spectrum())
    if (lambda > 0.0) h -= lambda * std::log2(lambda);
  return std::max(h, 0.0);
}

template <std::size_t N>
EntropyValue renyi(const State<N>& rho, double alpha) {
  require_order(alpha, true);
  if (alpha == 1.0) return {alpha, von_neumann(rho)};
  if (alpha == 0.0) {
    int rank = 0;
    for (double lambda : rho.spectrum())
      if (lambda > kRankThreshold) ++rank;
    return {alpha, std::log2(static_cast<double>(rank))};
  }
  if (alpha == 2.0) return {alpha, -std::log2(purity(rho))};
  return {alpha, std::log2(trace_power(rho, alpha)) / (1.0 - alpha)};
}

template <std::size_t N>
double tsallis(const State<N>& rho, double alpha) {
  require_order(alpha, false);
  const double tr = alpha == 2.0 ? purity(rho) : trace_power(rho, alpha);
  return (1.0 - tr) / (alpha - 1.0);
}

double conditional_renyi(const DensityMatrix& rho, double alpha) {
  require_order(alpha, false);
  const ReducedDensity rho_a = partial_trace_B_out(rho);
  return renyi(rho, alpha).value - renyi(rho_a, alpha).value;
}

double conditional_tsallis(const DensityMatrix& rho, double alpha) {
  require_order(alpha, false);
  const ReducedDensity rho_a = partial_trace_B_out(rho);
  const double tr = alpha == 2.0 ? purity(rho) : trace_power(rho, alpha);
  const double tr_a = alpha == 2.0 ? purity(rho_a) : trace_power(rho_a, alpha);
  return (tr_a - tr) / ((alpha - 1.0) * tr_a);
}

ViolationReport entropic_violation(const DensityMatrix& rho) {
  const double p = purity(rho);
  ViolationReport r;
  r.gap_a = p - purity(partial_trace_B_out(rho));
  r.gap_b = p - purity(partial_trace_A_out(rho));
  r.violates_a = r.gap_a > kViolationThreshold;
  r.violates_b = r.gap_b > kViolationThreshold;
  r.violates_any = r.violates_a || r.violates_b;
  return r;
}

ConcurrenceSpectrum concurrence(const DensityMatrix& rho) {
  const CMatrix4 root = matrix_sqrt_psd(rho.matrix());
  CMatrix4 r = root * spin_flip(rho.matrix()) * root;
  r = (r + r.adjoint()) * Complex{0.5};
  const auto eig = hermitian_eigen(r);

  ConcurrenceSpectrum out;
  double sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    out.lambdas[k] = std::sqrt(std::max(eig.eigenvalues[k], 0.0));
    sum += out.lambdas[k];
  }
  out.concurrence = std::clamp(2.0 * out.lambdas[0] - sum, 0.0, 1.0);
  return out;
}

double concurrence_x_closed_form(const std::array<double, 4>& diag,
                                 Complex rho14, Complex rho23) {
  double trace = 0.0;
  for (double d : diag) {
    if (!std::isfinite(d) || d < -kPsdClamp)
      throw InvalidState(fmt::format("diagonal entry {} is negative", d));
    trace += d;
  }
  if (std::abs(trace - 1.0) > kTraceTolerance)
    throw InvalidState(fmt::format("diagonal sums to {:.17g}", trace));
  const double outer = std::max(diag[0], 0.0) * std::max(diag[3], 0.0);
  const double inner = std::max(diag[1], 0.0) * std::max(diag[2], 0.0);
  if (std::norm(rho14) > outer + kPsdClamp)
    throw InvalidState("|rho14|^2 exceeds rho11 rho44");
  if (std::norm(rho23) > inner + kPsdClamp)
    throw InvalidState("|rho23|^2 exceeds rho22 rho33");
  const double c_inner = std::abs(rho23) - std::sqrt(outer);
  const double c_outer = std::abs(rho14) - std::sqrt(inner);
  return 2.0 * std::max({0.0, c_inner, c_outer});
}

std::array<std::array<double, 3>, 3> correlation_tensor(const DensityMatrix& rho) {
  // Tr(rho (s_i x s_j)) = sum_{ab} rho(a, b) (s_i x s_j)(b, a).
  using Pauli = std::array<std::array<Complex, 2>, 2>;
  constexpr Complex I{0.0, 1.0};
  const std::array<Pauli, 3> sigma{
      Pauli{{{0.0, 1.0}, {1.0, 0.0}}},
      Pauli{{{0.0, -I}, {I, 0.0}}},
      Pauli{{{1.0, 0.0}, {0.0, -1.0}}},
  };
  std::array<std::array<double, 3>, 3> t{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      Complex acc = 0.0;
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
          const Complex op = sigma[i][b / 2][a / 2] * sigma[j][b % 2][a % 2];
          if (op != Complex{}) acc += rho(a, b) * op;
        }
      t[i][j] = acc.real();
    }
  }
  return t;
}

double chsh_max(const DensityMatrix& rho) {
  const auto t = correlation_tensor(rho);
  CMatrix<3> m;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += t[k][i] * t[k][j];
      m(i, j) = s;
    }
  const auto eig = hermitian_eigen(m);
  return 2.0 * std::sqrt(std::max(eig.eigenvalues[0] + eig.eigenvalues[1], 0.0));
}

template double trace_power(const State<2>&, double);
template double trace_power(const State<4>&, double);
template double von_neumann(const State<2>&);
template double von_neumann(const State<4>&);
template EntropyValue renyi(const State<2>&, double);
template EntropyValue renyi(const State<4>&, double);
template double tsallis(const State<2>&, double);
template double tsallis(const State<4>&, double);

}  // namespace entroplane
