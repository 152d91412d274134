#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "entroplane/matcore.hpp"

namespace entroplane {

inline constexpr double kTraceTolerance = 1e-12;

/// A validated density matrix on N levels: Hermitian within
/// kHermitianTolerance, unit trace within kTraceTolerance and no eigenvalue
/// below -kPsdClamp. The spectrum found during validation is kept alongside
/// the matrix.
///
/// Two-qubit states use the product basis |00>, |01>, |10>, |11> (indices
/// 0..3); the first tensor factor is qubit A.
template <std::size_t N>
class State {
 public:
  /// Validates `m`, throwing NotHermitian, TraceNotOne or NotPSD.
  static State make(const CMatrix<N>& m);

  const CMatrix<N>& matrix() const noexcept { return mat_; }

  /// Eigenvalues in descending order.
  const std::array<double, N>& spectrum() const noexcept { return spectrum_; }

  const Complex& operator()(std::size_t i, std::size_t j) const {
    return mat_(i, j);
  }

 private:
  State(const CMatrix<N>& m, const std::array<double, N>& spectrum)
      : mat_(m), spectrum_(spectrum) {}

  CMatrix<N> mat_;
  std::array<double, N> spectrum_;
};

using DensityMatrix = State<4>;
using ReducedDensity = State<2>;

extern template class State<2>;
extern template class State<4>;

DensityMatrix make_density(const CMatrix4::Rows& entries);
DensityMatrix make_density(const CMatrix4& m);

/// Trace over qubit B, leaving rho_A.
ReducedDensity partial_trace_B_out(const DensityMatrix& rho);
/// Trace over qubit A, leaving rho_B.
ReducedDensity partial_trace_A_out(const DensityMatrix& rho);

/// Transpose on the qubit-A index. For two qubits the spectrum does not
/// depend on which factor is transposed.
CMatrix4 partial_transpose(const DensityMatrix& rho);

/// Tr(rho^2) from the matrix entries.
template <std::size_t N>
double purity(const State<N>& rho) {
  double p = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) p += std::norm(rho(i, j));
  return p;
}

/// Normalised linear entropy (4/3)(1 - Tr rho^2).
double linear_entropy(const DensityMatrix& rho);

/// Reads four lines of four whitespace-separated `re,im` entries.
DensityMatrix parse_density_text(std::string_view text);
std::string format_density_text(const DensityMatrix& rho);

}  // namespace entroplane
