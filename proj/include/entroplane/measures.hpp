#pragma once

#include <array>

#include "entroplane/qstate.hpp"

namespace entroplane {

inline constexpr double kViolationThreshold = 1e-12;
inline constexpr double kRankThreshold = 1e-10;

/// An entropy in bits together with the order it was computed at.
struct EntropyValue {
  double alpha = 0.0;
  double value = 0.0;
};

/// Signed gaps Tr(rho^2) - Tr(rho_X^2) of the quadratic entropic inequality
/// for each subsystem. A positive gap certifies entanglement.
struct ViolationReport {
  double gap_a = 0.0;
  double gap_b = 0.0;
  bool violates_a = false;
  bool violates_b = false;
  bool violates_any = false;
};

struct ConcurrenceSpectrum {
  std::array<double, 4> lambdas{};  // descending
  double concurrence = 0.0;
};

/// Tr(rho^alpha) from the stored spectrum, with 0^alpha = 0 for alpha > 0.
template <std::size_t N>
double trace_power(const State<N>& rho, double alpha);

/// -sum lambda log2 lambda.
template <std::size_t N>
double von_neumann(const State<N>& rho);

/// Renyi entropy log2(Tr rho^alpha) / (1 - alpha). alpha = 1 gives the von
/// Neumann entropy and alpha = 0 the log of the rank (eigenvalues above
/// kRankThreshold). Negative orders throw DomainError.
template <std::size_t N>
EntropyValue renyi(const State<N>& rho, double alpha);

/// Tsallis entropy (1 - Tr rho^alpha) / (alpha - 1), non-negative for every
/// alpha > 0. alpha must be positive and different from 1.
template <std::size_t N>
double tsallis(const State<N>& rho, double alpha);

/// S_alpha(rho) - S_alpha(rho_A).
double conditional_renyi(const DensityMatrix& rho, double alpha);

/// (Tr rho_A^alpha - Tr rho^alpha) / ((alpha - 1) Tr rho_A^alpha); same sign
/// as conditional_renyi and non-negative on separable states for alpha > 1.
double conditional_tsallis(const DensityMatrix& rho, double alpha);

ViolationReport entropic_violation(const DensityMatrix& rho);

/// Wootters concurrence from the Hermitian matrix sqrt(rho) rho~ sqrt(rho),
/// which is similar to rho rho~ where rho~ = (Y x Y) rho* (Y x Y).
ConcurrenceSpectrum concurrence(const DensityMatrix& rho);

/// Closed form for X-shaped states with diagonal `diag` and coherences rho14
/// (entry (0,3)) and rho23 (entry (1,2)). Throws InvalidState when the
/// entries do not form a density matrix.
double concurrence_x_closed_form(const std::array<double, 4>& diag,
                                 Complex rho14, Complex rho23);

/// Correlation tensor T_ij = Tr(rho sigma_i x sigma_j), i, j in {x, y, z}.
std::array<std::array<double, 3>, 3> correlation_tensor(const DensityMatrix& rho);

/// Maximal CHSH value 2 sqrt(m1 + m2) over the two largest eigenvalues of
/// T^T T. Values above 2 violate the CHSH inequality.
double chsh_max(const DensityMatrix& rho);

extern template double trace_power(const State<2>&, double);
extern template double trace_power(const State<4>&, double);
extern template double von_neumann(const State<2>&);
extern template double von_neumann(const State<4>&);
extern template EntropyValue renyi(const State<2>&, double);
extern template EntropyValue renyi(const State<4>&, double);
extern template double tsallis(const State<2>&, double);
extern template double tsallis(const State<4>&, double);

}  // namespace entroplane
