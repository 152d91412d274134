#pragma once

// Fixed-size dense complex matrices, a Jacobi eigensolver for Hermitian
// matrices and adaptive Simpson quadrature.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>

#include "entroplane/error.hpp"

namespace entroplane {

using Complex = std::complex<double>;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kJacobiTolerance = 1e-13;
inline constexpr double kPsdClamp = 1e-10;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr int kQuadratureMaxDepth = 60;

/// Row-major N x N complex matrix. Density matrices use N = 4 (two qubits)
/// and N = 2 (one qubit); N = 3 is used for real correlation matrices.
template <std::size_t N>
class CMatrix {
  static_assert(N >= 2 && N <= 4, "CMatrix supports dimensions 2..4");

 public:
  static constexpr std::size_t dim = N;
  using Rows = std::array<std::array<Complex, N>, N>;

  CMatrix() = default;

  /// Builds a matrix from rows, rejecting NaN and infinite entries.
  static CMatrix from_rows(const Rows& rows) {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        const Complex z = rows[i][j];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
          throw NonFinite("matrix entry (" + std::to_string(i) + "," +
                          std::to_string(j) + ") is not finite");
        }
        m(i, j) = z;
      }
    }
    return m;
  }

  static CMatrix identity() {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMatrix diagonal(const std::array<double, N>& d) {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i) {
      if (!std::isfinite(d[i])) throw NonFinite("diagonal entry is not finite");
      m(i, i) = d[i];
    }
    return m;
  }

  /// Outer product |u><v|.
  static CMatrix outer(const std::array<Complex, N>& u,
                       const std::array<Complex, N>& v) {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
  }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * N + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * N + j];
  }

  CMatrix adjoint() const {
    CMatrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  CMatrix conjugate() const {
    CMatrix r;
    for (std::size_t k = 0; k < N * N; ++k) r.data_[k] = std::conj(data_[k]);
    return r;
  }

  Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  /// Largest |M - M^dagger| entry.
  double hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i; j < N; ++j)
        worst = std::max(worst,
                         std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs_diff(const CMatrix& other) const {
    double worst = 0.0;
    for (std::size_t k = 0; k < N * N; ++k)
      worst = std::max(worst, std::abs(data_[k] - other.data_[k]));
    return worst;
  }

  bool all_finite() const {
    for (const auto& z : data_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  CMatrix& operator+=(const CMatrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] += o.data_[k];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] -= o.data_[k];
    return *this;
  }
  CMatrix& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    CMatrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::array<Complex, N * N> data_{};
};

using CMatrix2 = CMatrix<2>;
using CMatrix4 = CMatrix<4>;

/// Eigenvalues sorted in descending order; eigenvectors are the columns of
/// a unitary matrix in the matching order.
template <std::size_t N>
struct EigenDecomposition {
  std::array<double, N> eigenvalues{};
  CMatrix<N> eigenvectors;

  /// V diag(lambda) V^dagger.
  CMatrix<N> reconstruct() const;
};

/// Cyclic complex Jacobi diagonalisation. Throws NotHermitian when the input
/// deviates from its adjoint by more than kHermitianTolerance and
/// NoConvergence when the off-diagonal Frobenius norm is not below
/// tol * max(1, ||M||_F) after kJacobiMaxSweeps sweeps.
template <std::size_t N>
EigenDecomposition<N> hermitian_eigen(const CMatrix<N>& m,
                                      double tol = kJacobiTolerance);

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Eigenvalues in [-kPsdClamp, 0) are clamped to zero; anything lower
/// raises NotPSD.
template <std::size_t N>
CMatrix<N> matrix_sqrt_psd(const CMatrix<N>& m);

extern template struct EigenDecomposition<2>;
extern template struct EigenDecomposition<3>;
extern template struct EigenDecomposition<4>;
extern template EigenDecomposition<2> hermitian_eigen(const CMatrix<2>&, double);
extern template EigenDecomposition<3> hermitian_eigen(const CMatrix<3>&, double);
extern template EigenDecomposition<4> hermitian_eigen(const CMatrix<4>&, double);
extern template CMatrix<2> matrix_sqrt_psd(const CMatrix<2>&);
extern template CMatrix<4> matrix_sqrt_psd(const CMatrix<4>&);

/// Integrates f over [lo, hi] by adaptive Simpson refinement, treating each
/// gap between consecutive breakpoints as an independent panel. The absolute
/// tolerance is shared between panels in proportion to their width.
/// Throws DomainError for malformed bounds and MaxDepth when a panel needs
/// more than kQuadratureMaxDepth bisections.
double integrate_adaptive(const std::function<double(double)>& f, double lo,
                          double hi, std::span<const double> breakpoints,
                          double tol);

inline double integrate_adaptive(const std::function<double(double)>& f,
                                 double lo, double hi,
                                 std::initializer_list<double> breakpoints,
                                 double tol) {
  return integrate_adaptive(
      f, lo, hi, std::span<const double>(breakpoints.begin(), breakpoints.size()),
      tol);
}

}  // namespace entroplane
