#include "entroplane/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <fmt/format.h>

namespace entroplane {

namespace {

template <std::size_t N>
double off_diagonal_norm(const CMatrix<N>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p, q). The rotation is the
// product of a phase on column q, which makes a(p, q) real and positive, and
// a real Givens rotation.
template <std::size_t N>
void jacobi_rotate(CMatrix<N>& a, CMatrix<N>& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase_conj = std::conj(apq) / r;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * r);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Complex u_pp = c;
  const Complex u_pq = s;
  const Complex u_qp = -s * phase_conj;
  const Complex u_qq = c * phase_conj;

  for (std::size_t k = 0; k < N; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * u_pp + akq * u_qp;
    a(k, q) = akp * u_pq + akq * u_qq;
  }
  for (std::size_t k = 0; k < N; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(u_pp) * apk + std::conj(u_qp) * aqk;
    a(q, k) = std::conj(u_pq) * apk + std::conj(u_qq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < N; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * u_pp + vkq * u_qp;
    v(k, q) = vkp * u_pq + vkq * u_qq;
  }
}

struct Panel {
  double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, const Panel& p,
                        double eps, int depth) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, m, p.fa, flm, p.fm);
  const double right = simpson(m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  if (depth >= kQuadratureMaxDepth) {
    throw MaxDepth(fmt::format(
        "adaptive Simpson exceeded {} levels on [{:.17g}, {:.17g}]",
        kQuadratureMaxDepth, p.a, p.b));
  }
  return adaptive_simpson(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * eps,
                          depth + 1) +
         adaptive_simpson(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * eps,
                          depth + 1);
}

}  // namespace

template <std::size_t N>
CMatrix<N> EigenDecomposition<N>::reconstruct() const {
  CMatrix<N> scaled = eigenvectors;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) scaled(i, j) *= eigenvalues[j];
  return scaled * eigenvectors.adjoint();
}

template <std::size_t N>
EigenDecomposition<N> hermitian_eigen(const CMatrix<N>& m, double tol) {
  if (!m.all_finite()) throw NonFinite("eigensolver input is not finite");
  const double defect = m.hermiticity_defect();
  if (defect > kHermitianTolerance) {
    throw NotHermitian(
        fmt::format("matrix is not Hermitian: max |M - M^H| = {:.3e}", defect));
  }

  CMatrix<N> a = (m + m.adjoint()) * Complex{0.5};
  CMatrix<N> v = CMatrix<N>::identity();
  const double threshold = tol * std::max(1.0, m.frobenius_norm());

  bool converged = false;
  for (int sweep = 0; sweep <= kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) < threshold) {
      converged = true;
      break;
    }
    if (sweep == kJacobiMaxSweeps) break;
    for (std::size_t p = 0; p + 1 < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) jacobi_rotate(a, v, p, q);
  }
  if (!converged) {
    throw NoConvergence(fmt::format(
        "Jacobi eigensolver did not converge in {} sweeps (off-diagonal {:.3e})",
        kJacobiMaxSweeps, off_diagonal_norm(a)));
  }

  std::array<std::size_t, N> order{};
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigenDecomposition<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < N; ++i)
      out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

template <std::size_t N>
CMatrix<N> matrix_sqrt_psd(const CMatrix<N>& m) {
  EigenDecomposition<N> eig = hermitian_eigen(m);
  for (double& lambda : eig.eigenvalues) {
    if (lambda < -kPsdClamp) {
      throw NotPSD(
          fmt::format("matrix has eigenvalue {:.6e} below -{:.0e}", lambda, kPsdClamp));
    }
    lambda = std::sqrt(std::max(lambda, 0.0));
  }
  CMatrix<N> r = eig.reconstruct();
  return (r + r.adjoint()) * Complex{0.5};
}

double integrate_adaptive(const std::function<double(double)>& f, double lo,
                          double hi, std::span<const double> breakpoints,
                          double tol) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("integration bounds must satisfy lo <= hi");
  if (!(tol > 0.0)) throw DomainError("integration tolerance must be positive");

  std::vector<double> edges;
  edges.reserve(breakpoints.size() + 2);
  edges.push_back(lo);
  double previous = lo;
  for (double bp : breakpoints) {
    if (bp < lo || bp > hi || bp < previous)
      throw DomainError("breakpoints must be sorted and lie within [lo, hi]");
    previous = bp;
    if (bp > edges.back()) edges.push_back(bp);
  }
  if (hi > edges.back()) edges.push_back(hi);

  const double width = hi - lo;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double a = edges[k];
    const double b = edges[k + 1];
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const Panel panel{a, b, fa, fm, fb, simpson(a, b, fa, fm, fb)};
    total += adaptive_simpson(f, panel, tol * (b - a) / width, 0);
  }
  return total;
}

template struct EigenDecomposition<2>;
template struct EigenDecomposition<3>;
template struct EigenDecomposition<4>;
template EigenDecomposition<2> hermitian_eigen(const CMatrix<2>&, double);
template EigenDecomposition<3> hermitian_eigen(const CMatrix<3>&, double);
template EigenDecomposition<4> hermitian_eigen(const CMatrix<4>&, double);
template CMatrix<2> matrix_sqrt_psd(const CMatrix<2>&);
template CMatrix<4> matrix_sqrt_psd(const CMatrix<4>&);

}  // namespace entroplane
