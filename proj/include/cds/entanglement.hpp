#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "cds/dynamics.hpp"

namespace cds {

/// Wootters concurrence with the four spin-flip singular values behind it.
/// value = max(0, l1 - l2 - l3 - l4), lambdas descending and non-negative.
template <typename Scalar = double>
struct ConcurrenceValue {
  Scalar value;
  std::array<Scalar, 4> lambdas;
};

namespace detail {

/// sigma_y (x) sigma_y in the ee, eg, ge, gg order: the anti-diagonal
/// (-1, 1, 1, -1). Real and symmetric.
template <typename Scalar>
Matrix4c<Scalar> spin_flip_matrix() {
  Matrix4c<Scalar> y = Matrix4c<Scalar>::Zero();
  y(0, 3) = Complex<Scalar>(-1);
  y(1, 2) = Complex<Scalar>(1);
  y(2, 1) = Complex<Scalar>(1);
  y(3, 0) = Complex<Scalar>(-1);
  return y;
}

/// The Wootters lambdas equal the singular values of F^T (sy x sy) F for any
/// factorization rho = F F^dagger: with S = F^T Y F one has
/// rho rho~ = F conj(S) F^T Y, whose nonzero eigenvalues are those of
/// conj(S) S, i.e. the squared singular values of S. Working on the factor
/// never squares small populations, so near-zero lambdas come out at
/// amplitude accuracy instead of sqrt(eps).
template <typename Scalar>
ConcurrenceValue<Scalar> concurrence_from_factor(
    const typename TwoAtomDensity<Scalar>::Factor& factor) {
  using DynMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
  const DynMatrix s =
      factor.transpose() * spin_flip_matrix<Scalar>() * factor;
  Eigen::JacobiSVD<DynMatrix> svd(s);
  ConcurrenceValue<Scalar> out;
  out.lambdas = {Scalar(0), Scalar(0), Scalar(0), Scalar(0)};
  const auto& sv = svd.singularValues();  // descending
  for (Eigen::Index i = 0; i < sv.size() && i < 4; ++i) out.lambdas[static_cast<std::size_t>(i)] = sv(i);
  const Scalar raw =
      out.lambdas[0] - out.lambdas[1] - out.lambdas[2] - out.lambdas[3];
  out.value = std::clamp(raw, Scalar(0), Scalar(1));
  return out;
}

}  // namespace detail

/// Concurrence of an arbitrary two-qubit density matrix. Uses the exact
/// ensemble factor when the matrix carries one (partial-trace outputs);
/// otherwise factors through the eigendecomposition, clipping eigenvalues in
/// [-1e-10, 0) to zero and dropping numerically null directions.
template <typename Scalar>
ConcurrenceValue<Scalar> concurrence(const TwoAtomDensity<Scalar>& rho) {
  if (rho.factor()) return detail::concurrence_from_factor<Scalar>(*rho.factor());

  Eigen::SelfAdjointEigenSolver<Matrix4c<Scalar>> solver(rho.entries());
  const auto& mu = solver.eigenvalues();
  if (mu.minCoeff() < Scalar(-1e-10))
    throw std::runtime_error("density matrix eigenvalue below -1e-10");
  // Numerical-rank cutoff: a truly zero eigenvalue reported as ~eps would
  // otherwise inject a sqrt(eps)-sized column into the factor.
  const Scalar cutoff = Scalar(16) * Eigen::NumTraits<Scalar>::epsilon();
  typename TwoAtomDensity<Scalar>::Factor factor(4, 4);
  Eigen::Index cols = 0;
  for (Eigen::Index i = 0; i < 4; ++i) {
    if (mu(i) <= cutoff) continue;
    factor.col(cols++) = solver.eigenvectors().col(i) * std::sqrt(mu(i));
  }
  return detail::concurrence_from_factor<Scalar>(factor.leftCols(cols));
}

/// Closed form for X-structured matrices (only diagonal plus anti-diagonal
/// entries): value = 2 max(0, |rho_eg,ge| - sqrt(rho_ee rho_gg),
///                             |rho_ee,gg| - sqrt(rho_eg rho_ge)).
/// Serves as the independent check on concurrence(): every state evolved
/// from |g,g,n0> reduces to this shape.
template <typename Scalar>
ConcurrenceValue<Scalar> concurrence_x_state(const TwoAtomDensity<Scalar>& rho) {
  const Matrix4c<Scalar>& r = rho.entries();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j || i + j == 3) continue;
      if (std::abs(r(i, j)) > Scalar(1e-12))
        throw std::invalid_argument("density matrix is not X-structured");
    }
  const Scalar pop_ee = r(kEE, kEE).real();
  const Scalar pop_eg = r(kEG, kEG).real();
  const Scalar pop_ge = r(kGE, kGE).real();
  const Scalar pop_gg = r(kGG, kGG).real();
  const Scalar inner = std::abs(r(kEG, kGE));   // eg<->ge coherence
  const Scalar outer = std::abs(r(kEE, kGG));   // ee<->gg coherence
  const Scalar p = std::sqrt(std::max(Scalar(0), pop_ee * pop_gg));
  const Scalar q = std::sqrt(std::max(Scalar(0), pop_eg * pop_ge));

  ConcurrenceValue<Scalar> out;
  out.lambdas = {p + outer, std::abs(p - outer), q + inner, std::abs(q - inner)};
  std::sort(out.lambdas.begin(), out.lambdas.end(), std::greater<Scalar>());
  out.value = std::clamp(
      Scalar(2) * std::max({Scalar(0), inner - p, outer - q}), Scalar(0), Scalar(1));
  return out;
}

}  // namespace cds
