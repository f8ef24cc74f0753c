#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "cds/model.hpp"

namespace cds {

/// Normalized pure state of the excitation sector.
template <typename Scalar = double>
class StateVector {
 public:
  StateVector(SubspaceBasis basis, ComplexVector<Scalar> amplitudes)
      : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != basis_.dim())
      throw std::invalid_argument("amplitude count does not match basis dimension");
    if (std::abs(amplitudes_.squaredNorm() - Scalar(1)) > Scalar(1e-12))
      throw std::invalid_argument("state vector must be normalized");
  }

  const SubspaceBasis& basis() const { return basis_; }
  const ComplexVector<Scalar>& amplitudes() const { return amplitudes_; }
  int dim() const { return basis_.dim(); }

 private:
  SubspaceBasis basis_;
  ComplexVector<Scalar> amplitudes_;
};

/// The separable start |g,g,n0>: both atoms in the ground state, the field in
/// the Fock state |n0>. Always the first ket of the sector basis.
template <typename Scalar>
StateVector<Scalar> initial_state(const SystemParams<Scalar>& params) {
  SubspaceBasis basis = build_basis(params);
  ComplexVector<Scalar> amps = ComplexVector<Scalar>::Zero(basis.dim());
  amps(0) = Complex<Scalar>(1);
  return StateVector<Scalar>(std::move(basis), std::move(amps));
}

/// Exact propagation psi(t) = V exp(-i diag(lambda) t) V^dagger psi(0) from a
/// precomputed spectrum. Negative t runs the evolution backwards.
template <typename Scalar>
StateVector<Scalar> propagate(const Spectrum<Scalar>& spectrum,
                              const StateVector<Scalar>& psi0, Scalar t) {
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
  if (spectrum.dim() != psi0.dim())
    throw std::invalid_argument("spectrum and state dimensions do not match");
  const Complex<Scalar> mi(0, -1);
  ComplexVector<Scalar> coeffs = spectrum.eigenvectors.adjoint() * psi0.amplitudes();
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    coeffs(i) *= std::exp(mi * spectrum.eigenvalues(i) * t);
  return StateVector<Scalar>(psi0.basis(), spectrum.eigenvectors * coeffs);
}

template <typename Scalar>
StateVector<Scalar> propagate(const ComplexMatrix<Scalar>& h,
                              const StateVector<Scalar>& psi0, Scalar t) {
  if (h.rows() != psi0.dim())
    throw std::invalid_argument("operator and state dimensions do not match");
  return propagate(numeric_eig(h), psi0, t);
}

/// Independent propagation route: scaled-and-squared matrix exponential of
/// -iHt instead of the spectral decomposition. The uniform part of the
/// diagonal is split off as a scalar phase first, which keeps the Pade
/// scaling of the remainder small at large t.
template <typename Scalar>
StateVector<Scalar> propagate_expm(const ComplexMatrix<Scalar>& h,
                                   const StateVector<Scalar>& psi0, Scalar t) {
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix must be square");
  if (h.rows() != psi0.dim())
    throw std::invalid_argument("operator and state dimensions do not match");
  if (!is_hermitian(h, Scalar(1e-12)))
    throw std::invalid_argument("matrix must be Hermitian");
  const int d = psi0.dim();
  const Scalar mean_diag = h.trace().real() / Scalar(d);
  const Complex<Scalar> mi(0, -1);
  ComplexMatrix<Scalar> shifted = h;
  for (int i = 0; i < d; ++i) shifted(i, i) -= mean_diag;
  const ComplexMatrix<Scalar> u = (mi * t * shifted).exp();
  const Complex<Scalar> phase = std::exp(mi * mean_diag * t);
  return StateVector<Scalar>(psi0.basis(), phase * (u * psi0.amplitudes()));
}

/// Two-atom density matrix in the fixed product order ee, eg, ge, gg
/// (atom 1 first). Hermitian, unit trace, positive semdefinite up to 1e-10.
template <typename Scalar = double>
class TwoAtomDensity {
 public:
  /// rho = factor * factor^dagger; one column per field Fock component.
  using Factor = Eigen::Matrix<Complex<Scalar>, 4, Eigen::Dynamic, 0, 4, 4>;

  explicit TwoAtomDensity(Matrix4c<Scalar> entries)
      : entries_(std::move(entries)) {
    validate();
  }

  TwoAtomDensity(Matrix4c<Scalar> entries, Factor factor)
      : entries_(std::move(entries)), factor_(std::move(factor)) {
    validate();
  }

  const Matrix4c<Scalar>& entries() const { return entries_; }

  /// Exact ensemble factor when the matrix came from a partial trace;
  /// lets downstream algebra work at amplitude level instead of squared
  /// populations.
  const std::optional<Factor>& factor() const { return factor_; }

 private:
  void validate() const {
    if (!is_hermitian(entries_, Scalar(1e-12)))
      throw std::invalid_argument("density matrix must be Hermitian");
    if (std::abs(entries_.trace().real() - Scalar(1)) > Scalar(1e-12))
      throw std::invalid_argument("density matrix must have unit trace");
    Eigen::SelfAdjointEigenSolver<Matrix4c<Scalar>> solver(entries_);
    if (solver.eigenvalues().minCoeff() < Scalar(-1e-10))
      throw std::invalid_argument("density matrix must be positive semidefinite");
  }

  Matrix4c<Scalar> entries_;
  std::optional<Factor> factor_;
};

/// Indices of the two-atom product basis used by TwoAtomDensity.
enum AtomIndex : int { kEE = 0, kEG = 1, kGE = 2, kGG = 3 };

/// Trace out the field: rho_atoms = sum_n <n|psi><psi|n>. Sector kets sharing
/// a photon number land in the same unnormalized two-atom column phi_n, and
/// rho = sum_n phi_n phi_n^dagger. Distinct photon numbers cannot interfere,
/// which is what removes every coherence except the eg<->ge pair for states
/// evolved from |g,g,n0>.
template <typename Scalar>
TwoAtomDensity<Scalar> reduce_to_atoms(const StateVector<Scalar>& psi) {
  const SubspaceBasis& basis = psi.basis();
  std::vector<int> photon_values;
  for (const BasisKet& ket : basis.kets) {
    bool seen = false;
    for (int p : photon_values) seen = seen || (p == ket.photons);
    if (!seen) photon_values.push_back(ket.photons);
  }
  typename TwoAtomDensity<Scalar>::Factor factor =
      TwoAtomDensity<Scalar>::Factor::Zero(4, static_cast<Eigen::Index>(photon_values.size()));
  for (int i = 0; i < basis.dim(); ++i) {
    const BasisKet& ket = basis.kets[static_cast<std::size_t>(i)];
    Eigen::Index col = 0;
    while (photon_values[static_cast<std::size_t>(col)] != ket.photons) ++col;
    factor(ket.atom_index(), col) = psi.amplitudes()(i);
  }
  Matrix4c<Scalar> rho = factor * factor.adjoint();
  return TwoAtomDensity<Scalar>(std::move(rho), std::move(factor));
}

}  // namespace cds
