#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cds/types.hpp"

namespace cds {

/// Physical configuration: two identical two-level atoms, one coupled to a
/// resonant single-mode cavity (rate g), the atoms coupled to each other by a
/// dipole-dipole exchange term (rate gamma). hbar = 1, all rates dimensionless.
template <typename Scalar = double>
struct SystemParams {
  Scalar omega;  ///< atomic transition / mode frequency (resonant model)
  Scalar g;      ///< atom-1 to field coupling rate
  Scalar gamma;  ///< atom-atom dipole-dipole rate
  int n0;        ///< initial photon occupation of the field

  SystemParams(Scalar omega_, Scalar g_, Scalar gamma_, int n0_)
      : omega(omega_), g(g_), gamma(gamma_), n0(n0_) {
    if (!(std::isfinite(omega) && std::isfinite(g) && std::isfinite(gamma)))
      throw std::invalid_argument("system parameters must be finite");
    if (g < Scalar(0)) throw std::invalid_argument("coupling g must be non-negative");
    if (gamma < Scalar(0)) throw std::invalid_argument("coupling gamma must be non-negative");
    if (n0 < 0) throw std::invalid_argument("photon number n0 must be non-negative");
  }
};

/// One product ket |atom1, atom2, photons>.
struct BasisKet {
  bool atom1_excited = false;
  bool atom2_excited = false;
  int photons = 0;

  int excitation() const {
    return photons + (atom1_excited ? 1 : 0) + (atom2_excited ? 1 : 0);
  }
  /// Index of the two-atom configuration in the fixed order ee, eg, ge, gg.
  int atom_index() const {
    return (atom1_excited ? 0 : 2) + (atom2_excited ? 0 : 1);
  }
  std::string display() const {
    std::string s = "|";
    s += atom1_excited ? 'e' : 'g';
    s += ',';
    s += atom2_excited ? 'e' : 'g';
    s += ',';
    s += std::to_string(photons);
    s += '>';
    return s;
  }
  /// Compact label safe for file headers, e.g. "eg2".
  std::string short_label() const {
    std::string s;
    s += atom1_excited ? 'e' : 'g';
    s += atom2_excited ? 'e' : 'g';
    s += std::to_string(photons);
    return s;
  }
  bool operator==(const BasisKet&) const = default;
};

/// Ordered basis of the excitation sector reachable from |g,g,n0>. The total
/// excitation number (photons plus excited atoms) is conserved, so the
/// dynamics never leaves this sector.
struct SubspaceBasis {
  int excitation = 0;           ///< shared total excitation of every ket
  std::vector<BasisKet> kets;   ///< order: gg, eg, ge, ee (existing ones)

  int dim() const { return static_cast<int>(kets.size()); }
  bool operator==(const SubspaceBasis&) const = default;
};

/// Basis of the sector with total excitation n0. Kets whose photon number
/// would be negative do not exist, so the dimension is 1 (n0 = 0),
/// 3 (n0 = 1) or 4 (n0 >= 2).
inline SubspaceBasis build_basis(int n0) {
  if (n0 < 0) throw std::invalid_argument("photon number n0 must be non-negative");
  SubspaceBasis basis;
  basis.excitation = n0;
  basis.kets.push_back({false, false, n0});
  if (n0 >= 1) {
    basis.kets.push_back({true, false, n0 - 1});
    basis.kets.push_back({false, true, n0 - 1});
  }
  if (n0 >= 2) basis.kets.push_back({true, true, n0 - 2});
  return basis;
}

template <typename Scalar>
SubspaceBasis build_basis(const SystemParams<Scalar>& params) {
  return build_basis(params.n0);
}

/// Sector Hamiltonian in the build_basis order. With spin-z eigenvalues
/// +-1/2 the free part is uniform across the sector,
/// omega * (photons + excited - 1) = (n0 - 1) * omega, so the couplings are
/// the only structure: g*sqrt(n0) on the photon-exchange bond gg<->eg,
/// gamma on the dipole bond eg<->ge, g*sqrt(n0-1) on ge<->ee.
/// Hermitian by construction (entries mirrored, not recomputed).
template <typename Scalar>
ComplexMatrix<Scalar> build_hamiltonian(const SystemParams<Scalar>& params) {
  const SubspaceBasis basis = build_basis(params);
  const int d = basis.dim();
  ComplexMatrix<Scalar> h = ComplexMatrix<Scalar>::Zero(d, d);
  const Scalar diag = Scalar(params.n0 - 1) * params.omega;
  for (int i = 0; i < d; ++i) h(i, i) = diag;
  if (d >= 2) {
    const Scalar a = params.g * std::sqrt(Scalar(params.n0));
    h(0, 1) = a;
    h(1, 0) = a;
  }
  if (d >= 3) {
    h(1, 2) = params.gamma;
    h(2, 1) = params.gamma;
  }
  if (d >= 4) {
    const Scalar b = params.g * std::sqrt(Scalar(params.n0 - 1));
    h(2, 3) = b;
    h(3, 2) = b;
  }
  return h;
}

/// Scalars of the closed-form four-level spectrum.
template <typename Scalar = double>
struct SpectrumAux {
  Scalar A, B, C, D;
};

/// Closed-form eigenvalues of the four-dimensional sector, ascending.
template <typename Scalar = double>
struct AnalyticSpectrum {
  std::array<Scalar, 4> eigenvalues;
  SpectrumAux<Scalar> aux;
};

/// Closed-form spectrum (n0 >= 2 only): the four eigenvalues are
/// (n+1)*omega +- A and (n+1)*omega +- B with n = n0 - 2,
///   C = 4n g^2 + 6 g^2 + 2 gamma^2,
///   D = 2 sqrt(4(n+1) g^2 gamma^2 + (g^2 + gamma^2)^2),
///   A = sqrt(C + D)/2,  B = sqrt(C - D)/2.
/// B is evaluated through the identity C^2 - D^2 = 16(n+1)(n+2) g^4, which
/// avoids the cancellation in C - D when g is small against gamma.
template <typename Scalar>
AnalyticSpectrum<Scalar> analytic_spectrum(const SystemParams<Scalar>& params) {
  if (params.n0 < 2)
    throw std::domain_error(
        "analytic spectrum requires n0 >= 2 (sector smaller than four states)");
  const int n = params.n0 - 2;
  const Scalar u = params.g * params.g;
  const Scalar v = params.gamma * params.gamma;
  const Scalar c = Scalar(4 * n + 6) * u + Scalar(2) * v;
  const Scalar d =
      Scalar(2) * std::sqrt(Scalar(4 * (n + 1)) * u * v + (u + v) * (u + v));
  const Scalar sum = c + d;
  Scalar a = Scalar(0);
  Scalar b = Scalar(0);
  if (sum > Scalar(0)) {
    a = std::sqrt(sum) / Scalar(2);
    b = Scalar(2) * u * std::sqrt(Scalar((n + 1) * (n + 2)) / sum);
  }
  const Scalar center = Scalar(n + 1) * params.omega;
  AnalyticSpectrum<Scalar> out;
  out.eigenvalues = {center - a, center - b, center + b, center + a};
  out.aux = {a, b, c, d};
  return out;
}

/// Full eigendecomposition of a sector operator.
template <typename Scalar = double>
struct Spectrum {
  RealVector<Scalar> eigenvalues;      ///< ascending
  ComplexMatrix<Scalar> eigenvectors;  ///< orthonormal columns, phase-fixed

  int dim() const { return static_cast<int>(eigenvalues.size()); }
};

namespace detail {

/// Rotate each column so its largest-magnitude entry is real positive.
/// Makes the decomposition reproducible across runs at fixed input.
template <typename Scalar>
void fix_eigenvector_phases(ComplexMatrix<Scalar>& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index imax = 0;
    Scalar best = Scalar(0);
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const Scalar mag = std::abs(vectors(i, j));
      if (mag > best) {
        best = mag;
        imax = i;
      }
    }
    if (best > Scalar(0)) {
      const Complex<Scalar> phase = vectors(imax, j) / best;
      vectors.col(j) *= std::conj(phase);
    }
  }
}

}  // namespace detail

/// Numeric eigendecomposition; the independent check on analytic_spectrum and
/// the only source of eigenvectors. Input must be Hermitian to `tol`.
template <typename Scalar>
Spectrum<Scalar> numeric_eig(const ComplexMatrix<Scalar>& h,
                             Scalar tol = Scalar(1e-12)) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix must be square");
  if (!is_hermitian(h, tol))
    throw std::invalid_argument("matrix must be Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");
  Spectrum<Scalar> spec;
  spec.eigenvalues = solver.eigenvalues();
  spec.eigenvectors = solver.eigenvectors();
  detail::fix_eigenvector_phases(spec.eigenvectors);
  return spec;
}

/// Cavity-mode coupling seen by an atom at position (x, y, z):
/// g0 * sin(k0 z) * exp(-(x^2 + y^2) / w0^2). Standing wave along z,
/// Gaussian profile of width w0 transverse to it.
template <typename Scalar>
Scalar coupling_at_position(Scalar g0, Scalar k0, Scalar w0, Scalar x, Scalar y,
                            Scalar z) {
  if (!(std::isfinite(g0) && std::isfinite(k0) && std::isfinite(w0) &&
        std::isfinite(x) && std::isfinite(y) && std::isfinite(z)))
    throw std::invalid_argument("coupling arguments must be finite");
  if (g0 < Scalar(0)) throw std::invalid_argument("peak rate g0 must be non-negative");
  if (w0 <= Scalar(0)) throw std::invalid_argument("mode width w0 must be positive");
  return g0 * std::sin(k0 * z) * std::exp(-(x * x + y * y) / (w0 * w0));
}

}  // namespace cds
