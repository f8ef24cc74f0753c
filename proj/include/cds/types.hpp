#pragma once

#include <Eigen/Dense>
#include <complex>

namespace cds {

template <typename Scalar>
using Complex = std::complex<Scalar>;

/// Dense complex operator on an excitation sector (dimension 1, 3 or 4).
template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Fixed-size operator on the two-atom product space.
template <typename Scalar>
using Matrix4c = Eigen::Matrix<Complex<Scalar>, 4, 4>;

/// Max |m - m^dagger| entry. Works on any square Eigen expression.
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  typename Eigen::NumTraits<typename Derived::Scalar>::Real tol) {
  if (m.rows() != m.cols()) return false;
  if (m.rows() == 0) return true;
  return (m.derived() - m.derived().adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace cds
