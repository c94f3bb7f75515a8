#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rcs {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;
template <typename Scalar>
using Matrix4c = Eigen::Matrix<Complex<Scalar>, 4, 4>;
template <typename Scalar>
using MatrixXc = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using cdouble = Complex<double>;
using Mat2c = Matrix2c<double>;
using Mat4c = Matrix4c<double>;
using MatXc = MatrixXc<double>;

// Pauli operator k in {0: I, 1: X, 2: Y, 3: Z}.
template <typename Scalar = double>
Matrix2c<Scalar> pauli(int k) {
  using C = Complex<Scalar>;
  Matrix2c<Scalar> m;
  switch (k) {
    case 0: m << C(1), C(0), C(0), C(1); break;
    case 1: m << C(0), C(1), C(1), C(0); break;
    case 2: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case 3: m << C(1), C(0), C(0), C(-1); break;
    default: throw std::out_of_range("pauli index must be in [0, 3]");
  }
  return m;
}

// SWAP on two qubits, basis index = 2*first + second.
template <typename Scalar = double>
Matrix4c<Scalar> swap_operator() {
  Matrix4c<Scalar> s = Matrix4c<Scalar>::Zero();
  s(0, 0) = s(3, 3) = s(1, 2) = s(2, 1) = Complex<Scalar>(1);
  return s;
}

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CptpViolation : public std::runtime_error {
 public:
  CptpViolation(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class DegenerateConditioning : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rcs
