#pragma once

#include <complex>

#include <Eigen/Dense>

namespace chg {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

using ComplexLD = std::complex<long double>;
using CMatrixLD = Eigen::Matrix<ComplexLD, Eigen::Dynamic, Eigen::Dynamic>;
using CVectorLD = Eigen::Matrix<ComplexLD, Eigen::Dynamic, 1>;

}  // namespace chg
