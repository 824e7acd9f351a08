#pragma once

#include <Eigen/Dense>

namespace meshfree {

using Real = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

template <int Rows, int Cols = Rows>
using Mat = Eigen::Matrix<Real, Rows, Cols>;
template <int Elems>
using Vec = Eigen::Vector<Real, Elems>;

}  // namespace meshfree
