#pragma once

#include <Eigen/Core>

namespace gvr {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
// Generators and representations are stored one row per sample index.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using DenseMat = Eigen::MatrixXd;

}  // namespace gvr
